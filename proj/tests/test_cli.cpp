#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

// End-to-end checks of the installed command-line tool.  TOFFSIM_CLI_PATH is
// injected by the build.

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
    const std::string cmd = std::string(TOFFSIM_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    if (status < 0) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("toffsim_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

}  // namespace

TEST_CASE("unitary verification gates the exit code") {
    CHECK(run_cli("unitary --out /dev/null") == 0);
    CHECK(run_cli("unitary --epsilon 0.07 --out /dev/null") == 0);  // report-only when noisy

    TempDir tmp;
    const fs::path empty = tmp.path / "empty.seq";
    std::ofstream(empty) << "# no pulses\n";
    CHECK(run_cli("unitary --sequence " + empty.string() + " --out /dev/null") == 1);
}

TEST_CASE("usage and parse errors exit with 2") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("unitary --no-such-flag") == 2);
    CHECK(run_cli("sweep --axis epsilon") == 2);  // missing --values
    CHECK(run_cli("run /nonexistent/file.seq") == 2);

    TempDir tmp;
    const fs::path bad = tmp.path / "bad.seq";
    std::ofstream(bad) << "sb 1 pi 0\nlaser 2 pi 0\n";
    CHECK(run_cli("run " + bad.string()) == 2);

    const fs::path out_of_range = tmp.path / "range.seq";
    std::ofstream(out_of_range) << "carrier 9 pi 0\n";
    CHECK(run_cli("unitary --sequence " + out_of_range.string()) == 2);
}

TEST_CASE("identical invocations produce byte-identical files") {
    TempDir tmp;
    const fs::path a = tmp.path / "a.json";
    const fs::path b = tmp.path / "b.json";

    SUBCASE("sampled truth table") {
        const std::string flags = "truth-table --shots 100 --seed 7 --epsilon 0.05 --format json";
        REQUIRE(run_cli(flags + " --out " + a.string()) == 0);
        REQUIRE(run_cli(flags + " --out " + b.string()) == 0);
        CHECK(slurp(a) == slurp(b));
    }

    SUBCASE("fidelity is thread-count independent") {
        const std::string flags = "fidelity --samples 3000 --seed 3 --epsilon 0.07";
        REQUIRE(run_cli(flags + " --threads 1 --out " + a.string()) == 0);
        REQUIRE(run_cli(flags + " --threads 4 --out " + b.string()) == 0);
        // thread count is echoed in the config block; results must agree
        const std::string ja = slurp(a), jb = slurp(b);
        const std::string ra = ja.substr(ja.find("\"result\""));
        const std::string rb = jb.substr(jb.find("\"result\""));
        CHECK(ra == rb);
    }

    SUBCASE("sweep csv") {
        const std::string flags =
            "sweep --axis epsilon --values 0,0.02 --samples 500 --seed 5 --format csv";
        REQUIRE(run_cli(flags + " --out " + a.string()) == 0);
        REQUIRE(run_cli(flags + " --out " + b.string()) == 0);
        CHECK(slurp(a) == slurp(b));
        const std::string csv = slurp(a);
        CHECK(csv.rfind("value,f_mean,std_error,f_pro,duration_s\n", 0) == 0);
    }
}

TEST_CASE("serialized sequence files run back through the tool") {
    TempDir tmp;
    const fs::path seq = tmp.path / "toffoli.seq";
    std::ofstream(seq) << "sb 1 pi 1.5pi\n"
                          "sb 2 0.70710678118654752pi 1.5pi\n"
                          "sb 1 0.35355339059327376pi 0.5pi\n"
                          "sb 1 pi 0\n"
                          "sb 1 0.35355339059327376pi 0.5pi\n"
                          "carrier 3 0.5pi 0\n"
                          "sb 3 0.5pi pi\n"
                          "sb 3 1.4142135623730951pi 0.5pi\n"
                          "sb 3 0.5pi 0\n"
                          "carrier 3 0.5pi -0.29289321881345248pi\n"
                          "sb 1 0.35355339059327376pi 0.20710678118654752pi\n"
                          "sb 1 pi -0.29289321881345248pi\n"
                          "sb 1 0.35355339059327376pi 0.20710678118654752pi\n"
                          "sb 2 0.70710678118654752pi 1.2071067811865475pi\n"
                          "sb 1 pi 1.2071067811865475pi\n";
    CHECK(run_cli("unitary --sequence " + seq.string() + " --out /dev/null") == 0);
    CHECK(run_cli("run " + seq.string() + " --format csv --out /dev/null") == 0);
}
