// toffsim: pulse-level simulator of the three-ion Toffoli gate.
//
// Subcommands: unitary, truth-table, chi, fidelity, sweep, run.
// Exit codes: 0 success, 1 verification failure (ideal-mode `unitary`),
// 2 usage or parse errors.

#include "CLI11.hpp"
#include "json.hpp"

#include "toffsim/tomo.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using json = nlohmann::json;
using namespace toffsim;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

struct RunConfig {
    double omega_sb_hz = 3300.0;
    double omega_carrier_hz = 50000.0;
    double epsilon = 0.0;
    double epsilon2 = 0.0;
    double detuning_hz = 0.0;
    double qubit_prep_error = 0.0;
    double motional_prep_error = 0.0;
    int n_max = 4;
    int shots = 100;
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string format = "json";
    std::string out_path;
    std::string sequence_path;

    PhysicalParams physical() const {
        PhysicalParams p;
        p.omega_sb = kTwoPi * omega_sb_hz;
        p.omega_carrier = kTwoPi * omega_carrier_hz;
        return p;
    }

    NoiseConfig noise() const {
        NoiseConfig n;
        n.addressing_ratio = epsilon;
        n.next_nearest_ratio = epsilon2;
        n.detuning = kTwoPi * detuning_hz;
        n.qubit_prep_error = qubit_prep_error;
        n.motional_prep_error = motional_prep_error;
        return n;
    }

    json echo(const std::string& command) const {
        json c;
        c["command"] = command;
        c["omega_sb_hz"] = omega_sb_hz;
        c["omega_carrier_hz"] = omega_carrier_hz;
        c["epsilon"] = epsilon;
        c["epsilon2"] = epsilon2;
        c["detuning_hz"] = detuning_hz;
        c["qubit_prep_error"] = qubit_prep_error;
        c["motional_prep_error"] = motional_prep_error;
        c["nmax"] = n_max;
        c["shots"] = shots;
        c["samples"] = samples;
        c["seed"] = seed;
        // threads deliberately not echoed: results are independent of it
        c["sequence"] = sequence_path.empty() ? std::string("builtin:toffoli") : sequence_path;
        return c;
    }
};

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json json_real_matrix(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json json_complex_matrix(const Mat& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(json{{"im", m(i, j).imag()}, {"re", m(i, j).real()}});
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_output(const RunConfig& config, const std::string& text) {
    if (config.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + config.out_path);
    out << text;
}

void emit_json(const RunConfig& config, const std::string& command, json result) {
    json doc;
    doc["config"] = config.echo(command);
    doc["result"] = std::move(result);
    write_output(config, doc.dump(2) + "\n");
}

PulseSequence load_sequence(const RunConfig& config) {
    if (config.sequence_path.empty()) return toffoli_sequence();
    std::ifstream in(config.sequence_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open sequence file: " + config.sequence_path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_sequence(text.str());
}

PulseSequence load_three_ion_sequence(const RunConfig& config) {
    PulseSequence seq = load_sequence(config);
    if (seq.num_ions != 3)
        throw CLI::ValidationError("sequence", "this command needs a 3-ion sequence");
    return seq;
}

double max_input_leakage(const OperatorMatrix& u) {
    double worst = 0.0;
    for (int w = 0; w < u.basis.num_words(); ++w) {
        const StateVector out = apply_unitary(u, basis_state(u.basis, w, 0));
        worst = std::max(worst, leakage_probability(out));
    }
    return worst;
}

std::vector<std::string> word_labels(const CompositeBasis& basis) {
    std::vector<std::string> labels;
    for (int w = 0; w < basis.num_words(); ++w) labels.push_back(word_label(basis, w));
    return labels;
}

int cmd_unitary(const RunConfig& config) {
    const PulseSequence seq = load_three_ion_sequence(config);
    const CompositeBasis basis = make_basis(3, config.n_max);
    const OperatorMatrix u = sequence_unitary(seq, config.physical(), config.noise(), basis);
    const Mat restriction = restrict_to_qubits(u);
    const Mat reference = reference_toffoli_unitary();

    const Complex tr = (reference.adjoint() * restriction).trace();
    const Complex phase = std::abs(tr) > 1e-12 ? tr / std::abs(tr) : Complex(1.0, 0.0);
    const double deviation = ((restriction / phase) - reference).cwiseAbs().maxCoeff();
    const double leakage = max_input_leakage(u);
    const bool ideal = config.noise().is_ideal();
    const bool pass = deviation < 1e-6 && leakage <= 1e-6;

    if (config.format == "json") {
        json result;
        result["deviation"] = deviation;
        result["global_phase"] = std::arg(phase);
        result["leakage"] = leakage;
        result["pass"] = pass;
        result["reference"] = json_complex_matrix(reference);
        result["restriction"] = json_complex_matrix(restriction);
        result["restriction_unitarity_deficit"] = unitarity_deficit(restriction);
        emit_json(config, "unitary", std::move(result));
    } else {
        std::string text = "row,col,sim_re,sim_im,ref_re,ref_im\n";
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                text += std::to_string(i) + "," + std::to_string(j) + "," +
                        fmt_double(restriction(i, j).real()) + "," +
                        fmt_double(restriction(i, j).imag()) + "," +
                        fmt_double(reference(i, j).real()) + "," +
                        fmt_double(reference(i, j).imag()) + "\n";
        write_output(config, text);
    }

    std::cerr << "unitary: " << (pass ? "PASS" : "FAIL") << " deviation=" << deviation
              << " leakage=" << leakage << "\n";
    if (ideal && !pass) return 1;
    return 0;
}

int cmd_truth_table(const RunConfig& config) {
    const PulseSequence seq = load_three_ion_sequence(config);
    const CompositeBasis basis = make_basis(3, config.n_max);
    const QubitProcess proc = simulate_process(seq, config.physical(), config.noise(), basis);
    const TruthTable table = simulate_truth_table(proc, config.shots, config.seed);
    const double mean_correct = mean_correct_probability(table);
    const auto labels = word_labels(basis);

    if (config.format == "json") {
        json result;
        result["labels"] = labels;
        result["mean_correct"] = mean_correct;
        result["probabilities"] = json_real_matrix(table.probabilities);
        json leak = json::array();
        for (int i = 0; i < table.row_leakage.size(); ++i) leak.push_back(table.row_leakage(i));
        result["row_leakage"] = std::move(leak);
        result["shots"] = table.shots;
        emit_json(config, "truth-table", std::move(result));
    } else {
        std::string text = "input";
        for (const auto& l : labels) text += "," + l;
        text += "\n";
        for (int i = 0; i < 8; ++i) {
            text += labels[i];
            for (int j = 0; j < 8; ++j) text += "," + fmt_double(table.probabilities(i, j));
            text += "\n";
        }
        text += "mean_correct," + fmt_double(mean_correct) + ",,,,,,,\n";
        write_output(config, text);
    }
    return 0;
}

int cmd_chi(const RunConfig& config, bool with_complex) {
    const PulseSequence seq = load_three_ion_sequence(config);
    const CompositeBasis basis = make_basis(3, config.n_max);
    const QubitProcess proc = simulate_process(seq, config.physical(), config.noise(), basis);
    const ProcessMatrix chi = chi_from_process(proc);
    const ProcessMatrix ideal = chi_from_unitary(reference_toffoli_unitary());
    const double fpro = process_fidelity(chi, ideal);
    const auto labels = pauli_labels(3);

    if (config.format == "json") {
        json result;
        json abs_rows = json::array();
        for (int i = 0; i < 64; ++i) {
            json row = json::array();
            for (int j = 0; j < 64; ++j) row.push_back(std::abs(chi.chi(i, j)));
            abs_rows.push_back(std::move(row));
        }
        result["abs"] = std::move(abs_rows);
        if (with_complex) result["chi"] = json_complex_matrix(chi.chi);
        result["hermiticity_deficit"] = chi.hermiticity_deficit();
        result["labels"] = labels;
        result["leakage"] = proc.leakage;
        result["min_eigenvalue"] = chi.min_eigenvalue();
        result["process_fidelity"] = fpro;
        result["trace"] = chi.trace_real();
        emit_json(config, "chi", std::move(result));
    } else {
        std::string text = "row,col,abs,re,im\n";
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j)
                text += labels[i] + "," + labels[j] + "," + fmt_double(std::abs(chi.chi(i, j))) +
                        "," + fmt_double(chi.chi(i, j).real()) + "," +
                        fmt_double(chi.chi(i, j).imag()) + "\n";
        text += "trace,," + fmt_double(chi.trace_real()) + ",,\n";
        text += "min_eigenvalue,," + fmt_double(chi.min_eigenvalue()) + ",,\n";
        text += "process_fidelity,," + fmt_double(fpro) + ",,\n";
        text += "leakage,," + fmt_double(proc.leakage) + ",,\n";
        write_output(config, text);
    }
    return 0;
}

int cmd_fidelity(const RunConfig& config) {
    const PulseSequence seq = load_three_ion_sequence(config);
    const CompositeBasis basis = make_basis(3, config.n_max);
    const QubitProcess proc = simulate_process(seq, config.physical(), config.noise(), basis);
    const Mat reference = reference_toffoli_unitary();
    const FidelityReport report =
        mean_gate_fidelity_mc(proc, reference, config.samples, config.seed, config.threads);
    const double fpro = process_fidelity(chi_from_process(proc), chi_from_unitary(reference));
    const double duration = sequence_duration(seq, config.physical());

    if (config.format == "json") {
        json result;
        result["analytic_crosscheck"] = report.analytic_crosscheck;
        result["duration_s"] = duration;
        result["estimate"] = report.estimate;
        result["leakage"] = proc.leakage;
        result["process_fidelity"] = fpro;
        result["samples"] = report.samples;
        result["seed"] = report.seed;
        result["std_error"] = report.std_error;
        emit_json(config, "fidelity", std::move(result));
    } else {
        std::string text =
            "estimate,std_error,samples,seed,analytic_crosscheck,process_fidelity,duration_s\n";
        text += fmt_double(report.estimate) + "," + fmt_double(report.std_error) + "," +
                std::to_string(report.samples) + "," + std::to_string(report.seed) + "," +
                fmt_double(report.analytic_crosscheck) + "," + fmt_double(fpro) + "," +
                fmt_double(duration) + "\n";
        write_output(config, text);
    }
    return 0;
}

int cmd_sweep(const RunConfig& config, const std::string& axis, const std::vector<double>& values) {
    if (values.empty()) throw CLI::ValidationError("--values", "need at least one value");

    const PulseSequence seq = load_three_ion_sequence(config);
    const CompositeBasis basis = make_basis(3, config.n_max);
    const Mat reference = reference_toffoli_unitary();
    const ProcessMatrix ideal = chi_from_unitary(reference);
    const double duration = sequence_duration(seq, config.physical());

    json rows = json::array();
    std::string csv = "value,f_mean,std_error,f_pro,duration_s\n";
    for (double v : values) {
        NoiseConfig noise = config.noise();
        if (axis == "epsilon")
            noise.addressing_ratio = v;
        else
            noise.detuning = kTwoPi * v;  // values given in Hz
        const QubitProcess proc = simulate_process(seq, config.physical(), noise, basis);
        const FidelityReport report =
            mean_gate_fidelity_mc(proc, reference, config.samples, config.seed, config.threads);
        const double fpro = process_fidelity(chi_from_process(proc), ideal);
        rows.push_back(json{{"duration_s", duration},
                            {"f_mean", report.estimate},
                            {"f_pro", fpro},
                            {"std_error", report.std_error},
                            {"value", v}});
        csv += fmt_double(v) + "," + fmt_double(report.estimate) + "," +
               fmt_double(report.std_error) + "," + fmt_double(fpro) + "," + fmt_double(duration) +
               "\n";
    }

    if (config.format == "json") {
        json result;
        result["axis"] = axis;
        result["rows"] = std::move(rows);
        emit_json(config, "sweep", std::move(result));
    } else {
        write_output(config, csv);
    }
    return 0;
}

int cmd_run(const RunConfig& config, const std::string& path) {
    RunConfig cfg = config;
    cfg.sequence_path = path;
    const PulseSequence seq = load_sequence(cfg);
    if (seq.num_ions > 8) throw CLI::ValidationError("file", "at most 8 ions are supported");
    const CompositeBasis basis = make_basis(seq.num_ions, cfg.n_max);
    const OperatorMatrix u = sequence_unitary(seq, cfg.physical(), cfg.noise(), basis);
    const Mat restriction = restrict_to_qubits(u);
    const double duration = sequence_duration(seq, cfg.physical());
    const double leakage = max_input_leakage(u);

    if (cfg.format == "json") {
        json result;
        result["duration_s"] = duration;
        result["max_input_leakage"] = leakage;
        result["num_ions"] = seq.num_ions;
        result["num_pulses"] = seq.pulses.size();
        result["restriction"] = json_complex_matrix(restriction);
        result["restriction_unitarity_deficit"] = unitarity_deficit(restriction);
        emit_json(cfg, "run", std::move(result));
    } else {
        std::string text = "row,col,re,im\n";
        for (Eigen::Index i = 0; i < restriction.rows(); ++i)
            for (Eigen::Index j = 0; j < restriction.cols(); ++j)
                text += std::to_string(i) + "," + std::to_string(j) + "," +
                        fmt_double(restriction(i, j).real()) + "," +
                        fmt_double(restriction(i, j).imag()) + "\n";
        text += "duration_s,," + fmt_double(duration) + ",\n";
        text += "max_input_leakage,," + fmt_double(leakage) + ",\n";
        write_output(cfg, text);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig config;
    std::string sweep_axis = "epsilon";
    std::vector<double> sweep_values;
    std::string run_path;
    bool chi_complex = false;

    CLI::App app{"pulse-level simulator of a three-ion Toffoli gate"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    auto add_common = [&](CLI::App* cmd, bool with_sequence = true) {
        cmd->add_option("--omega-sb-hz", config.omega_sb_hz, "sideband Rabi frequency / Hz");
        cmd->add_option("--omega-carrier-hz", config.omega_carrier_hz,
                        "carrier Rabi frequency / Hz");
        cmd->add_option("--epsilon", config.epsilon, "nearest-neighbor addressing ratio")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--epsilon2", config.epsilon2, "next-nearest addressing ratio")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--detuning-hz", config.detuning_hz, "COM mode detuning / Hz");
        cmd->add_option("--qubit-prep-error", config.qubit_prep_error,
                        "per-ion initialization flip probability")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--motional-prep-error", config.motional_prep_error,
                        "probability the mode starts in n=1")
            ->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--nmax", config.n_max, "Fock truncation")->check(CLI::Range(2, 64));
        cmd->add_option("--shots", config.shots, "shots per truth-table row (0 = exact)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--samples", config.samples, "Monte-Carlo sample count");
        cmd->add_option("--seed", config.seed, "RNG seed");
        cmd->add_option("--threads", config.threads,
                        "worker threads (results are independent of this)")
            ->check(CLI::Range(0, 256));
        cmd->add_option("--format", config.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--out", config.out_path, "output path (default stdout)");
        if (with_sequence)
            cmd->add_option("--sequence", config.sequence_path,
                            "sequence file instead of the builtin Toffoli");
    };

    CLI::App* unitary = app.add_subcommand(
        "unitary", "compare the simulated gate against the ideal Toffoli unitary");
    add_common(unitary);
    CLI::App* truth = app.add_subcommand("truth-table", "simulate the basis-state truth table");
    add_common(truth);
    CLI::App* chi = app.add_subcommand("chi", "process tomography chi matrix");
    add_common(chi);
    chi->add_flag("--complex", chi_complex, "also emit the complex chi entries (JSON)");
    CLI::App* fidelity = app.add_subcommand("fidelity", "Monte-Carlo mean gate fidelity");
    add_common(fidelity);
    CLI::App* sweep = app.add_subcommand("sweep", "sweep a noise parameter");
    add_common(sweep);
    sweep->add_option("--axis", sweep_axis, "epsilon | detuning (values in Hz)")
        ->check(CLI::IsMember({"epsilon", "detuning"}));
    sweep->add_option("--values", sweep_values, "sweep values")->delimiter(',')->required();
    CLI::App* run = app.add_subcommand("run", "simulate a sequence file");
    add_common(run, /*with_sequence=*/false);
    run->add_option("file", run_path, "sequence file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(unitary)) return cmd_unitary(config);
        if (app.got_subcommand(truth)) return cmd_truth_table(config);
        if (app.got_subcommand(chi)) return cmd_chi(config, chi_complex);
        if (app.got_subcommand(fidelity)) return cmd_fidelity(config);
        if (app.got_subcommand(sweep)) return cmd_sweep(config, sweep_axis, sweep_values);
        if (app.got_subcommand(run)) return cmd_run(config, run_path);
    } catch (const ParseError& e) {
        std::cerr << "sequence parse error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
