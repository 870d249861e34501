// Acceptance suite: runs every verification criterion end to end and prints
// one PASS/FAIL line per criterion.  Exit code = number of failed criteria.

#include "toffsim/tomo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

using namespace toffsim;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const double kSq2 = std::sqrt(2.0);

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? " [ok]" : " [FAIL]");
    }
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

double aligned_deviation(const Mat& ref, const Mat& r) {
    const Complex tr = (ref.adjoint() * r).trace();
    const Complex phase = std::abs(tr) > 1e-12 ? tr / std::abs(tr) : Complex(1.0, 0.0);
    return ((r / phase) - ref).cwiseAbs().maxCoeff();
}

const PhysicalParams kParams;

OperatorMatrix ideal_unitary(int n_max = 4) {
    return sequence_unitary(toffoli_sequence(), kParams, NoiseConfig{}, make_basis(3, n_max));
}

QubitProcess process_with(const NoiseConfig& noise) {
    return simulate_process(toffoli_sequence(), kParams, noise, make_basis());
}

NoiseConfig epsilon_noise(double eps) {
    NoiseConfig n;
    n.addressing_ratio = eps;
    return n;
}

NoiseConfig detuning_noise(double hz) {
    NoiseConfig n;
    n.detuning = 2.0 * kPi * hz;
    return n;
}

Outcome criterion_unitary_equivalence() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const Mat r = restrict_to_qubits(ideal_unitary());
    const double dev = aligned_deviation(reference_toffoli_unitary(), r);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(dev < 1e-9, "aligned max deviation " + num(dev) + " < 1e-9");
    o.require(seconds < 1.0, "runtime " + num(seconds) + " s < 1 s");
    return o;
}

Outcome criterion_encoding_structure() {
    Outcome o;
    const CompositeBasis basis = make_basis();
    const NoiseConfig ideal;
    const double sin_a = std::sin(kPi / (2.0 * kSq2));
    const double cos_a = std::cos(kPi / (2.0 * kSq2));

    const OperatorMatrix u12 = sequence_unitary(slice(toffoli_sequence(), 1, 2), kParams, ideal, basis);
    auto amp = [&](const StateVector& psi, const char* label, int n) {
        return std::abs(psi.amplitudes(basis_index(basis, word_from_label(basis, label), n)));
    };
    const StateVector ss = apply_unitary(u12, basis_state(basis, word_from_label(basis, "SSD"), 0));
    o.require(std::abs(amp(ss, "DDD", 2) - 1.0) < 1e-9, "|SS,0> -> |DD,2| magnitude");
    const StateVector ds = apply_unitary(u12, basis_state(basis, word_from_label(basis, "DSD"), 0));
    o.require(std::abs(amp(ds, "DDD", 1) - sin_a) < 1e-9 && std::abs(amp(ds, "DSD", 0) - cos_a) < 1e-9,
              "|DS,0> splits as (sin, cos)");
    const StateVector sd = apply_unitary(u12, basis_state(basis, word_from_label(basis, "SDD"), 0));
    o.require(std::abs(amp(sd, "DDD", 1) - cos_a) < 1e-9 && std::abs(amp(sd, "DSD", 0) - sin_a) < 1e-9,
              "|SD,0> splits as (cos, sin)");
    const StateVector dd = apply_unitary(u12, basis_state(basis, word_from_label(basis, "DDD"), 0));
    o.require(std::abs(amp(dd, "DDD", 0) - 1.0) < 1e-9, "|DD,0> invariant");

    const OperatorMatrix u35 = sequence_unitary(slice(toffoli_sequence(), 3, 5), kParams, ideal, basis);
    for (int n = 0; n <= 1; ++n) {
        const StateVector out =
            apply_unitary(u35, basis_state(basis, word_from_label(basis, "DDD"), n + 1));
        const double pop =
            std::norm(out.amplitudes(basis_index(basis, word_from_label(basis, "SDD"), n)));
        o.require(std::abs(pop - 1.0) < 1e-9,
                  "composite |D," + std::to_string(n + 1) + "> -> |S," + std::to_string(n) + ">");
    }
    const StateVector zero = basis_state(basis, word_from_label(basis, "DDD"), 0);
    o.require(std::abs(state_fidelity(zero, apply_unitary(u35, zero)) - 1.0) < 1e-9,
              "composite fixes |D,0>");

    const OperatorMatrix full = ideal_unitary();
    double worst = 0.0;
    for (int w = 0; w < 8; ++w) {
        const StateVector out = apply_unitary(full, basis_state(basis, w, 0));
        double p0 = 0.0;
        for (int w2 = 0; w2 < 8; ++w2) p0 += std::norm(out.amplitudes(basis_index(basis, w2, 0)));
        worst = std::max(worst, 1.0 - p0);
    }
    o.require(worst < 1e-9, "decoding returns motion to n=0 (worst deficit " + num(worst) + ")");
    return o;
}

Outcome criterion_duration() {
    Outcome o;
    const double dur = sequence_duration(toffoli_sequence(), kParams);
    const double area_oracle = (5.0 + 3.0 * kSq2) * kPi;  // sideband pulse areas summed by hand
    const double expected = area_oracle / kParams.omega_sb + 2.0 * (kPi / 2.0) / kParams.omega_carrier;
    o.require(std::abs(dur - expected) < 1e-12, "matches the area-sum oracle");
    o.require(std::abs(dur - 1.410e-3) <= 5e-6, "duration " + num(dur * 1e3) + " ms = 1.410 +- 0.005 ms");
    o.require(std::abs(dur - 1.5e-3) <= 0.15e-3, "within 0.15 ms of the quoted 1.5 ms");
    return o;
}

Outcome criterion_truth_table() {
    Outcome o;
    const QubitProcess proc = process_with(NoiseConfig{});
    const TruthTable exact = simulate_truth_table(proc, 0, 0);
    bool perm_ok = true;
    for (int a = 0; a < 8; ++a) {
        const int target = a == 6 ? 7 : (a == 7 ? 6 : a);
        for (int b = 0; b < 8; ++b) {
            const double want = b == target ? 1.0 : 0.0;
            if (std::abs(exact.probabilities(a, b) - want) > 1e-9) perm_ok = false;
        }
    }
    o.require(perm_ok, "exact table is the SSD<->SSS swap permutation");

    const int shots = 100;
    const TruthTable sampled = simulate_truth_table(proc, shots, 2026);
    bool shot_ok = true;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            const double p = exact.probabilities(a, b);
            const double sigma = std::sqrt(p * (1.0 - p) / shots);
            if (std::abs(sampled.probabilities(a, b) - p) > 3.0 * sigma + 1e-12) shot_ok = false;
        }
    o.require(shot_ok, "100-shot table within 3 sigma per cell");
    return o;
}

Outcome criterion_error_budget() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const Mat ut = reference_toffoli_unitary();

    const FidelityReport eps_rep =
        mean_gate_fidelity_mc(process_with(epsilon_noise(0.07)), ut, 10000, 11);
    const double eps_infid = 1.0 - eps_rep.estimate;
    o.require(eps_infid >= 0.06 && eps_infid <= 0.18,
              "epsilon=0.07 infidelity " + num(eps_infid) + " in [0.06, 0.18]");

    const FidelityReport det_rep =
        mean_gate_fidelity_mc(process_with(detuning_noise(100.0)), ut, 10000, 12);
    const double det_infid = 1.0 - det_rep.estimate;
    o.require(det_infid >= 0.03 && det_infid <= 0.12,
              "detuning=100Hz infidelity " + num(det_infid) + " in [0.03, 0.12]");

    // Monotonicity via the deterministic identity (8 F_pro + 1)/9.
    const ProcessMatrix ideal_chi = chi_from_unitary(ut);
    auto fmean_exact = [&](const NoiseConfig& n) {
        const double fpro = process_fidelity(chi_from_process(process_with(n)), ideal_chi);
        return (8.0 * fpro + 1.0) / 9.0;
    };
    bool eps_mono = true;
    double prev = 2.0;
    for (double e : {0.0, 0.02, 0.05, 0.07}) {
        const double f = fmean_exact(epsilon_noise(e));
        if (f > prev + 1e-12) eps_mono = false;
        prev = f;
    }
    o.require(eps_mono, "F_mean non-increasing over the epsilon sweep");
    bool det_mono = true;
    prev = 2.0;
    for (double hz : {0.0, 30.0, 60.0, 100.0}) {
        const double f = fmean_exact(detuning_noise(hz));
        if (f > prev + 1e-12) det_mono = false;
        prev = f;
    }
    o.require(det_mono, "F_mean non-increasing over the detuning sweep");

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(seconds < 120.0, "runtime " + num(seconds) + " s < 120 s");
    return o;
}

Outcome criterion_combined_noise() {
    Outcome o;
    NoiseConfig combined;
    combined.addressing_ratio = 0.07;
    combined.detuning = 2.0 * kPi * 100.0;
    const QubitProcess proc = process_with(combined);

    const FidelityReport rep = mean_gate_fidelity_mc(proc, reference_toffoli_unitary(), 10000, 13);
    o.require(rep.estimate >= 0.68 && rep.estimate <= 0.88,
              "F_mean " + num(rep.estimate) + " in [0.68, 0.88]");

    const double mc = mean_correct_probability(simulate_truth_table(proc, 0, 0));
    o.require(mc >= 0.72 && mc <= 0.92, "truth-table mean correct " + num(mc) + " in [0.72, 0.92]");
    return o;
}

Outcome criterion_tomography_properties() {
    Outcome o;
    NoiseConfig combined;
    combined.addressing_ratio = 0.07;
    combined.detuning = 2.0 * kPi * 100.0;
    NoiseConfig prep;
    prep.qubit_prep_error = 0.005;
    prep.motional_prep_error = 0.01;

    int idx = 0;
    for (const NoiseConfig& noise :
         {NoiseConfig{}, epsilon_noise(0.07), detuning_noise(100.0), combined, prep}) {
        const QubitProcess proc = process_with(noise);
        const ProcessMatrix chi = chi_from_process(proc);
        const std::string tag = "config " + std::to_string(idx++);
        o.require(chi.hermiticity_deficit() < 1e-10, tag + " Hermitian");
        o.require(chi.min_eigenvalue() >= -1e-9, tag + " PSD");
        const double tr = chi.trace_real();
        o.require(tr >= 1.0 - proc.leakage - 1e-9 && tr <= 1.0 + 1e-9,
                  tag + " trace in [1-leakage-1e-9, 1+1e-9]");
    }

    RandomStream rng(77);
    auto random_unitary = [&](int dim) {
        Mat m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m(i, j) = rng.complex_normal();
        Eigen::HouseholderQR<Mat> qr(m);
        Mat q = qr.householderQ();
        Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int i = 0; i < dim; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
        return q;
    };
    double worst = 0.0;
    for (int nq = 1; nq <= 2; ++nq)
        for (int trial = 0; trial < 5; ++trial) {
            const Mat u = random_unitary(1 << nq);
            worst = std::max(worst, (chi_from_unitary(u).chi -
                                     chi_from_process(unitary_process(u)).chi)
                                        .cwiseAbs()
                                        .maxCoeff());
        }
    const Mat ut = reference_toffoli_unitary();
    worst = std::max(worst, (chi_from_unitary(ut).chi - chi_from_process(unitary_process(ut)).chi)
                                .cwiseAbs()
                                .maxCoeff());
    o.require(worst < 1e-9, "tomography equals the direct chi on 1/2/3-qubit conjugations (worst " +
                                num(worst) + ")");
    return o;
}

Outcome criterion_fidelity_crosscheck() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const Mat ut = reference_toffoli_unitary();
    int idx = 0;
    for (const NoiseConfig& noise : {NoiseConfig{}, epsilon_noise(0.07), detuning_noise(100.0)}) {
        const FidelityReport rep = mean_gate_fidelity_mc(process_with(noise), ut, 10000, 40 + idx);
        const double gap = std::abs(rep.estimate - rep.analytic_crosscheck);
        o.require(gap < 3.0 * rep.std_error + 1e-9,
                  "config " + std::to_string(idx) + " |MC - identity| " + num(gap) + " < 3 se");
        ++idx;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(seconds < 60.0, "runtime " + num(seconds) + " s < 60 s");
    return o;
}

Outcome criterion_numerical_hygiene() {
    Outcome o;
    const CompositeBasis basis = make_basis();
    NoiseConfig combined;
    combined.addressing_ratio = 0.07;
    combined.detuning = 2.0 * kPi * 100.0;

    double worst_unitarity = 0.0;
    for (const NoiseConfig& noise : {NoiseConfig{}, combined})
        for (const PulseSpec& spec : toffoli_sequence().pulses)
            worst_unitarity = std::max(
                worst_unitarity, unitarity_deficit(pulse_unitary(spec, kParams, noise, basis).entries));
    o.require(worst_unitarity < 1e-10,
              "every propagator unitary (worst deficit " + num(worst_unitarity) + ")");

    const double trunc_diff =
        (restrict_to_qubits(ideal_unitary(4)) - restrict_to_qubits(ideal_unitary(6)))
            .cwiseAbs()
            .maxCoeff();
    o.require(trunc_diff < 1e-8, "n_max 4 vs 6 differ by " + num(trunc_diff) + " < 1e-8");

    RandomStream rng(4242);
    double worst_path = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        PulseSpec spec;
        spec.kind = rng.uniform() < 0.5 ? PulseKind::Carrier : PulseKind::BlueSideband;
        spec.ion = 1 + static_cast<int>(rng.next() % 3);
        spec.theta = rng.uniform() * 3.0 * kPi;
        spec.phi = rng.uniform() * 2.0 * kPi;
        const Mat a = pulse_unitary_analytic(spec, basis).entries;
        const Mat e = pulse_unitary(spec, kParams, NoiseConfig{}, basis).entries;
        worst_path = std::max(worst_path, (a - e).cwiseAbs().maxCoeff());
    }
    o.require(worst_path < 1e-10,
              "analytic vs eigensolver paths agree on 100 pulses (worst " + num(worst_path) + ")");
    return o;
}

Outcome criterion_reproducibility() {
    Outcome o;

    NoiseConfig noise = epsilon_noise(0.05);
    const QubitProcess proc = process_with(noise);
    const Mat ut = reference_toffoli_unitary();
    const FidelityReport a = mean_gate_fidelity_mc(proc, ut, 4096, 9, 1);
    const FidelityReport b = mean_gate_fidelity_mc(proc, ut, 4096, 9, 8);
    o.require(a.estimate == b.estimate && a.std_error == b.std_error,
              "Monte-Carlo identical for 1 and 8 workers");

    const TruthTable ta = simulate_truth_table(proc, 100, 7);
    const TruthTable tb = simulate_truth_table(proc, 100, 7);
    o.require((ta.probabilities - tb.probabilities).cwiseAbs().maxCoeff() == 0.0,
              "sampled truth table identical across calls");

#ifdef TOFFSIM_CLI_PATH
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("toffsim_acc_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string fa = (dir / "a.json").string();
    const std::string fb = (dir / "b.json").string();
    const std::string base = std::string(TOFFSIM_CLI_PATH) +
                             " fidelity --samples 3000 --seed 3 --epsilon 0.07 --detuning-hz 100";
    const int rc1 = std::system((base + " --threads 1 --out " + fa + " 2>/dev/null").c_str());
    const int rc2 = std::system((base + " --threads 6 --out " + fb + " 2>/dev/null").c_str());
    bool cli_ok = rc1 != -1 && rc2 != -1 && WEXITSTATUS(rc1) == 0 && WEXITSTATUS(rc2) == 0;
    if (cli_ok) {
        auto slurp = [](const std::string& p) {
            std::ifstream in(p, std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        const std::string ja = slurp(fa), jb = slurp(fb);
        const std::string ra = ja.substr(ja.find("\"result\""));
        const std::string rb = jb.substr(jb.find("\"result\""));
        cli_ok = !ra.empty() && ra == rb;
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    o.require(cli_ok, "CLI result block byte-identical across thread counts");
#endif
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"unitary equivalence", criterion_unitary_equivalence},
        {"encoding/decoding structure", criterion_encoding_structure},
        {"gate duration", criterion_duration},
        {"truth table", criterion_truth_table},
        {"error budget bands", criterion_error_budget},
        {"combined noise bands", criterion_combined_noise},
        {"tomography properties", criterion_tomography_properties},
        {"fidelity cross-check", criterion_fidelity_crosscheck},
        {"numerical hygiene", criterion_numerical_hygiene},
        {"reproducibility", criterion_reproducibility},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::printf("[%2zu] %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].name,
                    o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
