#include "toffsim/tomo.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace toffsim {

namespace {

constexpr Complex kI{0.0, 1.0};

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

std::vector<Mat> single_qubit_paulis() {
    Mat id = Mat::Identity(2, 2);
    Mat x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, -kI, kI, 0;
    z << 1, 0, 0, -1;
    return {id, x, y, z};
}

}  // namespace

Mat QubitProcess::apply(const Mat& rho) const {
    const int d = dim();
    if (rho.rows() != d || rho.cols() != d)
        throw std::invalid_argument("density matrix dimension mismatch");
    Mat out = Mat::Zero(d, d);
    for (const Mat& k : kraus) out += k * rho * k.adjoint();
    return out;
}

QubitProcess simulate_process(const PulseSequence& seq, const PhysicalParams& params,
                              const NoiseConfig& noise, const CompositeBasis& basis) {
    validate(noise);
    const OperatorMatrix u = sequence_unitary(seq, params, noise, basis);
    const int words = basis.num_words();
    const int levels = basis.num_levels();

    std::vector<std::pair<int, double>> motional;  // (initial Fock level, weight)
    if (noise.motional_prep_error < 1.0) motional.emplace_back(0, 1.0 - noise.motional_prep_error);
    if (noise.motional_prep_error > 0.0) motional.emplace_back(1, noise.motional_prep_error);

    // Per-ion independent flips as a Kraus mixture applied before the pulses.
    std::vector<std::pair<Mat, double>> flips;
    if (noise.qubit_prep_error > 0.0) {
        const auto p1 = single_qubit_paulis();
        const double p = noise.qubit_prep_error;
        for (int mask = 0; mask < words; ++mask) {
            Mat op = Mat::Identity(1, 1);
            double weight = 1.0;
            for (int q = 0; q < basis.num_qubits; ++q) {
                const bool flip = (mask >> (basis.num_qubits - 1 - q)) & 1;
                op = kron(op, flip ? p1[1] : p1[0]);
                weight *= flip ? p : (1.0 - p);
            }
            if (weight > 0.0) flips.emplace_back(std::move(op), weight);
        }
    } else {
        flips.emplace_back(Mat::Identity(words, words), 1.0);
    }

    QubitProcess proc;
    proc.num_qubits = basis.num_qubits;
    for (const auto& [n0, wn] : motional) {
        for (int np = 0; np < basis.n_max; ++np) {  // guard rung n_max excluded
            Mat block(words, words);
            for (int a = 0; a < words; ++a)
                for (int b = 0; b < words; ++b)
                    block(a, b) = u.entries(basis_index(basis, a, np), basis_index(basis, b, n0));
            for (const auto& [f, wf] : flips)
                proc.kraus.push_back(std::sqrt(wn * wf) * block * f);
        }
    }

    Mat total = Mat::Zero(words, words);
    for (const Mat& k : proc.kraus) total += k.adjoint() * k;
    proc.leakage = 1.0 - total.trace().real() / words;
    return proc;
}

QubitProcess unitary_process(const Mat& u) {
    if (unitarity_deficit(u) > 1e-10) throw std::invalid_argument("matrix is not unitary");
    int nq = 0;
    while ((1 << nq) < u.rows()) ++nq;
    if ((1 << nq) != u.rows()) throw std::invalid_argument("dimension is not a power of two");
    QubitProcess proc;
    proc.num_qubits = nq;
    proc.kraus = {u};
    proc.leakage = 0.0;
    return proc;
}

TruthTable simulate_truth_table(const QubitProcess& process, int shots, std::uint64_t seed) {
    if (shots < 0) throw std::invalid_argument("shots must be >= 0");
    const int d = process.dim();
    TruthTable table;
    table.shots = shots;
    table.seed = seed;
    table.probabilities.resize(d, d);
    table.row_leakage.resize(d);

    for (int a = 0; a < d; ++a) {
        Mat rho = Mat::Zero(d, d);
        rho(a, a) = 1.0;
        const Mat out = process.apply(rho);
        Eigen::VectorXd row(d);
        for (int b = 0; b < d; ++b) row(b) = std::max(out(b, b).real(), 0.0);
        table.row_leakage(a) = 1.0 - row.sum();

        if (shots == 0) {
            table.probabilities.row(a) = row;
        } else {
            // One multinomial of size `shots`, conditioned on no leakage.
            const double total = row.sum();
            if (total <= 0.0) throw std::runtime_error("row has no retained population");
            RandomStream rng = RandomStream::for_index(seed, static_cast<std::uint64_t>(a));
            Eigen::VectorXd counts = Eigen::VectorXd::Zero(d);
            for (int s = 0; s < shots; ++s) {
                const double r = rng.uniform() * total;
                double acc = 0.0;
                int pick = d - 1;
                for (int b = 0; b < d; ++b) {
                    acc += row(b);
                    if (r < acc) {
                        pick = b;
                        break;
                    }
                }
                counts(pick) += 1.0;
            }
            table.probabilities.row(a) = counts / static_cast<double>(shots);
        }
    }
    return table;
}

double mean_correct_probability(const TruthTable& table) {
    const int d = static_cast<int>(table.probabilities.rows());
    double sum = 0.0;
    for (int a = 0; a < d; ++a) {
        int target = a;
        if (a == d - 2) target = d - 1;  // |SS D> -> |SS S>
        if (a == d - 1) target = d - 2;
        sum += table.probabilities(a, target);
    }
    return sum / d;
}

std::vector<Mat> pauli_basis(int num_qubits) {
    if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
    const auto p1 = single_qubit_paulis();
    std::vector<Mat> out{Mat::Identity(1, 1)};
    for (int q = 0; q < num_qubits; ++q) {
        std::vector<Mat> next;
        next.reserve(out.size() * 4);
        for (const Mat& a : out)
            for (const Mat& p : p1) next.push_back(kron(a, p));
        out = std::move(next);
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(1 << num_qubits));
    for (Mat& m : out) m *= norm;
    return out;
}

std::vector<std::string> pauli_labels(int num_qubits) {
    const char* letters = "IXYZ";
    std::vector<std::string> out{""};
    for (int q = 0; q < num_qubits; ++q) {
        std::vector<std::string> next;
        next.reserve(out.size() * 4);
        for (const std::string& s : out)
            for (int k = 0; k < 4; ++k) next.push_back(s + letters[k]);
        out = std::move(next);
    }
    return out;
}

double ProcessMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> solver((chi + Mat(chi.adjoint())) / 2.0);
    return solver.eigenvalues().minCoeff();
}

double ProcessMatrix::hermiticity_deficit() const {
    return (chi - Mat(chi.adjoint())).cwiseAbs().maxCoeff();
}

ProcessMatrix chi_from_unitary(const Mat& u) {
    if (unitarity_deficit(u) > 1e-10) throw std::invalid_argument("matrix is not unitary");
    int nq = 0;
    while ((1 << nq) < u.rows()) ++nq;
    if ((1 << nq) != u.rows()) throw std::invalid_argument("dimension is not a power of two");
    const auto basis = pauli_basis(nq);
    const double d = static_cast<double>(u.rows());
    Vec coeff(basis.size());
    for (size_t m = 0; m < basis.size(); ++m)
        coeff(static_cast<Eigen::Index>(m)) = (basis[m].adjoint() * u).trace() / std::sqrt(d);
    ProcessMatrix out;
    out.num_qubits = nq;
    out.chi = coeff * coeff.adjoint();
    return out;
}

ProcessMatrix chi_from_process(const QubitProcess& process) {
    const int nq = process.num_qubits;
    const int d = process.dim();

    // Single-qubit preparations |0>, |1>, |+>, |+i> and the coefficients that
    // rebuild the four matrix units from them.
    std::vector<Vec> prep(4, Vec(2));
    prep[0] << 1, 0;
    prep[1] << 0, 1;
    prep[2] << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    prep[3] << 1.0 / std::sqrt(2.0), kI / std::sqrt(2.0);

    // unit_coeff[a][b][s]: |a><b| = sum_s c_s |prep_s><prep_s|
    Complex unit_coeff[2][2][4] = {};
    unit_coeff[0][0][0] = 1.0;
    unit_coeff[1][1][1] = 1.0;
    unit_coeff[0][1][2] = 1.0;
    unit_coeff[0][1][3] = kI;
    unit_coeff[0][1][0] = -(1.0 + kI) / 2.0;
    unit_coeff[0][1][1] = -(1.0 + kI) / 2.0;
    unit_coeff[1][0][2] = 1.0;
    unit_coeff[1][0][3] = -kI;
    unit_coeff[1][0][0] = -(1.0 - kI) / 2.0;
    unit_coeff[1][0][1] = -(1.0 - kI) / 2.0;

    int total_preps = 1;
    for (int q = 0; q < nq; ++q) total_preps *= 4;

    // Evaluate the process on every product preparation (base-4 digits of s
    // pick the per-qubit state, first qubit slowest).
    std::vector<Mat> outputs(total_preps);
    for (int s = 0; s < total_preps; ++s) {
        std::vector<int> digits(nq);
        int rem = s;
        for (int q = nq - 1; q >= 0; --q) {
            digits[q] = rem % 4;
            rem /= 4;
        }
        Vec psi = Vec::Ones(1);
        for (int q = 0; q < nq; ++q) {
            Vec next(psi.size() * 2);
            for (Eigen::Index i = 0; i < psi.size(); ++i) {
                next(2 * i) = psi(i) * prep[digits[q]](0);
                next(2 * i + 1) = psi(i) * prep[digits[q]](1);
            }
            psi = std::move(next);
        }
        outputs[s] = process.apply(psi * psi.adjoint());
    }

    // Rebuild the matrix-unit outputs and assemble the Choi matrix
    // C_(a,b) block = E(|a><b|).
    Mat choi = Mat::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            Mat e_ab = Mat::Zero(d, d);
            for (int s = 0; s < total_preps; ++s) {
                Complex coeff = 1.0;
                int rem = s;
                for (int q = nq - 1; q >= 0; --q) {
                    const int choice = rem % 4;
                    rem /= 4;
                    const int abit = (a >> (nq - 1 - q)) & 1;
                    const int bbit = (b >> (nq - 1 - q)) & 1;
                    coeff *= unit_coeff[abit][bbit][choice];
                    if (coeff == Complex(0.0, 0.0)) break;
                }
                if (coeff != Complex(0.0, 0.0)) e_ab += coeff * outputs[s];
            }
            choi.block(a * d, b * d, d, d) = e_ab;
        }
    }

    // chi~_mn = <v_m| C |v_n> with |v_m> = sum_a |a> (x) A_m|a>; divide by d
    // for the bare-Pauli-string normalization (Tr chi = 1 for TP maps).
    const auto basis = pauli_basis(nq);
    Mat v(d * d, static_cast<Eigen::Index>(basis.size()));
    for (size_t m = 0; m < basis.size(); ++m)
        for (int a = 0; a < d; ++a)
            v.block(a * d, static_cast<Eigen::Index>(m), d, 1) = basis[m].col(a);
    ProcessMatrix out;
    out.num_qubits = nq;
    out.chi = (v.adjoint() * choi * v) / static_cast<double>(d);
    return out;
}

double process_fidelity(const ProcessMatrix& chi_exp, const ProcessMatrix& chi_ideal) {
    if (chi_exp.chi.rows() != chi_ideal.chi.rows())
        throw std::invalid_argument("process matrices use different bases");
    // rank-1 check: chi^2 == Tr(chi) chi for a unitary's chi
    const Mat& ci = chi_ideal.chi;
    if ((ci * ci - ci.trace() * ci).cwiseAbs().maxCoeff() > 1e-8)
        throw std::invalid_argument("ideal process matrix is not rank one");
    return (ci * chi_exp.chi).trace().real();
}

Vec haar_state(int dim, RandomStream& rng) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    Vec psi(dim);
    for (int i = 0; i < dim; ++i) psi(i) = rng.complex_normal();
    psi /= psi.norm();
    return psi;
}

FidelityReport mean_gate_fidelity_mc(const QubitProcess& process, const Mat& u_ideal,
                                     std::uint64_t samples, std::uint64_t seed,
                                     int num_threads) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const int d = process.dim();
    if (u_ideal.rows() != d || u_ideal.cols() != d)
        throw std::invalid_argument("ideal unitary dimension mismatch");

    constexpr std::uint64_t kChunk = 1024;
    const std::uint64_t num_chunks = (samples + kChunk - 1) / kChunk;
    std::vector<double> sum_f(num_chunks, 0.0);
    std::vector<double> sum_f2(num_chunks, 0.0);

    auto run_chunk = [&](std::uint64_t c) {
        const std::uint64_t begin = c * kChunk;
        const std::uint64_t end = std::min(samples, begin + kChunk);
        double acc = 0.0, acc2 = 0.0;
        for (std::uint64_t i = begin; i < end; ++i) {
            RandomStream rng = RandomStream::for_index(seed, i);
            const Vec psi = haar_state(d, rng);
            const Vec target = u_ideal * psi;
            double f = 0.0;
            for (const Mat& k : process.kraus) f += std::norm(target.dot(k * psi));
            acc += f;
            acc2 += f * f;
        }
        sum_f[c] = acc;
        sum_f2[c] = acc2;
    };

    int threads = num_threads > 0 ? num_threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(num_chunks)));
    if (threads == 1) {
        for (std::uint64_t c = 0; c < num_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::uint64_t c = next.fetch_add(1); c < num_chunks; c = next.fetch_add(1))
                    run_chunk(c);
            });
        for (auto& t : pool) t.join();
    }

    // Serial-order reduction: the totals do not depend on the thread count.
    double total = 0.0, total2 = 0.0;
    for (std::uint64_t c = 0; c < num_chunks; ++c) {
        total += sum_f[c];
        total2 += sum_f2[c];
    }
    const double n = static_cast<double>(samples);
    const double mean = total / n;
    double var = 0.0;
    if (samples > 1) var = std::max(0.0, (total2 / n - mean * mean) * n / (n - 1.0));

    FidelityReport report;
    report.estimate = mean;
    report.std_error = std::sqrt(var / n);
    report.samples = samples;
    report.seed = seed;
    const double fpro = process_fidelity(chi_from_process(process), chi_from_unitary(u_ideal));
    report.analytic_crosscheck = (d * fpro + 1.0) / (d + 1.0);
    return report;
}

}  // namespace toffsim
