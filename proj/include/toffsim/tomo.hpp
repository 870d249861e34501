#pragma once

#include "toffsim/rng.hpp"
#include "toffsim/sequence.hpp"

#include <cstdint>
#include <vector>

namespace toffsim {

// Qubit-level quantum process in Kraus form, obtained from the composite
// dynamics by tracing the motional mode over the faithful rungs
// n = 0 .. n_max-1.  Population reaching the guard rung n = n_max is
// truncation-contaminated; it is excluded from the map and surfaces as
// `leakage`, so the map is sub-trace-preserving whenever leakage > 0.
struct QubitProcess {
    int num_qubits = 3;
    std::vector<Mat> kraus;
    double leakage = 0.0;  // mean trace deficit over the word-basis inputs

    int dim() const { return 1 << num_qubits; }
    Mat apply(const Mat& rho) const;
};

// Exact (sampling-free) process of a pulse sequence under the given noise.
// Preparation errors enter as classical mixtures: independent per-ion flips
// with probability qubit_prep_error, and the mode starting in n = 1 with
// probability motional_prep_error.
QubitProcess simulate_process(const PulseSequence& seq, const PhysicalParams& params,
                              const NoiseConfig& noise, const CompositeBasis& basis);

// Process that conjugates by a fixed unitary (reference for tests/oracles).
QubitProcess unitary_process(const Mat& u);

struct TruthTable {
    Eigen::MatrixXd probabilities;     // rows = inputs, cols = outputs
    Eigen::VectorXd row_leakage;       // exact-mode trace deficit per input
    int shots = 0;                     // 0 = exact probabilities
    std::uint64_t seed = 0;
};

// Row i = diagonal of process(|i><i|).  With shots > 0 each row is one
// multinomial draw of size `shots` from the row conditioned on no leakage,
// so counts/shots sums to exactly 1.
TruthTable simulate_truth_table(const QubitProcess& process, int shots, std::uint64_t seed);

// Mean over inputs of the probability of the ideal Toffoli output word
// (identity permutation except |SSD> <-> |SSS>).
double mean_correct_probability(const TruthTable& table);

// 4^N Pauli strings, lexicographic in (I, X, Y, Z) with the first qubit
// slowest, each normalized by 1/sqrt(2^N) (orthonormal under Tr(A^dag B)).
std::vector<Mat> pauli_basis(int num_qubits);
std::vector<std::string> pauli_labels(int num_qubits);

// Process matrix chi over Pauli strings, normalized so trace-preserving maps
// have Tr chi = 1 (i.e. E(rho) = sum chi_mn P_m rho P_n^dag over the bare
// strings); chi of conjugation by U is rank one with chi[0][0] = |Tr U/d|^2.
struct ProcessMatrix {
    int num_qubits = 3;
    Mat chi;

    double trace_real() const { return chi.trace().real(); }
    double min_eigenvalue() const;
    double hermiticity_deficit() const;
};

ProcessMatrix chi_from_unitary(const Mat& u);

// Linear-inversion tomography: evaluates the process on the 4^N product
// preparations built from {|0>, |1>, (|0>+|1>)/sqrt2, (|0>+i|1>)/sqrt2} per
// qubit, reconstructs the matrix-unit outputs, and rotates the Choi matrix
// into the Pauli basis.
ProcessMatrix chi_from_process(const QubitProcess& process);

// F_pro = Re Tr(chi_ideal chi_exp); chi_ideal must be rank one (a unitary's).
double process_fidelity(const ProcessMatrix& chi_exp, const ProcessMatrix& chi_ideal);

// Haar-distributed pure state: normalized vector of i.i.d. complex Gaussians.
Vec haar_state(int dim, RandomStream& rng);

struct FidelityReport {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double analytic_crosscheck = 0.0;  // (d * F_pro + 1) / (d + 1)
};

// Monte-Carlo mean gate fidelity over Haar-random pure inputs:
// mean of <psi| U^dag E(|psi><psi|) U |psi>.  Sample i draws from the
// substream keyed by (seed, i), and chunk sums are reduced in index order, so
// the report is bitwise identical for any worker count.
FidelityReport mean_gate_fidelity_mc(const QubitProcess& process, const Mat& u_ideal,
                                     std::uint64_t samples, std::uint64_t seed,
                                     int num_threads = 0);

}  // namespace toffsim
