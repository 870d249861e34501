#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace toffsim {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Composite register: num_qubits ion qubits tensored with one harmonic mode
// truncated at Fock level n_max.  Qubit encoding |S> = 1, |D> = 0; ion 1 is
// the most significant bit of the qubit word, so the eight 3-ion words sorted
// ascending read |DDD>, |DDS>, ..., |SSS>.  The Fock index varies fastest:
// flat index = word * (n_max + 1) + n.
struct CompositeBasis {
    int num_qubits = 3;
    int n_max = 4;

    int num_levels() const { return n_max + 1; }
    int num_words() const { return 1 << num_qubits; }
    int dimension() const { return num_words() * num_levels(); }

    bool operator==(const CompositeBasis&) const = default;
};

CompositeBasis make_basis(int num_qubits = 3, int n_max = 4);

// Bit of `word` for 1-based ion index (ion 1 = most significant).
inline int ion_bit(const CompositeBasis& basis, int word, int ion) {
    return (word >> (basis.num_qubits - ion)) & 1;
}

inline int flip_ion(const CompositeBasis& basis, int word, int ion) {
    return word ^ (1 << (basis.num_qubits - ion));
}

int basis_index(const CompositeBasis& basis, int word, int n);

// Word label like "DDS" (ion 1 first).
std::string word_label(const CompositeBasis& basis, int word);
int word_from_label(const CompositeBasis& basis, const std::string& label);

struct StateVector {
    CompositeBasis basis;
    Vec amplitudes;

    double norm() const { return amplitudes.norm(); }
};

struct OperatorMatrix {
    CompositeBasis basis;
    Mat entries;
};

// Dense density matrix over either the composite space or the qubit-word
// subspace; the dimension is carried by the matrix itself.
struct DensityMatrix {
    Mat entries;

    double trace_real() const { return entries.trace().real(); }
};

StateVector basis_state(const CompositeBasis& basis, int word, int n);

StateVector apply_unitary(const OperatorMatrix& u, const StateVector& psi);

DensityMatrix density_from_state(const StateVector& psi);

// Traces out the motional mode: (rho_q)_ab = sum_n rho_{(a,n),(b,n)}.
DensityMatrix partial_trace_motion(const CompositeBasis& basis, const DensityMatrix& rho);

double state_fidelity(const StateVector& psi, const StateVector& phi);
double state_fidelity(const StateVector& psi, const DensityMatrix& rho);

// Total population sitting on the guard rung n = n_max.  Nonzero values mean
// the Fock truncation is being exercised.
double leakage_probability(const StateVector& psi);

// max |U^dag U - 1|.
double unitarity_deficit(const Mat& u);

}  // namespace toffsim
