#include "toffsim/basis.hpp"

#include <stdexcept>

namespace toffsim {

CompositeBasis make_basis(int num_qubits, int n_max) {
    if (num_qubits < 1) throw std::invalid_argument("need at least one qubit");
    if (n_max < 2) throw std::invalid_argument("n_max must be >= 2; the sequence reaches n = 2");
    return CompositeBasis{num_qubits, n_max};
}

int basis_index(const CompositeBasis& basis, int word, int n) {
    if (word < 0 || word >= basis.num_words())
        throw std::out_of_range("qubit word out of range");
    if (n < 0 || n > basis.n_max)
        throw std::out_of_range("Fock level out of range");
    return word * basis.num_levels() + n;
}

std::string word_label(const CompositeBasis& basis, int word) {
    if (word < 0 || word >= basis.num_words())
        throw std::out_of_range("qubit word out of range");
    std::string s(basis.num_qubits, 'D');
    for (int ion = 1; ion <= basis.num_qubits; ++ion)
        if (ion_bit(basis, word, ion)) s[ion - 1] = 'S';
    return s;
}

int word_from_label(const CompositeBasis& basis, const std::string& label) {
    if (static_cast<int>(label.size()) != basis.num_qubits)
        throw std::invalid_argument("word label has wrong length: " + label);
    int word = 0;
    for (char c : label) {
        if (c != 'S' && c != 'D') throw std::invalid_argument("word label must use S/D: " + label);
        word = (word << 1) | (c == 'S' ? 1 : 0);
    }
    return word;
}

StateVector basis_state(const CompositeBasis& basis, int word, int n) {
    StateVector psi{basis, Vec::Zero(basis.dimension())};
    psi.amplitudes(basis_index(basis, word, n)) = Complex(1.0, 0.0);
    return psi;
}

StateVector apply_unitary(const OperatorMatrix& u, const StateVector& psi) {
    if (!(u.basis == psi.basis) || u.entries.rows() != psi.amplitudes.size())
        throw std::invalid_argument("operator/state dimension mismatch");
    return StateVector{psi.basis, u.entries * psi.amplitudes};
}

DensityMatrix density_from_state(const StateVector& psi) {
    return DensityMatrix{psi.amplitudes * psi.amplitudes.adjoint()};
}

DensityMatrix partial_trace_motion(const CompositeBasis& basis, const DensityMatrix& rho) {
    const int dim = basis.dimension();
    if (rho.entries.rows() != dim || rho.entries.cols() != dim)
        throw std::invalid_argument("density matrix does not match the composite basis");
    const int words = basis.num_words();
    const int levels = basis.num_levels();
    Mat out = Mat::Zero(words, words);
    for (int a = 0; a < words; ++a)
        for (int b = 0; b < words; ++b)
            for (int n = 0; n < levels; ++n)
                out(a, b) += rho.entries(a * levels + n, b * levels + n);
    return DensityMatrix{out};
}

double state_fidelity(const StateVector& psi, const StateVector& phi) {
    if (psi.amplitudes.size() != phi.amplitudes.size())
        throw std::invalid_argument("state dimension mismatch");
    return std::norm(psi.amplitudes.dot(phi.amplitudes));
}

double state_fidelity(const StateVector& psi, const DensityMatrix& rho) {
    if (rho.entries.rows() != psi.amplitudes.size())
        throw std::invalid_argument("state/density dimension mismatch");
    const Complex v = psi.amplitudes.dot(rho.entries * psi.amplitudes);
    return v.real();
}

double leakage_probability(const StateVector& psi) {
    const CompositeBasis& b = psi.basis;
    double p = 0.0;
    for (int w = 0; w < b.num_words(); ++w)
        p += std::norm(psi.amplitudes(basis_index(b, w, b.n_max)));
    return p;
}

double unitarity_deficit(const Mat& u) {
    const Mat d = u.adjoint() * u - Mat::Identity(u.cols(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

}  // namespace toffsim
