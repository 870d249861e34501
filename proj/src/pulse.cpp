#include "toffsim/pulse.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace toffsim {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr Complex kI{0.0, 1.0};
}  // namespace

void validate(const PulseSpec& spec, const CompositeBasis& basis) {
    if (spec.ion < 1 || spec.ion > basis.num_qubits)
        throw std::invalid_argument("ion index out of range: " + std::to_string(spec.ion));
    if (spec.theta < 0.0) throw std::invalid_argument("pulse area must be >= 0");
}

void validate(const PhysicalParams& params) {
    if (params.omega_sb <= 0.0 || params.omega_carrier <= 0.0)
        throw std::invalid_argument("Rabi frequencies must be positive");
}

void validate(const NoiseConfig& noise) {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in01(noise.addressing_ratio) || !in01(noise.next_nearest_ratio))
        throw std::invalid_argument("addressing ratios must lie in [0, 1]");
    if (!in01(noise.qubit_prep_error) || !in01(noise.motional_prep_error))
        throw std::invalid_argument("preparation error probabilities must lie in [0, 1]");
}

OperatorMatrix pulse_hamiltonian(const PulseSpec& spec, const PhysicalParams& params,
                                 const NoiseConfig& noise, const CompositeBasis& basis) {
    validate(spec, basis);
    validate(params);
    validate(noise);

    const int levels = basis.num_levels();
    const double omega = spec.kind == PulseKind::Carrier ? params.omega_carrier : params.omega_sb;
    Mat h = Mat::Zero(basis.dimension(), basis.dimension());

    for (int j = 1; j <= basis.num_qubits; ++j) {
        const int sep = std::abs(j - spec.ion);
        double g;
        if (sep == 0)
            g = omega / 2.0;
        else if (sep == 1)
            g = noise.addressing_ratio * omega / 2.0;
        else
            g = noise.next_nearest_ratio * omega / 2.0;
        if (g == 0.0) continue;

        // Raising element <upper|H|lower> = -g e^{i phi} (rung factor), with
        // lower = |S,n> and upper = |D,n> (carrier) or |D,n+1> (sideband).
        const Complex raise = -g * std::exp(kI * spec.phi);
        for (int w = 0; w < basis.num_words(); ++w) {
            if (ion_bit(basis, w, j) != 1) continue;  // raising needs S on ion j
            const int w2 = flip_ion(basis, w, j);
            for (int n = 0; n < levels; ++n) {
                if (spec.kind == PulseKind::Carrier) {
                    h(basis_index(basis, w2, n), basis_index(basis, w, n)) += raise;
                } else if (n + 1 <= basis.n_max) {
                    h(basis_index(basis, w2, n + 1), basis_index(basis, w, n)) +=
                        raise * std::sqrt(static_cast<double>(n + 1));
                }
                // Sideband coupling out of |S, n_max> is dropped: Hermitian
                // truncation keeps the propagator exactly unitary.
            }
        }
    }
    h = (h + Mat(h.adjoint())).eval();

    if (noise.detuning != 0.0)
        for (int w = 0; w < basis.num_words(); ++w)
            for (int n = 0; n < levels; ++n)
                h(basis_index(basis, w, n), basis_index(basis, w, n)) += noise.detuning * n;

    return OperatorMatrix{basis, std::move(h)};
}

OperatorMatrix propagator(const OperatorMatrix& hamiltonian, double t) {
    const Mat& h = hamiltonian.entries;
    if ((h - Mat(h.adjoint())).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("propagator requires a Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<Mat> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");
    const Eigen::VectorXd ev = solver.eigenvalues();
    Vec phases(ev.size());
    for (Eigen::Index k = 0; k < ev.size(); ++k) phases(k) = std::exp(-kI * ev(k) * t);
    Mat u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
    return OperatorMatrix{hamiltonian.basis, std::move(u)};
}

double pulse_duration(const PulseSpec& spec, const PhysicalParams& params) {
    validate(params);
    const double omega = spec.kind == PulseKind::Carrier ? params.omega_carrier : params.omega_sb;
    return spec.theta / omega;
}

OperatorMatrix pulse_unitary(const PulseSpec& spec, const PhysicalParams& params,
                             const NoiseConfig& noise, const CompositeBasis& basis) {
    return propagator(pulse_hamiltonian(spec, params, noise, basis),
                      pulse_duration(spec, params));
}

OperatorMatrix pulse_unitary_analytic(const PulseSpec& spec, const CompositeBasis& basis) {
    validate(spec, basis);
    const int levels = basis.num_levels();
    Mat u = Mat::Identity(basis.dimension(), basis.dimension());

    const Complex raise_amp = kI * std::exp(kI * spec.phi);   // i e^{+i phi}
    const Complex lower_amp = kI * std::exp(-kI * spec.phi);  // i e^{-i phi}

    for (int w = 0; w < basis.num_words(); ++w) {
        if (ion_bit(basis, w, spec.ion) != 1) continue;  // enumerate manifolds by their S member
        const int w2 = flip_ion(basis, w, spec.ion);
        for (int n = 0; n < levels; ++n) {
            int n_upper;
            double angle;
            if (spec.kind == PulseKind::Carrier) {
                n_upper = n;
                angle = spec.theta;
            } else {
                if (n + 1 > basis.n_max) continue;  // top rung stays uncoupled
                n_upper = n + 1;
                angle = spec.theta * std::sqrt(static_cast<double>(n + 1));
            }
            const int lo = basis_index(basis, w, n);
            const int hi = basis_index(basis, w2, n_upper);
            const double c = std::cos(angle / 2.0);
            const double s = std::sin(angle / 2.0);
            u(lo, lo) = c;
            u(hi, hi) = c;
            u(lo, hi) = lower_amp * s;
            u(hi, lo) = raise_amp * s;
        }
    }
    return OperatorMatrix{basis, std::move(u)};
}

}  // namespace toffsim
