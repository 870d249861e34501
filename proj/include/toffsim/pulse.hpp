#pragma once

#include "toffsim/basis.hpp"

namespace toffsim {

// Carrier drives |S,n> <-> |D,n| at the qubit frequency; the blue sideband
// drives |S,n> <-> |D,n+1> with coupling scaled by sqrt(n+1).
enum class PulseKind { Carrier, BlueSideband };

// One laser pulse on one addressed ion.  theta is the pulse area Omega * t
// referenced to the n = 0 rung for sideband pulses; phi is the laser phase.
struct PulseSpec {
    PulseKind kind = PulseKind::BlueSideband;
    int ion = 1;          // 1-based, paper numbering
    double theta = 0.0;   // radians, >= 0
    double phi = 0.0;     // radians

    bool operator==(const PulseSpec&) const = default;
};

struct PhysicalParams {
    double omega_sb = 2.0 * 3.141592653589793238462643383279502884 * 3300.0;
    double omega_carrier = 2.0 * 3.141592653589793238462643383279502884 * 50000.0;
};

struct NoiseConfig {
    double addressing_ratio = 0.0;       // epsilon: neighbor/addressed Rabi ratio
    double next_nearest_ratio = 0.0;     // same for |j - ion| = 2 neighbors
    double detuning = 0.0;               // rad/s offset of the COM mode frequency
    double qubit_prep_error = 0.0;       // per-ion flip probability at initialization
    double motional_prep_error = 0.0;    // probability the mode starts in n = 1

    bool is_ideal() const {
        return addressing_ratio == 0.0 && next_nearest_ratio == 0.0 && detuning == 0.0 &&
               qubit_prep_error == 0.0 && motional_prep_error == 0.0;
    }
};

void validate(const PulseSpec& spec, const CompositeBasis& basis);
void validate(const PhysicalParams& params);
void validate(const NoiseConfig& noise);

// Rotating-frame Hamiltonian of one pulse, crosstalk and mode detuning
// included:  H = sum_j g_j H_kind(j, phi) + delta * N_phonon  with
// g = Omega/2 on the addressed ion and epsilon * Omega/2 on its nearest
// neighbors.  The raising element is <upper|H|lower> = -g e^{i phi} sqrt(n+1)
// so that exp(-iHt) realizes R(theta, phi) = exp(+i theta/2 (e^{i phi} sigma+
// + e^{-i phi} sigma-)), the rotation convention the pulse table assumes.
OperatorMatrix pulse_hamiltonian(const PulseSpec& spec, const PhysicalParams& params,
                                 const NoiseConfig& noise, const CompositeBasis& basis);

// U = exp(-i H t) via Hermitian eigendecomposition.  Throws if H fails the
// Hermiticity check at 1e-10.
OperatorMatrix propagator(const OperatorMatrix& hamiltonian, double t);

double pulse_duration(const PulseSpec& spec, const PhysicalParams& params);

OperatorMatrix pulse_unitary(const PulseSpec& spec, const PhysicalParams& params,
                             const NoiseConfig& noise, const CompositeBasis& basis);

// Noise-free fast path: per-manifold rotation
//   [[cos(T/2), i e^{-i phi} sin(T/2)], [i e^{i phi} sin(T/2), cos(T/2)]]
// in (lower, upper) ordering, with T = theta (carrier) or theta * sqrt(n+1)
// (sideband, manifold {|S,n>, |D,n+1>}).  |S, n_max> is left uncoupled.
OperatorMatrix pulse_unitary_analytic(const PulseSpec& spec, const CompositeBasis& basis);

}  // namespace toffsim
