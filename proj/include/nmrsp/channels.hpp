#pragma once

// Channels acting on qubit a of a register (a, rest...). Qubit a is the
// slowest index, so every operator splits into 2x2 blocks of size dim/2:
//
//   rho = [ P  Q ]     P: a = 0 (H, ground)    S: a = 1 (V, excited)
//         [ R  S ]
//
// Dephasing:          Q -> kappa Q,  R -> conj(kappa) R.
// Amplitude damping:  P -> P + (1 - chi^2) S,  Q -> chi Q,  R -> chi R,  S -> chi^2 S,
// i.e. Kraus operators K0 = diag(1, chi), K1 = sqrt(1 - chi^2) |0><1| on qubit a.

#include <complex>
#include <variant>

#include "nmrsp/decoherence.hpp"
#include "nmrsp/linalg.hpp"

namespace nmrsp {

using ChannelFamily = std::variant<DephasingSpec, LorentzSpec>;

enum class ChannelKind { dephasing, amplitude_damping };

ChannelKind kind_of(const ChannelFamily& family) noexcept;

/// kappa(tau) for dephasing (t is reduced time), chi(t) for the Lorentzian family.
cdouble decoherence_value(const ChannelFamily& family, double t);

/// Linear extension of the block maps above; no contraction check. Used for
/// intermediate maps whose parameter may exceed 1 in modulus.
ComplexMatrix dephase_blocks(const ComplexMatrix& rho, cdouble kappa);
ComplexMatrix damp_blocks(const ComplexMatrix& rho, double chi);

/// Dephasing of qubit a. Throws InvalidInput when |kappa| > 1 + 1e-12.
DensityMatrix apply_dephasing(const DensityMatrix& rho, cdouble kappa);

/// Amplitude damping of qubit a. Throws InvalidInput when |chi| > 1 + 1e-12.
DensityMatrix apply_amplitude_damping(const DensityMatrix& rho, double chi);

/// Lambda_t applied to `rho` (any even dimension; qubit a first).
DensityMatrix evolve(const ChannelFamily& family, const DensityMatrix& rho, double t);

/// Raw-matrix evolution for hot loops; caller guarantees validity.
ComplexMatrix evolve_matrix(const ChannelFamily& family, const ComplexMatrix& rho, cdouble value);

struct ChoiState {
  DensityMatrix state;
  int system_dim;
};

/// (Lambda_t (x) id)|Psi><Psi| with |Psi> = sum_j |j>_s |j>_s' / sqrt(d).
/// system_dim 2 means s = a; system_dim 4 means s = ab with b noiseless.
ChoiState choi_state(const ChannelFamily& family, double t, int system_dim);

/// Choi matrix of the single-qubit map with decoherence parameter `value`,
/// without any positivity requirement.
ComplexMatrix single_qubit_choi(ChannelKind kind, cdouble value);

/// Choi matrix of the reduced single-qubit intermediate map Lambda_{t+eps,t},
/// built from r = f(t+eps)/f(t). Trace one and Hermitian; negative eigenvalues
/// signal non-divisibility. Throws SingularIntermediateMap if |f(t)| < 1e-14.
ComplexMatrix intermediate_choi(const ChannelFamily& family, double t, double eps);

}  // namespace nmrsp
