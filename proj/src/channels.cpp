#include "nmrsp/channels.hpp"

#include <cmath>
#include <sstream>

namespace nmrsp {

namespace {

constexpr double kContractionTol = 1e-12;
constexpr double kSingularTol = 1e-14;

Eigen::Index half_dim(const ComplexMatrix& rho, const char* who) {
  if (rho.rows() != rho.cols() || rho.rows() < 2 || rho.rows() % 2 != 0) {
    std::ostringstream os;
    os << who << ": expected an even-dimensional square matrix, got " << rho.rows() << "x" << rho.cols();
    throw InvalidInput(os.str());
  }
  return rho.rows() / 2;
}

ComplexMatrix max_entangled_projector(int d) {
  ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int j = 0; j < d; ++j) psi(static_cast<Eigen::Index>(j) * d + j) = 1.0 / std::sqrt(static_cast<double>(d));
  return psi * psi.adjoint();
}

}  // namespace

ChannelKind kind_of(const ChannelFamily& family) noexcept {
  return std::holds_alternative<DephasingSpec>(family) ? ChannelKind::dephasing : ChannelKind::amplitude_damping;
}

cdouble decoherence_value(const ChannelFamily& family, double t) {
  if (const auto* d = std::get_if<DephasingSpec>(&family)) return kappa_complex(*d, t);
  return {chi(std::get<LorentzSpec>(family), t), 0.0};
}

ComplexMatrix dephase_blocks(const ComplexMatrix& rho, cdouble kappa) {
  const Eigen::Index m = half_dim(rho, "dephase_blocks");
  ComplexMatrix out = rho;
  out.topRightCorner(m, m) *= kappa;
  out.bottomLeftCorner(m, m) *= std::conj(kappa);
  return out;
}

ComplexMatrix damp_blocks(const ComplexMatrix& rho, double chi) {
  const Eigen::Index m = half_dim(rho, "damp_blocks");
  ComplexMatrix out(rho.rows(), rho.cols());
  out.topLeftCorner(m, m) = rho.topLeftCorner(m, m) + (1.0 - chi * chi) * rho.bottomRightCorner(m, m);
  out.topRightCorner(m, m) = chi * rho.topRightCorner(m, m);
  out.bottomLeftCorner(m, m) = chi * rho.bottomLeftCorner(m, m);
  out.bottomRightCorner(m, m) = (chi * chi) * rho.bottomRightCorner(m, m);
  return out;
}

DensityMatrix apply_dephasing(const DensityMatrix& rho, cdouble kappa) {
  if (!(std::abs(kappa) <= 1.0 + kContractionTol)) {
    std::ostringstream os;
    os << "apply_dephasing: |kappa| = " << std::abs(kappa) << " exceeds 1";
    throw InvalidInput(os.str());
  }
  return DensityMatrix(dephase_blocks(rho.matrix(), kappa));
}

DensityMatrix apply_amplitude_damping(const DensityMatrix& rho, double chi) {
  if (!(std::abs(chi) <= 1.0 + kContractionTol)) {
    std::ostringstream os;
    os << "apply_amplitude_damping: |chi| = " << std::abs(chi) << " exceeds 1";
    throw InvalidInput(os.str());
  }
  return DensityMatrix(damp_blocks(rho.matrix(), chi));
}

ComplexMatrix evolve_matrix(const ChannelFamily& family, const ComplexMatrix& rho, cdouble value) {
  if (kind_of(family) == ChannelKind::dephasing) return dephase_blocks(rho, value);
  return damp_blocks(rho, value.real());
}

DensityMatrix evolve(const ChannelFamily& family, const DensityMatrix& rho, double t) {
  const cdouble value = decoherence_value(family, t);
  if (kind_of(family) == ChannelKind::dephasing) return apply_dephasing(rho, value);
  return apply_amplitude_damping(rho, value.real());
}

ChoiState choi_state(const ChannelFamily& family, double t, int system_dim) {
  if (system_dim != 2 && system_dim != 4) throw InvalidInput("choi_state: system dimension must be 2 or 4");
  const ComplexMatrix psi = max_entangled_projector(system_dim);
  return {DensityMatrix(evolve_matrix(family, psi, decoherence_value(family, t))), system_dim};
}

ComplexMatrix single_qubit_choi(ChannelKind kind, cdouble value) {
  const ComplexMatrix psi = max_entangled_projector(2);
  return kind == ChannelKind::dephasing ? dephase_blocks(psi, value) : damp_blocks(psi, value.real());
}

ComplexMatrix intermediate_choi(const ChannelFamily& family, double t, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("intermediate_choi: eps must be positive");
  const cdouble now = decoherence_value(family, t);
  if (std::abs(now) < kSingularTol) {
    std::ostringstream os;
    os << "intermediate_choi: decoherence function vanishes at t=" << t;
    throw SingularIntermediateMap(os.str(), t);
  }
  const cdouble ratio = decoherence_value(family, t + eps) / now;
  return single_qubit_choi(kind_of(family), ratio);
}

}  // namespace nmrsp
