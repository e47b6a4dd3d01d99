#include "nmrsp/rsp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nmrsp {

namespace {

constexpr double kWeightTol = 4e-12;

const std::array<Eigen::Matrix2cd, 3>& pauli_table() {
  static const std::array<Eigen::Matrix2cd, 3> table = [] {
    const cdouble i{0.0, 1.0};
    std::array<Eigen::Matrix2cd, 3> p;
    p[0] << 0.0, 1.0, 1.0, 0.0;
    p[1] << 0.0, -i, i, 0.0;
    p[2] << 1.0, 0.0, 0.0, -1.0;
    return p;
  }();
  return table;
}

}  // namespace

std::array<double, 4> BellDiagonalParams::weights() const noexcept {
  return {1.0 - c1 - c2 - c3, 1.0 - c1 + c2 + c3, 1.0 + c1 - c2 + c3, 1.0 + c1 + c2 - c3};
}

CorrelationMatrix::CorrelationMatrix(const Eigen::Matrix3d& entries) : c_(entries) {
  if (!c_.allFinite() || c_.cwiseAbs().maxCoeff() > 1.0 + 1e-12) {
    throw InvalidInput("CorrelationMatrix: entries must lie in [-1, 1]");
  }
}

const Eigen::Matrix2cd& pauli(int j) {
  if (j < 0 || j > 2) throw InvalidInput("pauli: index must be 0, 1 or 2");
  return pauli_table()[static_cast<std::size_t>(j)];
}

DensityMatrix bell_diagonal(const BellDiagonalParams& params) {
  const std::array<double, 3> c{params.c1, params.c2, params.c3};
  for (double x : c) {
    if (!std::isfinite(x) || std::abs(x) > 1.0) throw InvalidInput("bell_diagonal: c_j must lie in [-1, 1]");
  }
  const auto w = params.weights();
  static constexpr std::array<const char*, 4> names{"1-c1-c2-c3", "1-c1+c2+c3", "1+c1-c2+c3", "1+c1+c2-c3"};
  for (std::size_t k = 0; k < 4; ++k) {
    if (w[k] < -kWeightTol) {
      std::ostringstream os;
      os << "bell_diagonal: not a state, " << names[k] << " = " << w[k] << " (eigenvalue " << w[k] / 4.0 << ")";
      throw InvalidInput(os.str());
    }
  }
  ComplexMatrix rho = ComplexMatrix::Identity(4, 4);
  for (int j = 0; j < 3; ++j) {
    const ComplexMatrix p = pauli(j);
    rho += c[static_cast<std::size_t>(j)] * tensor_product(p, p);
  }
  return DensityMatrix(rho / 4.0);
}

CorrelationMatrix correlation_matrix(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw InvalidInput("correlation_matrix: expected a two-qubit state");
  Eigen::Matrix3d c;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      c(j, k) = (rho.matrix() * tensor_product(pauli(j), pauli(k))).trace().real();
    }
  }
  return CorrelationMatrix(c);
}

std::array<double, 3> gram_eigenvalues(const CorrelationMatrix& c) {
  const Eigen::Matrix3d gram = c.entries().transpose() * c.entries();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(gram, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(1), ev(2)};
}

double rsp_fidelity(const CorrelationMatrix& c) {
  const auto ev = gram_eigenvalues(c);
  return std::clamp(0.5 * (ev[0] + ev[1]), 0.0, 1.0);
}

}  // namespace nmrsp
