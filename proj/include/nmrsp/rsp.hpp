#pragma once

// Bell-diagonal resources and the remote-state-preparation fidelity.
// Pauli order is (sigma_x, sigma_y, sigma_z) in the computational basis.

#include <array>

#include <Eigen/Dense>

#include "nmrsp/linalg.hpp"

namespace nmrsp {

struct BellDiagonalParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  /// The four Bell-basis weights times 4: (1-c1-c2-c3), (1-c1+c2+c3), (1+c1-c2+c3), (1+c1+c2-c3).
  std::array<double, 4> weights() const noexcept;
};

/// Real 3x3 table c_jk = tr[rho sigma_j (x) sigma_k].
class CorrelationMatrix {
 public:
  /// Throws InvalidInput if any entry leaves [-1, 1] by more than 1e-12.
  explicit CorrelationMatrix(const Eigen::Matrix3d& entries);
  const Eigen::Matrix3d& entries() const noexcept { return c_; }
  double operator()(int j, int k) const { return c_(j, k); }

 private:
  Eigen::Matrix3d c_;
};

/// sigma_x, sigma_y, sigma_z for index 0, 1, 2.
const Eigen::Matrix2cd& pauli(int j);

/// (1/4)(I (x) I + sum_j c_j sigma_j (x) sigma_j). Throws InvalidInput naming the
/// negative weight when the parameters do not describe a state.
DensityMatrix bell_diagonal(const BellDiagonalParams& params);

CorrelationMatrix correlation_matrix(const DensityMatrix& rho);

/// Eigenvalues of C^T C, ascending.
std::array<double, 3> gram_eigenvalues(const CorrelationMatrix& c);

/// Mean of the two smallest eigenvalues of C^T C.
double rsp_fidelity(const CorrelationMatrix& c);

}  // namespace nmrsp
