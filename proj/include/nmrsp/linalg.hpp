#pragma once

// Dense complex linear algebra for the 2-, 4- and 16-dimensional Hilbert
// spaces used throughout the library.
//
// Index convention: for a composite space H_1 (x) H_2 (x) ... the first factor
// is the slowest-varying index (Kronecker layout). For the two-qubit register
// the order is (qubit a, qubit b); an ancilla, when present, is appended last.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nmrsp/errors.hpp"

namespace nmrsp {

using cdouble = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kEigenHermitianTol = 1e-10;
inline constexpr double kStateHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kNormTol = 1e-12;

/// Normalized state vector.
class PureState {
 public:
  /// Throws InvalidInput unless the squared norm is within 1e-12 of 1.
  explicit PureState(ComplexVector amplitudes);

  /// Rescales `v` to unit norm; throws on the zero vector.
  static PureState normalized(ComplexVector v);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  Eigen::Index dim() const noexcept { return amplitudes_.size(); }
  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  ComplexVector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite matrix. The invariants are
/// checked once on construction; instances are immutable afterwards.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  cdouble operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  ComplexMatrix m_;
};

/// Split of a composite space into two factors, first factor slow.
struct Bipartition {
  Eigen::Index first;
  Eigen::Index second;
};

/// Largest entrywise |M - M^dagger|.
double hermiticity_defect(const ComplexMatrix& m);

/// Eigenvalues in ascending order. The input is symmetrized as (M + M^dagger)/2
/// after checking that it is Hermitian within 1e-10.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& hermitian);

/// Fixed-size trace norm used on hot paths; no Hermiticity check.
double trace_norm_unchecked(const Eigen::Matrix4cd& hermitian);

/// (1/2) tr|a - b|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Kronecker product, `a` indices outer.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced state on the subsystems listed in `keep` (ascending indices into
/// `dims`). The remaining factors are traced out.
DensityMatrix partial_trace(const DensityMatrix& m, std::span<const Eigen::Index> dims,
                            std::span<const Eigen::Index> keep);

/// Transposes the indices of the subsystems listed in `transposed` only.
ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const Eigen::Index> dims,
                                std::span<const Eigen::Index> transposed);

/// (||rho^Gamma||_1 - 1) / 2 with the second factor transposed.
double negativity(const DensityMatrix& m, Bipartition split);

/// Entropy in bits; 0 log 0 := 0.
double von_neumann_entropy(const DensityMatrix& m);

/// H(x) = -x log2 x - (1-x) log2(1-x).
double binary_entropy(double x);

}  // namespace nmrsp
