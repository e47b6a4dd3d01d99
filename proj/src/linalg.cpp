#include "nmrsp/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nmrsp {

namespace {

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << who << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw InvalidInput(os.str());
  }
}

Eigen::Index product_of(std::span<const Eigen::Index> dims) {
  return std::accumulate(dims.begin(), dims.end(), Eigen::Index{1}, std::multiplies<>());
}

void require_factorization(const ComplexMatrix& m, std::span<const Eigen::Index> dims,
                           std::span<const Eigen::Index> selected, const char* who) {
  if (dims.empty() || product_of(dims) != m.rows()) {
    std::ostringstream os;
    os << who << ": factor dimensions do not multiply to " << m.rows();
    throw InvalidInput(os.str());
  }
  for (auto d : dims) {
    if (d < 1) throw InvalidInput(std::string(who) + ": factor dimension must be positive");
  }
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (selected[i] < 0 || selected[i] >= static_cast<Eigen::Index>(dims.size())) {
      throw InvalidInput(std::string(who) + ": subsystem index out of range");
    }
    if (i > 0 && selected[i] <= selected[i - 1]) {
      throw InvalidInput(std::string(who) + ": subsystem indices must be strictly ascending");
    }
  }
}

// Mixed-radix digits of a linear index, first factor most significant.
void to_digits(Eigen::Index index, std::span<const Eigen::Index> dims, std::vector<Eigen::Index>& out) {
  out.resize(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
}

Eigen::Index from_digits(std::span<const Eigen::Index> digits, std::span<const Eigen::Index> dims) {
  Eigen::Index index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
  return index;
}

double sum_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().sum(); }

}  // namespace

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw InvalidInput("PureState: empty amplitude vector");
  const double norm2 = amplitudes_.squaredNorm();
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kNormTol) {
    std::ostringstream os;
    os << "PureState: squared norm " << norm2 << " differs from 1";
    throw InvalidInput(os.str());
  }
}

PureState PureState::normalized(ComplexVector v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidInput("PureState: cannot normalize a zero vector");
  v /= n;
  return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  require_square(m_, "DensityMatrix");
  const double defect = hermiticity_defect(m_);
  if (!(defect <= kStateHermitianTol)) {
    std::ostringstream os;
    os << "DensityMatrix: not Hermitian (defect " << defect << ")";
    throw InvalidInput(os.str());
  }
  const double tr = m_.trace().real();
  if (!(std::abs(tr - 1.0) <= kTraceTol)) {
    std::ostringstream os;
    os << "DensityMatrix: trace " << tr << " differs from 1";
    throw InvalidInput(os.str());
  }
  const auto ev = hermitian_eigenvalues(m_);
  if (ev.front() < -kPsdTol) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << ev.front();
    throw InvalidInput(os.str());
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  if (dim < 1) throw InvalidInput("maximally_mixed: dimension must be positive");
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

double hermiticity_defect(const ComplexMatrix& m) {
  require_square(m, "hermiticity_defect");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  require_square(m, "hermitian_eigenvalues");
  const double defect = hermiticity_defect(m);
  if (!(defect <= kEigenHermitianTol)) {
    std::ostringstream os;
    os << "hermitian_eigenvalues: input not Hermitian within " << kEigenHermitianTol << " (defect "
       << defect << ")";
    throw InvalidInput(os.str());
  }
  const ComplexMatrix sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("hermitian_eigenvalues: eigensolver did not converge");
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  return {ev.data(), ev.data() + ev.size()};
}

double trace_norm(const ComplexMatrix& hermitian) {
  const auto ev = hermitian_eigenvalues(hermitian);
  double s = 0.0;
  for (double x : ev) s += std::abs(x);
  return s;
}

double trace_norm_unchecked(const Eigen::Matrix4cd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(hermitian, Eigen::EigenvaluesOnly);
  return sum_abs(solver.eigenvalues());
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "trace_distance: dimension mismatch " << a.dim() << " vs " << b.dim();
    throw InvalidInput(os.str());
  }
  // Fixed operand order so that D(a, b) and D(b, a) are bitwise equal.
  const auto& ma = a.matrix();
  const auto& mb = b.matrix();
  for (Eigen::Index k = 0; k < ma.size(); ++k) {
    const cdouble x = ma.data()[k];
    const cdouble y = mb.data()[k];
    if (x == y) continue;
    const bool a_first = x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    return 0.5 * trace_norm(a_first ? ComplexMatrix(ma - mb) : ComplexMatrix(mb - ma));
  }
  return 0.0;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& m, std::span<const Eigen::Index> dims,
                            std::span<const Eigen::Index> keep) {
  require_factorization(m.matrix(), dims, keep, "partial_trace");

  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) kept[static_cast<std::size_t>(k)] = true;
  std::vector<Eigen::Index> kept_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (kept[k]) kept_dims.push_back(dims[k]);
  }
  const Eigen::Index out_dim = product_of(kept_dims);

  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  std::vector<Eigen::Index> rd, cd, rk, ck;
  const Eigen::Index n = m.dim();
  for (Eigen::Index r = 0; r < n; ++r) {
    to_digits(r, dims, rd);
    for (Eigen::Index c = 0; c < n; ++c) {
      to_digits(c, dims, cd);
      bool diagonal_in_traced = true;
      rk.clear();
      ck.clear();
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (kept[k]) {
          rk.push_back(rd[k]);
          ck.push_back(cd[k]);
        } else if (rd[k] != cd[k]) {
          diagonal_in_traced = false;
          break;
        }
      }
      if (!diagonal_in_traced) continue;
      out(from_digits(rk, kept_dims), from_digits(ck, kept_dims)) += m(r, c);
    }
  }
  // Roundoff from long sums may leave ~1e-17 anti-Hermitian residue.
  out = (out + out.adjoint()).eval() / 2.0;
  return DensityMatrix(std::move(out));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const Eigen::Index> dims,
                                std::span<const Eigen::Index> transposed) {
  require_square(m, "partial_transpose");
  require_factorization(m, dims, transposed, "partial_transpose");

  std::vector<bool> flip(dims.size(), false);
  for (auto k : transposed) flip[static_cast<std::size_t>(k)] = true;

  const Eigen::Index n = m.rows();
  ComplexMatrix out(n, n);
  std::vector<Eigen::Index> rd, cd;
  for (Eigen::Index r = 0; r < n; ++r) {
    to_digits(r, dims, rd);
    for (Eigen::Index c = 0; c < n; ++c) {
      to_digits(c, dims, cd);
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (flip[k]) std::swap(rd[k], cd[k]);
      }
      out(from_digits(rd, dims), from_digits(cd, dims)) = m(r, c);
      for (std::size_t k = 0; k < dims.size(); ++k) {
        if (flip[k]) std::swap(rd[k], cd[k]);
      }
    }
  }
  return out;
}

double negativity(const DensityMatrix& m, Bipartition split) {
  const std::array<Eigen::Index, 2> dims{split.first, split.second};
  const std::array<Eigen::Index, 1> second{1};
  const ComplexMatrix pt = partial_transpose(m.matrix(), dims, second);
  return std::max(0.0, (trace_norm(pt) - 1.0) / 2.0);
}

double von_neumann_entropy(const DensityMatrix& m) {
  double s = 0.0;
  for (double x : hermitian_eigenvalues(m.matrix())) {
    if (x > 0.0) s -= x * std::log2(x);
  }
  return std::max(0.0, s);
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("binary_entropy: argument outside [0, 1]");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

}  // namespace nmrsp
