#pragma once

#include <doctest.h>

#include "nmrsp/linalg.hpp"
#include "oracles.hpp"

inline oracle::Mat to_oracle(const nmrsp::ComplexMatrix& m) {
  oracle::Mat out = oracle::zeros(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

inline nmrsp::ComplexMatrix from_oracle(const oracle::Mat& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  nmrsp::ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m[i][j];
  return out;
}

inline double max_abs_diff(const nmrsp::ComplexMatrix& a, const nmrsp::ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}
