#pragma once

#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "koopman/types.hpp"

namespace koopman::testutil {

using Rng = std::mt19937_64;

inline Matrix random_matrix(Rng& rng, int rows, int cols, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

inline Vector random_vector(Rng& rng, int size, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(size);
  for (int i = 0; i < size; ++i) v[i] = dist(rng);
  return v;
}

// Random square matrix rescaled to the requested spectral radius.
inline Matrix random_stable_matrix(Rng& rng, int n, double rho) {
  Matrix A = random_matrix(rng, n, n);
  const double r = A.eigenvalues().cwiseAbs().maxCoeff();
  return A * (rho / r);
}

// Well-conditioned random invertible matrix: orthogonal factor times a
// diagonal with entries in [0.5, 2].
inline Matrix random_well_conditioned(Rng& rng, int n) {
  const Matrix M = random_matrix(rng, n, n);
  const Eigen::HouseholderQR<Matrix> qr(M);
  Matrix Q = qr.householderQ();
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  Vector d(n);
  for (int i = 0; i < n; ++i) d[i] = dist(rng);
  return Q * d.asDiagonal();
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace koopman::testutil
