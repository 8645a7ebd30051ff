#pragma once

#include <random>

namespace spl {

template <typename Rng>
MatrixC complex_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  MatrixC m(rows, cols);
  // Column-major fill keeps the draw order fixed.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = cplx(re, im);
    }
  }
  return m;
}

template <typename Rng>
MatrixC random_unitary(Index n, Rng& rng) {
  const MatrixC g = complex_gaussian(n, n, rng);
  Eigen::HouseholderQR<MatrixC> qr(g);
  MatrixC q = qr.householderQ() * MatrixC::Identity(n, n);
  const MatrixC r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace spl
