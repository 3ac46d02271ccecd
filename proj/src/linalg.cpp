#include "swapdesign/linalg.hpp"

#include <cmath>

namespace swapdesign {

Matrix sample_covariance(const Matrix& x) {
  const std::size_t n = x.rows(), k = x.cols();
  if (n < 2) throw DimensionMismatch("covariance needs at least two rows");
  std::vector<double> mean(k, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) mean[c] += x(r, c);
  }
  for (double& m : mean) m /= static_cast<double>(n);
  Matrix cov(k, k);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t a = 0; a < k; ++a) {
      double da = x(r, a) - mean[a];
      for (std::size_t b = a; b < k; ++b) {
        cov(a, b) += da * (x(r, b) - mean[b]);
      }
    }
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      cov(a, b) /= static_cast<double>(n - 1);
      cov(b, a) = cov(a, b);
    }
  }
  return cov;
}

bool cholesky_factorize(Matrix& a) {
  const std::size_t k = a.rows();
  if (a.cols() != k) throw DimensionMismatch("cholesky needs a square matrix");
  for (std::size_t j = 0; j < k; ++j) {
    double diag = a(j, j);
    for (std::size_t p = 0; p < j; ++p) diag -= a(j, p) * a(j, p);
    if (diag <= 0.0 || !std::isfinite(diag)) return false;
    diag = std::sqrt(diag);
    a(j, j) = diag;
    for (std::size_t i = j + 1; i < k; ++i) {
      double v = a(i, j);
      for (std::size_t p = 0; p < j; ++p) v -= a(i, p) * a(j, p);
      a(i, j) = v / diag;
    }
  }
  return true;
}

std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b) {
  const std::size_t k = lower.rows();
  if (b.size() != k) throw DimensionMismatch("rhs size != matrix dimension");
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t p = 0; p < i; ++p) x[i] -= lower(i, p) * x[p];
    x[i] /= lower(i, i);
  }
  for (std::size_t i = k; i-- > 0;) {
    for (std::size_t p = i + 1; p < k; ++p) x[i] -= lower(p, i) * x[p];
    x[i] /= lower(i, i);
  }
  return x;
}

}  // namespace swapdesign
