#pragma once

#include <span>
#include <vector>

#include "swapdesign/core.hpp"

namespace swapdesign {

/// Sample covariance of the rows of x (ddof = 1). Requires >= 2 rows.
Matrix sample_covariance(const Matrix& x);

/// In-place lower Cholesky factorization; returns false if not positive
/// definite. Only the lower triangle of the result is meaningful.
bool cholesky_factorize(Matrix& a);

/// Solves (L L^T) x = b given the lower factor from cholesky_factorize.
std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b);

}  // namespace swapdesign
