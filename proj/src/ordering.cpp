#include "swapdesign/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swapdesign {

namespace {

// Cache the full distance matrix below this size; above it, recompute.
constexpr std::size_t kDistanceCacheLimit = 2048;

constexpr double kImprovementEps = 1e-12;

double euclidean(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

Matrix standardized(const Matrix& m) {
  Matrix out = m;
  const std::size_t n = m.rows(), k = m.cols();
  for (std::size_t c = 0; c < k; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += m(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      double d = m(r, c) - mean;
      var += d * d;
    }
    double sd = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      out(r, c) = sd > 0.0 ? (m(r, c) - mean) / sd : 0.0;
    }
  }
  return out;
}

class DistanceOracle {
 public:
  explicit DistanceOracle(const Matrix& m) : m_(m) {
    if (m.rows() <= kDistanceCacheLimit) {
      cache_.assign(m.rows() * m.rows(), 0.0);
      for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i + 1; j < m.rows(); ++j) {
          double d = euclidean(m.row(i), m.row(j));
          cache_[i * m.rows() + j] = d;
          cache_[j * m.rows() + i] = d;
        }
      }
    }
  }

  double operator()(int i, int j) const {
    auto iu = static_cast<std::size_t>(i);
    auto ju = static_cast<std::size_t>(j);
    if (!cache_.empty()) return cache_[iu * m_.rows() + ju];
    return euclidean(m_.row(iu), m_.row(ju));
  }

 private:
  const Matrix& m_;
  std::vector<double> cache_;
};

int pick_start(const Matrix& m, const OrderingConfig& config) {
  const std::size_t n = m.rows();
  switch (config.start_rule) {
    case StartRule::first_unit:
      return 0;
    case StartRule::fixed_index:
      if (config.start_index < 0 || static_cast<std::size_t>(config.start_index) >= n) {
        throw OutOfRange("ordering start index out of range");
      }
      return config.start_index;
    case StartRule::centroid_closest:
      break;
  }
  std::vector<double> centroid(m.cols(), 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) centroid[c] += m(r, c);
  }
  for (double& v : centroid) v /= static_cast<double>(n);
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < n; ++r) {
    double d = euclidean(m.row(r), std::span<const double>(centroid));
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(r);
    }
  }
  return best;
}

std::vector<int> greedy_path(const DistanceOracle& dist, std::size_t n, int start) {
  std::vector<int> path;
  path.reserve(n);
  std::vector<bool> visited(n, false);
  int current = start;
  path.push_back(current);
  visited[static_cast<std::size_t>(current)] = true;
  for (std::size_t step = 1; step < n; ++step) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t cand = 0; cand < n; ++cand) {
      if (visited[cand]) continue;
      double d = dist(current, static_cast<int>(cand));
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(cand);
      }
    }
    current = best;
    path.push_back(current);
    visited[static_cast<std::size_t>(current)] = true;
  }
  return path;
}

// Cost delta of reversing positions [a, b] of an open path.
double reversal_delta(const DistanceOracle& dist, const std::vector<int>& path,
                      std::size_t a, std::size_t b) {
  double delta = 0.0;
  if (a > 0) delta += dist(path[a - 1], path[b]) - dist(path[a - 1], path[a]);
  if (b + 1 < path.size()) delta += dist(path[a], path[b + 1]) - dist(path[b], path[b + 1]);
  return delta;
}

}  // namespace

OrderingResult order_covariates(const Matrix& covariates,
                                const OrderingConfig& config) {
  const std::size_t n = covariates.rows();
  if (n == 0) throw DimensionMismatch("ordering requires at least one unit");
  for (double v : covariates.data()) {
    if (!std::isfinite(v)) throw OutOfRange("non-finite covariate entry");
  }

  OrderingResult result;
  if (n == 1) {
    result.permutation = {0};
    return result;
  }

  Matrix scratch = config.standardize ? standardized(covariates) : Matrix();
  const Matrix& m = config.standardize ? scratch : covariates;
  DistanceOracle dist(m);

  std::vector<int> path = greedy_path(dist, n, pick_start(m, config));

  // Steepest-descent 2-opt: apply the single best reversal, repeat. A pass
  // bundles up to n such moves so the pass limit still bounds total work.
  bool converged = false;
  for (int pass = 0; pass < config.two_opt_max_passes && !converged; ++pass) {
    bool improved_this_pass = false;
    for (std::size_t move = 0; move < n; ++move) {
      double best_delta = -kImprovementEps;
      std::size_t best_a = 0, best_b = 0;
      for (std::size_t a = 0; a + 1 < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          if (a == 0 && b == n - 1) continue;  // whole-path reversal is a no-op
          double delta = reversal_delta(dist, path, a, b);
          if (delta < best_delta) {
            best_delta = delta;
            best_a = a;
            best_b = b;
          }
        }
      }
      if (best_a == 0 && best_b == 0) {
        converged = true;
        break;
      }
      std::reverse(path.begin() + static_cast<std::ptrdiff_t>(best_a),
                   path.begin() + static_cast<std::ptrdiff_t>(best_b) + 1);
      improved_this_pass = true;
    }
    if (improved_this_pass) ++result.improvement_passes;
  }

  result.permutation = std::move(path);
  result.path_length = path_length(m, result.permutation);
  return result;
}

double path_length(const Matrix& covariates, std::span<const int> permutation) {
  const std::size_t n = covariates.rows();
  if (permutation.size() != n) {
    throw DimensionMismatch("permutation size != number of units");
  }
  std::vector<bool> seen(n, false);
  for (int idx : permutation) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= n || seen[static_cast<std::size_t>(idx)]) {
      throw DimensionMismatch("permutation is not a bijection");
    }
    seen[static_cast<std::size_t>(idx)] = true;
  }
  double total = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    total += euclidean(covariates.row(static_cast<std::size_t>(permutation[k - 1])),
                       covariates.row(static_cast<std::size_t>(permutation[k])));
  }
  return total;
}

}  // namespace swapdesign
