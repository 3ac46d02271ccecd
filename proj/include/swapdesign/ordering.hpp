#pragma once

#include <span>
#include <vector>

#include "swapdesign/core.hpp"

namespace swapdesign {

enum class StartRule {
  centroid_closest,  // unit nearest the covariate centroid (ties: lowest index)
  first_unit,
  fixed_index,
};

struct OrderingConfig {
  StartRule start_rule = StartRule::centroid_closest;
  int start_index = 0;  // only for fixed_index
  int two_opt_max_passes = 50;
  bool standardize = false;  // per-column z-scoring before measuring distances
};

/// A short open Hamiltonian path through covariate space.
struct OrderingResult {
  std::vector<int> permutation;
  double path_length = 0.0;   // in the metric the ordering was optimized in
  int improvement_passes = 0;  // 2-opt sweeps that found an improvement
};

/// Greedy nearest-neighbor path improved by 2-opt segment reversals until no
/// exchange shortens it or the pass limit is hit. Deterministic given inputs.
OrderingResult order_covariates(const Matrix& covariates,
                                const OrderingConfig& config = {});

/// Sum of consecutive Euclidean distances along the permutation.
double path_length(const Matrix& covariates, std::span<const int> permutation);

}  // namespace swapdesign
