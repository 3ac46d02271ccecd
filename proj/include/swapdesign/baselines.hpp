#pragma once

#include <span>
#include <vector>

#include "swapdesign/core.hpp"
#include "swapdesign/rng.hpp"

namespace swapdesign {

inline constexpr long kDefaultRejectionTries = 100000;

struct RerandConfig {
  int candidates = 100;                 // K: Bernoulli draws per selection
  int effective_p_replications = 1000;  // R: selection replays behind effective_p
  int max_empty_arm_retries = 100;      // redraws before waiving the two-arm rule
};

/// Per-draw diagnostics from one re-randomization selection.
struct RerandStats {
  double selected_distance = 0.0;        // Mahalanobis distance of the winner
  double mean_candidate_distance = 0.0;  // over candidates with both arms
  int waived_candidates = 0;             // degenerate candidates kept anyway
};

/// Independent coin per unit. The budget is not enforced; trace is empty.
AssignmentDraw bernoulli_assign(std::span<const double> p0, RngStream& rng);

/// Redraws independent Bernoulli assignments until one hits the budget
/// exactly. Distorts marginals on asymmetric designs; `tries` records the
/// number of draws consumed.
AssignmentDraw rejection_budget_assign(std::span<const double> p0, long budget,
                                       long max_tries, RngStream& rng);

/// Uniformly random budget-sized subset treated: Pr(A_i = 1) = budget/n.
AssignmentDraw srs_assign(std::size_t n, long budget, RngStream& rng);

/// Estimates the realized Pr(A_i = 1) of the best-of-K Mahalanobis selection
/// by replaying the full procedure R times; clipped to [1/(2R), 1 - 1/(2R)].
std::vector<double> estimate_effective_propensities(const DesignSpec& spec,
                                                    const RerandConfig& config,
                                                    RngStream& rng);

/// Draws K Bernoulli candidates, keeps the one with the smallest Mahalanobis
/// distance between treated and control covariate means (pooled covariance,
/// ridge-regularized if ill-conditioned), and attaches Monte Carlo effective
/// propensities for IPW re-weighting.
AssignmentDraw rerandomize_assign(const DesignSpec& spec, const RerandConfig& config,
                                  RngStream& rng, RerandStats* stats = nullptr);

/// Same selection with precomputed effective propensities (the law depends
/// only on the design and config, so the harness shares them across draws).
AssignmentDraw rerandomize_assign(const DesignSpec& spec, const RerandConfig& config,
                                  RngStream& rng, std::vector<double> effective_p,
                                  RerandStats* stats = nullptr);

}  // namespace swapdesign
