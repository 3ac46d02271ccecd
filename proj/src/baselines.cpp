#include "swapdesign/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "swapdesign/linalg.hpp"

namespace swapdesign {

namespace {

void check_probabilities(std::span<const double> p0) {
  if (p0.empty()) throw DimensionMismatch("design has no units");
  for (double p : p0) {
    if (!(p >= 0.0 && p <= 1.0)) throw OutOfRange("probability outside [0,1]");
  }
}

void check_rerand_config(const RerandConfig& config) {
  if (config.candidates < 1) throw InvalidParams("need at least one candidate");
  if (config.effective_p_replications < 100) {
    throw InvalidParams("effective propensities need at least 100 replications");
  }
}

// Pooled covariate covariance, factorized once per design. Falls back to a
// ridge of 1e-8 * trace/k on the diagonal when the plain factorization fails.
struct MahalanobisContext {
  explicit MahalanobisContext(const Matrix& covariates) : k(covariates.cols()) {
    Matrix cov = sample_covariance(covariates);
    Matrix attempt = cov;
    if (!cholesky_factorize(attempt)) {
      double trace = 0.0;
      for (std::size_t d = 0; d < k; ++d) trace += cov(d, d);
      double ridge = 1e-8 * trace / static_cast<double>(k);
      if (ridge <= 0.0) ridge = 1e-12;
      attempt = cov;
      for (std::size_t d = 0; d < k; ++d) attempt(d, d) += ridge;
      if (!cholesky_factorize(attempt)) {
        throw SingularCovariance("covariate covariance is singular even after ridge");
      }
    }
    lower = std::move(attempt);
  }

  double distance(const Matrix& covariates,
                  std::span<const std::uint8_t> assignment) const {
    std::vector<double> mean_t(k, 0.0), mean_c(k, 0.0);
    std::size_t n_t = 0, n_c = 0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      auto row = covariates.row(i);
      if (assignment[i]) {
        ++n_t;
        for (std::size_t d = 0; d < k; ++d) mean_t[d] += row[d];
      } else {
        ++n_c;
        for (std::size_t d = 0; d < k; ++d) mean_c[d] += row[d];
      }
    }
    if (n_t == 0 || n_c == 0) return std::numeric_limits<double>::infinity();
    std::vector<double> diff(k);
    for (std::size_t d = 0; d < k; ++d) {
      diff[d] = mean_t[d] / static_cast<double>(n_t) -
                mean_c[d] / static_cast<double>(n_c);
    }
    std::vector<double> solved = cholesky_solve(lower, diff);
    double d2 = 0.0;
    for (std::size_t d = 0; d < k; ++d) d2 += diff[d] * solved[d];
    return d2;
  }

  std::size_t k;
  Matrix lower;
};

bool has_both_arms(std::span<const std::uint8_t> assignment) {
  bool any_t = false, any_c = false;
  for (std::uint8_t a : assignment) {
    (a ? any_t : any_c) = true;
    if (any_t && any_c) return true;
  }
  return false;
}

// One best-of-K selection round; fills the winner into `winner`.
void select_candidate(const DesignSpec& spec, const MahalanobisContext& ctx,
                      const RerandConfig& config, RngStream& rng,
                      std::vector<std::uint8_t>& winner, RerandStats* stats) {
  const Matrix& covariates = *spec.covariates;
  std::vector<std::uint8_t> candidate(spec.size());
  double best_distance = std::numeric_limits<double>::infinity();
  bool have_winner = false;
  double finite_sum = 0.0;
  int finite_count = 0;
  int waived = 0;

  // With a single candidate no selection happens, so the draw must stay
  // plain Bernoulli; the two-arm redraw only applies when candidates compete.
  const int retries = config.candidates > 1 ? config.max_empty_arm_retries : 0;
  for (int kth = 0; kth < config.candidates; ++kth) {
    bool degenerate = true;
    for (int attempt = 0; attempt <= retries; ++attempt) {
      for (std::size_t i = 0; i < spec.size(); ++i) {
        candidate[i] = rng.bernoulli(spec.p0[i]) ? 1 : 0;
      }
      if (has_both_arms(candidate)) {
        degenerate = false;
        break;
      }
    }
    if (degenerate) ++waived;
    double dist = ctx.distance(covariates, candidate);
    if (std::isfinite(dist)) {
      finite_sum += dist;
      ++finite_count;
    }
    if (!have_winner || dist < best_distance) {
      best_distance = dist;
      winner = candidate;
      have_winner = true;
    }
  }
  if (stats != nullptr) {
    stats->selected_distance = best_distance;
    stats->mean_candidate_distance =
        finite_count > 0 ? finite_sum / finite_count
                         : std::numeric_limits<double>::infinity();
    stats->waived_candidates = waived;
  }
}

}  // namespace

AssignmentDraw bernoulli_assign(std::span<const double> p0, RngStream& rng) {
  check_probabilities(p0);
  AssignmentDraw draw;
  draw.mechanism = Mechanism::bernoulli;
  draw.assignment.resize(p0.size());
  for (std::size_t i = 0; i < p0.size(); ++i) {
    draw.assignment[i] = rng.bernoulli(p0[i]) ? 1 : 0;
  }
  return draw;
}

AssignmentDraw rejection_budget_assign(std::span<const double> p0, long budget,
                                       long max_tries, RngStream& rng) {
  check_probabilities(p0);
  if (budget < 0 || budget > static_cast<long>(p0.size())) {
    throw BudgetMismatch("budget outside [0, n]");
  }
  if (max_tries < 1) throw InvalidParams("max_tries must be positive");
  AssignmentDraw draw;
  draw.mechanism = Mechanism::rejection_budget;
  draw.assignment.resize(p0.size());
  for (long attempt = 1; attempt <= max_tries; ++attempt) {
    long treated = 0;
    for (std::size_t i = 0; i < p0.size(); ++i) {
      draw.assignment[i] = rng.bernoulli(p0[i]) ? 1 : 0;
      treated += draw.assignment[i];
    }
    if (treated == budget) {
      draw.tries = attempt;
      return draw;
    }
  }
  throw RejectionLimitExceeded("no draw hit the budget in " +
                               std::to_string(max_tries) + " tries");
}

AssignmentDraw srs_assign(std::size_t n, long budget, RngStream& rng) {
  if (n == 0) throw DimensionMismatch("need at least one unit");
  if (budget < 0 || budget > static_cast<long>(n)) {
    throw BudgetMismatch("budget outside [0, n]");
  }
  AssignmentDraw draw;
  draw.mechanism = Mechanism::srs;
  draw.assignment.assign(n, 0);
  // partial Fisher-Yates over an index pool
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  for (long picked = 0; picked < budget; ++picked) {
    std::size_t j = picked + static_cast<std::size_t>(
                                 rng.below(n - static_cast<std::size_t>(picked)));
    std::swap(pool[static_cast<std::size_t>(picked)], pool[j]);
    draw.assignment[pool[static_cast<std::size_t>(picked)]] = 1;
  }
  return draw;
}

std::vector<double> estimate_effective_propensities(const DesignSpec& spec,
                                                    const RerandConfig& config,
                                                    RngStream& rng) {
  check_rerand_config(config);
  if (!spec.covariates) {
    throw InvalidParams("re-randomization requires covariates");
  }
  MahalanobisContext ctx(*spec.covariates);
  const int replications = config.effective_p_replications;
  std::vector<long> counts(spec.size(), 0);
  std::vector<std::uint8_t> winner;
  for (int r = 0; r < replications; ++r) {
    select_candidate(spec, ctx, config, rng, winner, nullptr);
    for (std::size_t i = 0; i < spec.size(); ++i) counts[i] += winner[i];
  }
  const double lo = 1.0 / (2.0 * replications);
  const double hi = 1.0 - lo;
  std::vector<double> effective(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    double freq = static_cast<double>(counts[i]) / replications;
    effective[i] = std::clamp(freq, lo, hi);
  }
  return effective;
}

AssignmentDraw rerandomize_assign(const DesignSpec& spec, const RerandConfig& config,
                                  RngStream& rng, std::vector<double> effective_p,
                                  RerandStats* stats) {
  check_rerand_config(config);
  if (!spec.covariates) {
    throw InvalidParams("re-randomization requires covariates");
  }
  if (effective_p.size() != spec.size()) {
    throw DimensionMismatch("effective propensity length != n");
  }
  MahalanobisContext ctx(*spec.covariates);
  AssignmentDraw draw;
  draw.mechanism = Mechanism::rerandomized;
  select_candidate(spec, ctx, config, rng, draw.assignment, stats);
  draw.effective_p = std::move(effective_p);
  return draw;
}

AssignmentDraw rerandomize_assign(const DesignSpec& spec, const RerandConfig& config,
                                  RngStream& rng, RerandStats* stats) {
  std::vector<double> effective = estimate_effective_propensities(spec, config, rng);
  return rerandomize_assign(spec, config, rng, std::move(effective), stats);
}

}  // namespace swapdesign
