#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "swapdesign/core.hpp"

namespace swapdesign {

enum class Regime { uniform, gaussian, covariate_logistic };

std::string to_string(Regime regime);
Regime regime_from_string(const std::string& name);

struct SyntheticConfig {
  std::size_t n = 100;
  Regime regime = Regime::uniform;
  double tau_true = 2.0;
  double noise_sd = 1.0;
  std::size_t covariate_dim = 3;
  double clip_lo = 0.01;
  double clip_hi = 0.99;
  std::uint64_t scenario_seed = 0;
  /// Shift both potential outcomes so their minimum is zero. Off by default;
  /// Gaussian outcome models do go negative otherwise.
  bool shift_nonnegative = false;
};

struct Scenario {
  DesignSpec design;
  OutcomeTable outcomes;
};

/// One synthetic scenario: standard-normal covariates, linear baseline with
/// per-scenario coefficients, constant additive effect tau_true plus noise,
/// and target probabilities from the chosen regime, budget-normalized so the
/// design sums to an integer while respecting the clip bounds.
Scenario generate_synthetic(const SyntheticConfig& config);

/// Fraction of units whose min(y0, y1) is negative; reported by the harness.
double negative_outcome_fraction(const OutcomeTable& outcomes);

struct BudgetNormalized {
  std::vector<double> p0;
  long budget = 0;
};

/// budget = floor(sum(p_raw)); p0 = p_raw * budget / sum(p_raw). Entries must
/// be strictly fractional. Throws DegenerateBudget when the sum floors to 0.
BudgetNormalized normalize_budget(std::span<const double> p_raw);

/// Reads the dataset CSV (header: id,y0,y1,p0[,v_...]); budget-normalizes p0
/// unless the file's sum is already integral within tolerance.
Scenario load_dataset(const std::string& path);

/// Writes a scenario in the dataset CSV schema, shortest round-trip doubles.
void write_dataset(const std::string& path, const Scenario& scenario);

struct LipschitzParams {
  int pairs = 25;            // n = 2 * pairs
  double delta = 0.02;       // intra-pair covariate gap
  double cluster_gap = 1.0;  // c: distance between consecutive pairs
  double noise_amp = 0.0;    // uniform outcome noise on [-amp, amp]
  std::uint64_t seed = 0;
  // Affine pieces in the normalized coordinate u in [0,1]. The defaults keep
  // the effective weight strictly monotone, outcomes nonnegative and the
  // propensities inside (0,1).
  double f_intercept = 2.0;
  double f_slope = 1.0;
  double tau_intercept = 1.0;
  double tau_slope = 0.5;
  double p_intercept = 0.45;
  double p_slope = -0.2;
};

struct LipschitzScenario {
  DesignSpec design;
  OutcomeTable outcomes;
  std::vector<int> planted_order;  // units laid out left to right: identity
  double delta = 0.0;
  double cluster_gap = 0.0;
  double ell_m = 0.0;    // empirical lower bi-Lipschitz constant of M
  double big_l_m = 0.0;  // empirical upper bi-Lipschitz constant of M
};

/// Plants 1-D covariates in tight pairs (gap delta inside a pair, gap
/// cluster_gap between pairs) with affine baseline/effect/propensity, so the
/// adjacent pairing is the known-good ordering for covariate-ordered swaps.
/// Outcomes are nonnegative by construction.
LipschitzScenario generate_lipschitz_scenario(const LipschitzParams& params);

}  // namespace swapdesign
