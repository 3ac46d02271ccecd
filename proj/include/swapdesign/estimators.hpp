#pragma once

#include <span>
#include <string>
#include <utility>

#include "swapdesign/core.hpp"

namespace swapdesign {

/// The observed side of one draw: assignment, observed outcomes Y_i = Y_i(A_i),
/// the probabilities used for weighting, and (for swap mechanisms) the trace.
/// A view type; the referenced storage must outlive it.
struct ObservedStudy {
  std::span<const std::uint8_t> assignment;
  std::span<const double> y;
  std::span<const double> weights;
  const SwapTrace* trace = nullptr;

  std::size_t size() const { return assignment.size(); }
};

/// Wires a draw, its observed outcomes and the weighting probabilities into a
/// study view (trace taken from the draw; empty for independent mechanisms).
ObservedStudy make_study(const AssignmentDraw& draw, std::span<const double> y,
                         std::span<const double> weights);

/// Inverse propensity weighted effect estimate:
/// (1/n) * sum_i [ A_i Y_i / p_i - (1-A_i) Y_i / (1-p_i) ].
double ipw_estimate(const ObservedStudy& study);

/// Hajek-style arm-normalized IPW; finite-sample biased, lower variance.
double self_normalized_ipw(const ObservedStudy& study);

struct VarianceEstimate {
  double value = 0.0;
  bool clamped = false;  // the raw estimate was negative and was clamped to 0
};

/// Trace-aware variance estimate for the IPW point estimate: per-unit
/// squared-weight terms, minus n * tau_hat^2, plus a pairwise correction
/// 2 * sum over swapped pairs of rho_ij * w_i * w_j where rho_ij comes from
/// pair_covariance on the target probabilities and w_i is the realized
/// inverse-weighted outcome. Negative results are clamped to zero.
VarianceEstimate variance_estimate(const ObservedStudy& study);

/// Inverse standard normal CDF (rational approximation, |error| < 1e-9).
double inverse_normal_cdf(double p);

/// tau_hat +/- z_{1-alpha/2} * sqrt(sigma_hat_sq). sigma_hat_sq is treated as
/// the variance of tau_hat itself; no further 1/n scaling is applied.
std::pair<double, double> confidence_interval(double tau_hat, double sigma_hat_sq,
                                              double alpha);

/// IPW with every weight equal to budget/n: the Horvitz-Thompson estimate a
/// uniform without-replacement design implies.
double ht_uniform_estimate(std::span<const double> y,
                           std::span<const std::uint8_t> assignment, long budget);

/// Full report: point estimate, clamped variance, interval at level alpha.
EstimateReport estimate_report(const ObservedStudy& study, double alpha,
                               std::string method);

}  // namespace swapdesign
