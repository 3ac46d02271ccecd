#include "swapdesign/estimators.hpp"

#include <cmath>

namespace swapdesign {

namespace {

void check_study(const ObservedStudy& study) {
  if (study.assignment.size() != study.y.size() ||
      study.y.size() != study.weights.size()) {
    throw DimensionMismatch("study spans disagree in length");
  }
  if (study.assignment.empty()) throw DimensionMismatch("empty study");
}

// Realized-branch inverse weight guard: the branch that actually happened
// must have a usable probability. The never-realized branch may sit at 0/1
// (pre-decided units).
double realized_weight(const ObservedStudy& study, std::size_t i) {
  double p = study.weights[i];
  if (study.assignment[i]) {
    if (p <= 0.0) throw DegenerateWeight("treated unit with weight 0");
    return p;
  }
  if (p >= 1.0) throw DegenerateWeight("control unit with weight 1");
  return 1.0 - p;
}

}  // namespace

ObservedStudy make_study(const AssignmentDraw& draw, std::span<const double> y,
                         std::span<const double> weights) {
  return ObservedStudy{std::span<const std::uint8_t>(draw.assignment), y, weights,
                       &draw.trace};
}

double ipw_estimate(const ObservedStudy& study) {
  check_study(study);
  double acc = 0.0;
  for (std::size_t i = 0; i < study.size(); ++i) {
    double w = realized_weight(study, i);
    acc += study.assignment[i] ? study.y[i] / w : -study.y[i] / w;
  }
  return acc / static_cast<double>(study.size());
}

double self_normalized_ipw(const ObservedStudy& study) {
  check_study(study);
  double treated_num = 0.0, treated_den = 0.0;
  double control_num = 0.0, control_den = 0.0;
  std::size_t treated = 0;
  for (std::size_t i = 0; i < study.size(); ++i) {
    double w = realized_weight(study, i);
    if (study.assignment[i]) {
      ++treated;
      treated_num += study.y[i] / w;
      treated_den += 1.0 / w;
    } else {
      control_num += study.y[i] / w;
      control_den += 1.0 / w;
    }
  }
  if (treated == 0 || treated == study.size()) {
    throw EmptyArm("self-normalized IPW needs both arms nonempty");
  }
  return treated_num / treated_den - control_num / control_den;
}

VarianceEstimate variance_estimate(const ObservedStudy& study) {
  check_study(study);
  const double n = static_cast<double>(study.size());
  const double tau_hat = ipw_estimate(study);

  double unit_sum = 0.0;
  for (std::size_t i = 0; i < study.size(); ++i) {
    double w = realized_weight(study, i);
    unit_sum += (study.y[i] * study.y[i]) / (w * w);
  }

  // Realized inverse-weighted outcome, the plug-in factor of the pairwise term.
  auto plug_in = [&](int idx) {
    auto i = static_cast<std::size_t>(idx);
    return study.assignment[i] ? study.y[i] / study.weights[i]
                               : study.y[i] / (1.0 - study.weights[i]);
  };

  double pair_sum = 0.0;
  if (study.trace != nullptr) {
    for (const SwapRecord& rec : study.trace->records) {
      double p_i = study.weights[static_cast<std::size_t>(rec.i)];
      double p_j = study.weights[static_cast<std::size_t>(rec.j)];
      if (!(p_i > 0.0 && p_i < 1.0 && p_j > 0.0 && p_j < 1.0)) {
        throw DegenerateWeight("traced unit carries a boundary weight");
      }
      pair_sum += 2.0 * pair_covariance(p_i, p_j) * plug_in(rec.i) * plug_in(rec.j);
    }
  }

  VarianceEstimate out;
  out.value = (unit_sum - n * tau_hat * tau_hat + pair_sum) / (n * n);
  if (out.value < 0.0) {
    out.value = 0.0;
    out.clamped = true;
  }
  return out;
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidLevel("quantile argument must lie in (0,1)");
  }
  // Wichura's PPND16 rational approximation (Applied Statistics 37, 1988).
  const double q = p - 0.5;
  double r, num, den;
  if (std::abs(q) <= 0.425) {
    r = 0.180625 - q * q;
    num = (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
              1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
            1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    den = (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
              5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
            4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  if (r <= 5.0) {
    r -= 1.6;
    num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
              3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
            4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
            2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
            5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  double value = num / den;
  return q < 0.0 ? -value : value;
}

std::pair<double, double> confidence_interval(double tau_hat, double sigma_hat_sq,
                                              double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidLevel("alpha must lie in (0,1)");
  }
  if (sigma_hat_sq < 0.0) {
    throw OutOfRange("variance estimate must be nonnegative");
  }
  double z = inverse_normal_cdf(1.0 - alpha / 2.0);
  double half = z * std::sqrt(sigma_hat_sq);
  return {tau_hat - half, tau_hat + half};
}

double ht_uniform_estimate(std::span<const double> y,
                           std::span<const std::uint8_t> assignment, long budget) {
  if (y.size() != assignment.size()) {
    throw DimensionMismatch("outcome/assignment length mismatch");
  }
  const auto n = static_cast<long>(y.size());
  if (budget <= 0 || budget >= n) {
    throw DegenerateWeight("uniform weighting needs 0 < budget < n");
  }
  std::vector<double> weights(y.size(),
                              static_cast<double>(budget) / static_cast<double>(n));
  ObservedStudy study{assignment, y, std::span<const double>(weights), nullptr};
  return ipw_estimate(study);
}

EstimateReport estimate_report(const ObservedStudy& study, double alpha,
                               std::string method) {
  EstimateReport report;
  report.tau_hat = ipw_estimate(study);
  VarianceEstimate var = variance_estimate(study);
  report.sigma_hat_sq = var.value;
  report.variance_clamped = var.clamped;
  auto [lo, hi] = confidence_interval(report.tau_hat, report.sigma_hat_sq, alpha);
  report.ci_low = lo;
  report.ci_high = hi;
  report.alpha = alpha;
  report.n = study.size();
  report.method = std::move(method);
  return report;
}

}  // namespace swapdesign
