#include "swapdesign/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "swapdesign/rng.hpp"

namespace swapdesign {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double parse_double_field(const std::string& field, std::size_t row,
                          const std::string& column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("row " + std::to_string(row) + ", column '" + column +
                     "': cannot parse '" + field + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw ParseError("row " + std::to_string(row) + ", column '" + column +
                     "': non-finite value");
  }
  return value;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

// Pins entries below the clip floor and rescales the rest so the design
// still sums exactly to the budget.
void repair_clip_floor(std::vector<double>& p0, long budget, double clip_lo) {
  const double target = static_cast<double>(budget);
  std::vector<bool> pinned(p0.size(), false);
  for (int round = 0; round < 100; ++round) {
    bool new_pin = false;
    for (std::size_t i = 0; i < p0.size(); ++i) {
      if (!pinned[i] && p0[i] < clip_lo) {
        pinned[i] = true;
        p0[i] = clip_lo;
        new_pin = true;
      }
    }
    if (!new_pin) return;
    double pinned_mass = 0.0, free_mass = 0.0;
    for (std::size_t i = 0; i < p0.size(); ++i) {
      (pinned[i] ? pinned_mass : free_mass) += p0[i];
    }
    double free_target = target - pinned_mass;
    if (free_mass <= 0.0 || free_target <= 0.0) {
      throw DegenerateBudget("clip repair cannot reach the budget");
    }
    double scale = free_target / free_mass;
    for (std::size_t i = 0; i < p0.size(); ++i) {
      if (!pinned[i]) p0[i] *= scale;
    }
  }
  throw DegenerateBudget("clip repair failed to converge");
}

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::uniform: return "uniform";
    case Regime::gaussian: return "gaussian";
    case Regime::covariate_logistic: return "covariate_logistic";
  }
  return "unknown";
}

Regime regime_from_string(const std::string& name) {
  if (name == "uniform") return Regime::uniform;
  if (name == "gaussian") return Regime::gaussian;
  if (name == "covariate_logistic") return Regime::covariate_logistic;
  throw ValidationError("unknown regime: " + name);
}

BudgetNormalized normalize_budget(std::span<const double> p_raw) {
  if (p_raw.empty()) throw DimensionMismatch("empty probability vector");
  double sum = 0.0;
  for (double p : p_raw) {
    if (!(p > 0.0 && p < 1.0)) {
      throw OutOfRange("normalize_budget needs entries strictly in (0,1)");
    }
    sum += p;
  }
  long budget = static_cast<long>(std::floor(sum + kBudgetTol));
  if (budget == 0) throw DegenerateBudget("probabilities sum below 1");
  double scale = static_cast<double>(budget) / sum;
  BudgetNormalized out;
  out.budget = budget;
  out.p0.assign(p_raw.begin(), p_raw.end());
  for (double& p : out.p0) p *= scale;
  return out;
}

Scenario generate_synthetic(const SyntheticConfig& config) {
  if (config.n < 2) throw InvalidParams("synthetic scenarios need n >= 2");
  if (!(config.clip_lo > 0.0 && config.clip_hi < 1.0 &&
        config.clip_lo < config.clip_hi)) {
    throw InvalidParams("clip bounds must satisfy 0 < lo < hi < 1");
  }
  if (config.covariate_dim == 0) throw InvalidParams("need at least one covariate");
  if (config.noise_sd < 0.0) throw InvalidParams("noise_sd must be nonnegative");

  RngStream rng = RngStream::from_path(config.scenario_seed, {0x5c3a});
  const std::size_t n = config.n;
  const std::size_t k = config.covariate_dim;

  // coefficients, then covariates, then outcome noise, then propensities
  double beta0 = rng.normal();
  std::vector<double> beta(k);
  for (double& b : beta) b = rng.normal();

  Matrix covariates(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < k; ++d) covariates(i, d) = rng.normal();
  }

  OutcomeTable outcomes;
  outcomes.y0.resize(n);
  outcomes.y1.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double base = beta0;
    for (std::size_t d = 0; d < k; ++d) base += covariates(i, d) * beta[d];
    outcomes.y0[i] = base;
    outcomes.y1[i] = base + config.tau_true + config.noise_sd * rng.normal();
  }
  if (config.shift_nonnegative) {
    double lowest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lowest = std::min({lowest, outcomes.y0[i], outcomes.y1[i]});
    }
    if (lowest < 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        outcomes.y0[i] -= lowest;
        outcomes.y1[i] -= lowest;
      }
    }
  }

  std::vector<double> p_raw(n);
  switch (config.regime) {
    case Regime::uniform:
      for (double& p : p_raw) p = rng.uniform(config.clip_lo, config.clip_hi);
      break;
    case Regime::gaussian:
      // N(0.5, 0.25^2): 0.25 read as the standard deviation
      for (double& p : p_raw) {
        p = std::clamp(0.5 + 0.25 * rng.normal(), config.clip_lo, config.clip_hi);
      }
      break;
    case Regime::covariate_logistic: {
      double gamma0 = rng.normal();
      std::vector<double> gamma(k);
      for (double& g : gamma) g = rng.normal();
      for (std::size_t i = 0; i < n; ++i) {
        double logit = gamma0;
        for (std::size_t d = 0; d < k; ++d) logit += covariates(i, d) * gamma[d];
        p_raw[i] = std::clamp(sigmoid(logit), config.clip_lo, config.clip_hi);
      }
      break;
    }
  }

  BudgetNormalized norm = normalize_budget(std::span<const double>(p_raw));
  repair_clip_floor(norm.p0, norm.budget, config.clip_lo);

  Scenario scenario;
  scenario.design.p0 = std::move(norm.p0);
  scenario.design.budget = norm.budget;
  scenario.design.covariates = std::move(covariates);
  scenario.design = validate_design(scenario.design);
  scenario.outcomes = std::move(outcomes);
  return scenario;
}

double negative_outcome_fraction(const OutcomeTable& outcomes) {
  if (outcomes.size() == 0) return 0.0;
  std::size_t negatives = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (std::min(outcomes.y0[i], outcomes.y1[i]) < 0.0) ++negatives;
  }
  return static_cast<double>(negatives) / static_cast<double>(outcomes.size());
}

Scenario load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path);

  std::string line;
  if (!std::getline(in, line)) throw SchemaError("dataset has no header row");
  std::vector<std::string> header = split_csv_line(line);
  const std::vector<std::string> required = {"id", "y0", "y1", "p0"};
  if (header.size() < required.size()) {
    throw SchemaError("header must start with id,y0,y1,p0");
  }
  for (std::size_t c = 0; c < required.size(); ++c) {
    if (header[c] != required[c]) {
      throw SchemaError("missing or misplaced required column '" + required[c] + "'");
    }
  }
  for (std::size_t c = required.size(); c < header.size(); ++c) {
    if (header[c].rfind("v_", 0) != 0) {
      throw SchemaError("unexpected column '" + header[c] +
                        "' (covariates must be prefixed v_)");
    }
  }
  const std::size_t n_cov = header.size() - required.size();

  std::vector<std::string> ids;
  std::vector<double> y0, y1, p0, cov_data;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError("row " + std::to_string(row) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      throw ParseError("row " + std::to_string(row) + ": empty id");
    }
    ids.push_back(fields[0]);
    y0.push_back(parse_double_field(fields[1], row, "y0"));
    y1.push_back(parse_double_field(fields[2], row, "y1"));
    double p = parse_double_field(fields[3], row, "p0");
    if (p < 0.0 || p > 1.0) {
      throw ParseError("row " + std::to_string(row) + ": p0 outside [0,1]");
    }
    p0.push_back(p);
    for (std::size_t c = 0; c < n_cov; ++c) {
      cov_data.push_back(parse_double_field(fields[4 + c], row, header[4 + c]));
    }
  }
  if (ids.empty()) throw SchemaError("dataset has no data rows");

  const std::size_t n = ids.size();
  double sum = std::accumulate(p0.begin(), p0.end(), 0.0);
  long budget;
  if (std::abs(sum - std::round(sum)) <= kBudgetTol) {
    budget = static_cast<long>(std::llround(sum));
  } else {
    // scale only the strictly fractional entries; 0/1 units are pre-decided
    double frac_sum = 0.0;
    long ones = 0;
    for (double p : p0) {
      if (p == 1.0) ++ones;
      else if (p > 0.0) frac_sum += p;
    }
    long frac_budget = static_cast<long>(std::floor(frac_sum + kBudgetTol));
    if (frac_budget == 0 && frac_sum > 0.0) {
      throw DegenerateBudget("fractional probabilities sum below 1");
    }
    double scale = frac_sum > 0.0 ? static_cast<double>(frac_budget) / frac_sum : 1.0;
    for (double& p : p0) {
      if (p > 0.0 && p < 1.0) p *= scale;
    }
    budget = ones + frac_budget;
  }

  Scenario scenario;
  scenario.design.p0 = std::move(p0);
  scenario.design.budget = budget;
  if (n_cov > 0) scenario.design.covariates = Matrix(n, n_cov, std::move(cov_data));
  scenario.design.unit_ids = std::move(ids);
  scenario.design = validate_design(scenario.design);
  scenario.outcomes.y0 = std::move(y0);
  scenario.outcomes.y1 = std::move(y1);
  return scenario;
}

void write_dataset(const std::string& path, const Scenario& scenario) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  const std::size_t n = scenario.design.size();
  const std::size_t n_cov =
      scenario.design.covariates ? scenario.design.covariates->cols() : 0;
  out << "id,y0,y1,p0";
  for (std::size_t c = 0; c < n_cov; ++c) out << ",v_" << (c + 1);
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    if (scenario.design.unit_ids) {
      out << (*scenario.design.unit_ids)[i];
    } else {
      out << 'u' << i;
    }
    out << ',' << format_double(scenario.outcomes.y0[i]) << ','
        << format_double(scenario.outcomes.y1[i]) << ','
        << format_double(scenario.design.p0[i]);
    for (std::size_t c = 0; c < n_cov; ++c) {
      out << ',' << format_double((*scenario.design.covariates)(i, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

LipschitzScenario generate_lipschitz_scenario(const LipschitzParams& params) {
  if (params.pairs < 1) throw InvalidParams("need at least one pair");
  if (params.delta < 0.0 || params.cluster_gap <= 0.0) {
    throw InvalidParams("gaps must satisfy delta >= 0 and cluster_gap > 0");
  }
  if (params.delta >= params.cluster_gap) {
    throw InvalidParams("pairing requires delta < cluster_gap");
  }
  if (params.noise_amp < 0.0) throw InvalidParams("noise_amp must be nonnegative");

  const std::size_t n = static_cast<std::size_t>(params.pairs) * 2;
  const double spacing = params.cluster_gap + params.delta;

  std::vector<double> position(n);
  for (int j = 0; j < params.pairs; ++j) {
    position[2 * static_cast<std::size_t>(j)] = j * spacing;
    position[2 * static_cast<std::size_t>(j) + 1] = j * spacing + params.delta;
  }
  const double extent = position.back();

  std::vector<double> u(n), f(n), effect(n), p(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = extent > 0.0 ? position[i] / extent : 0.0;
    f[i] = params.f_intercept + params.f_slope * u[i];
    effect[i] = params.tau_intercept + params.tau_slope * u[i];
    p[i] = params.p_intercept + params.p_slope * u[i];
  }

  // nudge the intercept so the design sums to an integer budget exactly
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  long budget = std::clamp<long>(static_cast<long>(std::llround(sum)), 1,
                                 static_cast<long>(n) - 1);
  double shift = (static_cast<double>(budget) - sum) / static_cast<double>(n);
  for (double& pi : p) {
    pi += shift;
    if (!(pi > 0.0 && pi < 1.0)) {
      throw InvalidParams("propensity left (0,1); adjust p_intercept/p_slope");
    }
  }

  RngStream rng = RngStream::from_path(params.seed, {0x11b5});
  OutcomeTable outcomes;
  outcomes.y0.resize(n);
  outcomes.y1.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double e0 = params.noise_amp > 0.0
                    ? rng.uniform(-params.noise_amp, params.noise_amp)
                    : 0.0;
    double e1 = params.noise_amp > 0.0
                    ? rng.uniform(-params.noise_amp, params.noise_amp)
                    : 0.0;
    outcomes.y0[i] = f[i] + e0;
    outcomes.y1[i] = f[i] + effect[i] + e1;
    if (outcomes.y0[i] < 0.0 || outcomes.y1[i] < 0.0) {
      throw InvalidParams("construction produced a negative outcome");
    }
  }

  // empirical bi-Lipschitz constants of the effective weight across adjacent units
  double ell = std::numeric_limits<double>::infinity(), big = 0.0;
  bool any_gap = false;
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = (f[i] + effect[i]) / p[i] + f[i] / (1.0 - p[i]);
  }
  for (std::size_t i = 1; i < n; ++i) {
    double dv = position[i] - position[i - 1];
    if (dv <= 0.0) continue;
    any_gap = true;
    double ratio = std::abs(m[i] - m[i - 1]) / dv;
    ell = std::min(ell, ratio);
    big = std::max(big, ratio);
  }
  if (!any_gap) {
    ell = 0.0;
    big = 0.0;
  }
  // the pairing condition L_M * delta < ell_M * c, vacuous for constant M
  if (big > 0.0 && !(big * params.delta < ell * params.cluster_gap)) {
    throw InvalidParams("bi-Lipschitz gap condition fails; widen cluster_gap");
  }

  LipschitzScenario scenario;
  scenario.design.p0 = std::move(p);
  scenario.design.budget = budget;
  scenario.design.covariates = Matrix(n, 1, std::move(position));
  scenario.design = validate_design(scenario.design);
  scenario.outcomes = std::move(outcomes);
  scenario.planted_order.resize(n);
  std::iota(scenario.planted_order.begin(), scenario.planted_order.end(), 0);
  scenario.delta = params.delta;
  scenario.cluster_gap = params.cluster_gap;
  scenario.ell_m = ell;
  scenario.big_l_m = big;
  return scenario;
}

}  // namespace swapdesign
