#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swapdesign/baselines.hpp"
#include "swapdesign/core.hpp"
#include "swapdesign/datagen.hpp"

namespace swapdesign {

/// Assignment mechanism plus the estimator it feeds.
enum class Method {
  swap,              // sequential-chain swap rounding, IPW on p0
  covariate_swap,    // swap rounding along the covariate ordering, IPW on p0
  ipw_independent,   // independent Bernoulli, IPW on p0
  rejection_budget,  // budget-conditioned Bernoulli, IPW on p0 (distorted)
  srs,               // uniform budget-sized subset, Horvitz-Thompson on B/n
  rerandomized,      // best-of-K Mahalanobis, IPW on effective propensities
  self_normalized,   // independent Bernoulli, Hajek estimator
};

std::string to_string(Method method);
Method method_from_string(const std::string& name);
std::vector<Method> all_methods();

/// Declarative Monte Carlo study: scenarios x replications over a method set.
struct ExperimentConfig {
  std::vector<std::size_t> n_grid = {100};
  int scenarios = 100;
  int replications = 100;
  Regime regime = Regime::uniform;
  std::string dataset;  // nonempty: run on this dataset instead of synthetic data
  std::vector<Method> methods = all_methods();
  double alpha = 0.05;
  double tau_true = 2.0;
  double noise_sd = 1.0;
  bool shift_nonnegative = false;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0: hardware concurrency
  bool skip_errors = false;
  long rejection_max_tries = kDefaultRejectionTries;
  int rerand_candidates = 100;
  int rerand_replications = 1000;
  std::string aggregate_out = "aggregate.csv";
  std::string raw_out = "raw.csv";
  std::string json_out;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Flat key=value config file; '#' starts a comment. Unknown keys are errors.
ExperimentConfig load_experiment_config(const std::string& path);
/// Applies one key=value pair (the CLI override path shares this parser).
void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);
void validate_config(const ExperimentConfig& config);

/// One estimate from one draw.
struct RawRow {
  Method method = Method::swap;
  std::size_t n = 0;
  int scenario = 0;
  int replication = 0;
  long budget = 0;
  double sate_value = 0.0;
  double pate_value = 0.0;
  double tau_hat = 0.0;
  double sigma_hat_sq = 0.0;
  bool clamped = false;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool covered = false;  // ci contains pate
};

/// Per (method, n) summary across scenarios, Figure-1-style.
struct AggregateRow {
  Method method = Method::swap;
  std::size_t n = 0;
  double mean_emp_var = 0.0;  // mean over scenarios of Var_reps(tau_hat)
  double var_ci_lo = 0.0;     // normal-approx 95% interval over scenarios
  double var_ci_hi = 0.0;
  double mean_bias = 0.0;  // mean over scenarios of mean_reps(tau_hat) - SATE
  double coverage = 0.0;   // fraction of intervals containing PATE
  double mean_sigma_hat = 0.0;
  double clamp_rate = 0.0;
  double wall_time_s = 0.0;
};

struct RunResult {
  std::vector<AggregateRow> aggregates;
  std::vector<RawRow> raw;
  std::vector<std::string> errors;          // populated under skip_errors
  double negative_outcome_rate = 0.0;       // mean per-scenario fraction
};

/// Runs the full study. Reproducible from master_seed via hierarchical
/// substreams keyed by (n, scenario, method, replication); output identical
/// for any worker count. Fail-fast unless skip_errors.
RunResult run_experiment(const ExperimentConfig& config);

std::string aggregate_csv_string(const std::vector<AggregateRow>& rows);
std::string raw_csv_string(const std::vector<RawRow>& rows);
std::vector<RawRow> parse_raw_csv(const std::string& text);

/// Writes aggregate CSV, raw CSV, optional JSON summary, and the error
/// sidecar (raw_out + ".errors") when failures were skipped.
void emit_results(const RunResult& result, const ExperimentConfig& config);

std::string experiment_config_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const std::string& text);

}  // namespace swapdesign
