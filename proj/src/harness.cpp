#include "swapdesign/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "swapdesign/estimators.hpp"
#include "swapdesign/ordering.hpp"
#include "swapdesign/rng.hpp"
#include "swapdesign/rounding.hpp"
#include "internal_util.hpp"

namespace swapdesign {

namespace {

using detail::format_double;
using detail::parse_double;
using detail::split;
using detail::trim;

constexpr std::uint64_t kScenarioTag = 0x5ce0;
constexpr std::uint64_t kEffectiveTag = 0xeff0;
constexpr std::uint64_t kDrawTag = 0xd0a0;

std::uint64_t scenario_seed(std::uint64_t master, std::size_t n, int scenario) {
  std::uint64_t key = derive_key(master, kScenarioTag);
  key = derive_key(key, static_cast<std::uint64_t>(n));
  return derive_key(key, static_cast<std::uint64_t>(scenario));
}

struct CellTask {
  std::size_t n = 0;
  int scenario = 0;
};

struct CellFailure {
  std::string message;
  bool is_validation = false;
};

struct CellOutput {
  std::vector<RawRow> rows;
  std::map<Method, double> seconds;
  std::vector<std::string> skipped;
  std::optional<CellFailure> fatal;
  double negative_fraction = 0.0;
};

struct ScenarioData {
  const DesignSpec* design = nullptr;
  const OutcomeTable* outcomes = nullptr;
  double sate_value = 0.0;
  double pate_value = 0.0;
};

RawRow run_one(Method method, const ScenarioData& data,
               const std::vector<int>* ordering_perm,
               const std::vector<double>* effective_p,
               const ExperimentConfig& config, RngStream& rng) {
  const DesignSpec& design = *data.design;
  const std::size_t n = design.size();

  AssignmentDraw draw;
  switch (method) {
    case Method::swap:
      draw = swap_round(design, SequentialChain{}, rng);
      break;
    case Method::covariate_swap:
      draw = swap_round(design, OrderedChain{*ordering_perm}, rng,
                        Mechanism::covariate_swap);
      break;
    case Method::ipw_independent:
    case Method::self_normalized:
      draw = bernoulli_assign(design.p0, rng);
      break;
    case Method::rejection_budget:
      draw = rejection_budget_assign(design.p0, design.budget,
                                     config.rejection_max_tries, rng);
      break;
    case Method::srs:
      if (design.budget <= 0 || design.budget >= static_cast<long>(n)) {
        throw DegenerateWeight("srs weighting needs 0 < budget < n");
      }
      draw = srs_assign(n, design.budget, rng);
      break;
    case Method::rerandomized: {
      RerandConfig rcfg;
      rcfg.candidates = config.rerand_candidates;
      rcfg.effective_p_replications = config.rerand_replications;
      draw = rerandomize_assign(design, rcfg, rng, *effective_p);
      break;
    }
  }

  std::vector<double> y = data.outcomes->observed(draw.assignment);
  std::vector<double> uniform_weights;
  std::span<const double> weights(design.p0);
  if (method == Method::srs) {
    uniform_weights.assign(n, static_cast<double>(design.budget) /
                                  static_cast<double>(n));
    weights = uniform_weights;
  } else if (method == Method::rerandomized) {
    weights = *draw.effective_p;
  }
  ObservedStudy study = make_study(draw, y, weights);

  RawRow row;
  row.method = method;
  row.n = n;
  row.budget = design.budget;
  row.sate_value = data.sate_value;
  row.pate_value = data.pate_value;
  if (method == Method::self_normalized) {
    // Hajek point estimate; the sigma machinery reports the IPW plug-in value.
    row.tau_hat = self_normalized_ipw(study);
    VarianceEstimate var = variance_estimate(study);
    row.sigma_hat_sq = var.value;
    row.clamped = var.clamped;
    auto [lo, hi] = confidence_interval(row.tau_hat, row.sigma_hat_sq, config.alpha);
    row.ci_low = lo;
    row.ci_high = hi;
  } else {
    EstimateReport report = estimate_report(study, config.alpha, to_string(method));
    row.tau_hat = report.tau_hat;
    row.sigma_hat_sq = report.sigma_hat_sq;
    row.clamped = report.variance_clamped;
    row.ci_low = report.ci_low;
    row.ci_high = report.ci_high;
  }
  row.covered = row.ci_low <= data.pate_value && data.pate_value <= row.ci_high;
  return row;
}

CellOutput run_cell(const CellTask& task, const ExperimentConfig& config,
                    const Scenario* shared_dataset, double shared_sate) {
  CellOutput out;
  Scenario local;
  ScenarioData data;
  if (shared_dataset != nullptr) {
    data.design = &shared_dataset->design;
    data.outcomes = &shared_dataset->outcomes;
    data.sate_value = shared_sate;
    data.pate_value = shared_sate;  // no superpopulation truth for a fixed file
  } else {
    SyntheticConfig scfg;
    scfg.n = task.n;
    scfg.regime = config.regime;
    scfg.tau_true = config.tau_true;
    scfg.noise_sd = config.noise_sd;
    scfg.shift_nonnegative = config.shift_nonnegative;
    scfg.scenario_seed = scenario_seed(config.master_seed, task.n, task.scenario);
    local = generate_synthetic(scfg);
    data.design = &local.design;
    data.outcomes = &local.outcomes;
    data.sate_value = sate(local.outcomes);
    data.pate_value = config.tau_true;
  }
  out.negative_fraction = negative_outcome_fraction(*data.outcomes);

  std::vector<int> ordering_perm;
  std::vector<double> effective_p;
  bool need_ordering = false, need_effective = false;
  for (Method m : config.methods) {
    need_ordering |= m == Method::covariate_swap;
    need_effective |= m == Method::rerandomized;
  }
  try {
    if (need_ordering) {
      if (!data.design->covariates) {
        throw InvalidParams("covariate_swap requires covariates");
      }
      ordering_perm = order_covariates(*data.design->covariates).permutation;
    }
    if (need_effective) {
      RerandConfig rcfg;
      rcfg.candidates = config.rerand_candidates;
      rcfg.effective_p_replications = config.rerand_replications;
      RngStream rng = RngStream::from_path(
          config.master_seed,
          {kEffectiveTag, static_cast<std::uint64_t>(task.n),
           static_cast<std::uint64_t>(task.scenario)});
      effective_p = estimate_effective_propensities(*data.design, rcfg, rng);
    }
  } catch (const Error& e) {
    out.fatal = CellFailure{
        "scenario " + std::to_string(task.scenario) + " (n=" +
            std::to_string(task.n) + "): " + e.what(),
        dynamic_cast<const ValidationError*>(&e) != nullptr};
    return out;
  }

  for (Method method : config.methods) {
    auto started = std::chrono::steady_clock::now();
    for (int rep = 0; rep < config.replications; ++rep) {
      RngStream rng = RngStream::from_path(
          config.master_seed,
          {kDrawTag, static_cast<std::uint64_t>(task.n),
           static_cast<std::uint64_t>(task.scenario),
           static_cast<std::uint64_t>(method), static_cast<std::uint64_t>(rep)});
      try {
        RawRow row = run_one(method, data, &ordering_perm, &effective_p, config, rng);
        row.scenario = task.scenario;
        row.replication = rep;
        out.rows.push_back(row);
      } catch (const Error& e) {
        std::string where = "n=" + std::to_string(task.n) + " scenario=" +
                            std::to_string(task.scenario) + " method=" +
                            to_string(method) + " replication=" +
                            std::to_string(rep) + ": " + e.what();
        if (config.skip_errors) {
          out.skipped.push_back(std::move(where));
        } else {
          out.fatal = CellFailure{std::move(where),
                                  dynamic_cast<const ValidationError*>(&e) != nullptr};
          return out;
        }
      }
    }
    out.seconds[method] +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
  }
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<RawRow>& raw,
                                    const std::map<std::pair<Method, std::size_t>,
                                                   double>& wall_times) {
  const double z95 = inverse_normal_cdf(0.975);
  std::map<std::pair<Method, std::size_t>, std::map<int, std::vector<const RawRow*>>>
      groups;
  for (const RawRow& row : raw) {
    groups[{row.method, row.n}][row.scenario].push_back(&row);
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, scenarios] : groups) {
    AggregateRow agg;
    agg.method = key.first;
    agg.n = key.second;
    std::vector<double> scenario_vars;
    double bias_sum = 0.0;
    std::size_t bias_count = 0;
    double covered = 0.0, sigma_sum = 0.0, clamp_sum = 0.0;
    std::size_t row_count = 0;
    for (const auto& [scenario, rows] : scenarios) {
      double mean_tau = 0.0;
      for (const RawRow* r : rows) mean_tau += r->tau_hat;
      mean_tau /= static_cast<double>(rows.size());
      if (rows.size() >= 2) {
        double ss = 0.0;
        for (const RawRow* r : rows) {
          double d = r->tau_hat - mean_tau;
          ss += d * d;
        }
        scenario_vars.push_back(ss / static_cast<double>(rows.size() - 1));
      }
      bias_sum += mean_tau - rows.front()->sate_value;
      ++bias_count;
      for (const RawRow* r : rows) {
        covered += r->covered ? 1.0 : 0.0;
        sigma_sum += r->sigma_hat_sq;
        clamp_sum += r->clamped ? 1.0 : 0.0;
        ++row_count;
      }
    }
    if (!scenario_vars.empty()) {
      double mean_var = std::accumulate(scenario_vars.begin(), scenario_vars.end(),
                                        0.0) /
                        static_cast<double>(scenario_vars.size());
      agg.mean_emp_var = mean_var;
      if (scenario_vars.size() >= 2) {
        double ss = 0.0;
        for (double v : scenario_vars) ss += (v - mean_var) * (v - mean_var);
        double se = std::sqrt(ss / static_cast<double>(scenario_vars.size() - 1) /
                              static_cast<double>(scenario_vars.size()));
        agg.var_ci_lo = mean_var - z95 * se;
        agg.var_ci_hi = mean_var + z95 * se;
      } else {
        agg.var_ci_lo = agg.var_ci_hi = mean_var;
      }
    }
    agg.mean_bias = bias_count > 0 ? bias_sum / static_cast<double>(bias_count) : 0.0;
    if (row_count > 0) {
      agg.coverage = covered / static_cast<double>(row_count);
      agg.mean_sigma_hat = sigma_sum / static_cast<double>(row_count);
      agg.clamp_rate = clamp_sum / static_cast<double>(row_count);
    }
    if (auto it = wall_times.find(key); it != wall_times.end()) {
      agg.wall_time_s = it->second;
    }
    out.push_back(agg);
  }
  return out;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::swap: return "swap";
    case Method::covariate_swap: return "covariate_swap";
    case Method::ipw_independent: return "ipw_independent";
    case Method::rejection_budget: return "rejection_budget";
    case Method::srs: return "srs";
    case Method::rerandomized: return "rerandomized";
    case Method::self_normalized: return "self_normalized";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  for (Method m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("unknown method: " + name);
}

std::vector<Method> all_methods() {
  return {Method::swap,          Method::covariate_swap, Method::ipw_independent,
          Method::rejection_budget, Method::srs,         Method::rerandomized,
          Method::self_normalized};
}

void validate_config(const ExperimentConfig& config) {
  if (config.scenarios < 1) throw InvalidParams("scenarios must be >= 1");
  if (config.replications < 2) throw InvalidParams("replications must be >= 2");
  if (config.methods.empty()) throw InvalidParams("methods must be nonempty");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw InvalidLevel("alpha must lie in (0,1)");
  }
  if (config.dataset.empty()) {
    if (config.n_grid.empty()) throw InvalidParams("n_grid must be nonempty");
    for (std::size_t n : config.n_grid) {
      if (n < 2) throw InvalidParams("every n must be >= 2");
    }
  }
  if (config.threads < 0) throw InvalidParams("threads must be >= 0");
  if (config.rejection_max_tries < 1) {
    throw InvalidParams("rejection_max_tries must be >= 1");
  }
  std::vector<Method> seen;
  for (Method m : config.methods) {
    if (std::find(seen.begin(), seen.end(), m) != seen.end()) {
      throw InvalidParams("duplicate method: " + to_string(m));
    }
    seen.push_back(m);
  }
}

RunResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);

  Scenario dataset_scenario;
  const Scenario* shared_dataset = nullptr;
  double shared_sate = 0.0;
  std::vector<std::size_t> n_grid = config.n_grid;
  int scenarios = config.scenarios;
  if (!config.dataset.empty()) {
    dataset_scenario = load_dataset(config.dataset);
    shared_dataset = &dataset_scenario;
    shared_sate = sate(dataset_scenario.outcomes);
    n_grid = {dataset_scenario.design.size()};
    scenarios = 1;  // one fixed data source; replications carry the randomness
    bool needs_cov = false;
    for (Method m : config.methods) {
      needs_cov |= m == Method::covariate_swap || m == Method::rerandomized;
    }
    if (needs_cov && !dataset_scenario.design.covariates) {
      throw InvalidParams("method set needs covariates but the dataset has none");
    }
  }

  std::vector<CellTask> tasks;
  for (std::size_t n : n_grid) {
    for (int s = 0; s < scenarios; ++s) tasks.push_back({n, s});
  }
  std::vector<CellOutput> outputs(tasks.size());

  unsigned hw = std::thread::hardware_concurrency();
  std::size_t workers = config.threads > 0 ? static_cast<std::size_t>(config.threads)
                                           : (hw > 0 ? hw : 1);
  workers = std::min(workers, tasks.size());
  if (workers == 0) workers = 1;

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  auto worker = [&] {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size() || abort.load()) return;
      outputs[idx] = run_cell(tasks[idx], config, shared_dataset, shared_sate);
      if (outputs[idx].fatal && !config.skip_errors) abort.store(true);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (const CellOutput& out : outputs) {
    if (out.fatal && !config.skip_errors) {
      if (out.fatal->is_validation) throw ValidationError(out.fatal->message);
      throw RuntimeFailure(out.fatal->message);
    }
  }

  RunResult result;
  std::map<std::pair<Method, std::size_t>, double> wall_times;
  double negative_sum = 0.0;
  std::size_t cell_count = 0;
  for (std::size_t idx = 0; idx < outputs.size(); ++idx) {
    CellOutput& out = outputs[idx];
    if (out.fatal) {  // skip-errors mode: cell-level setup failure
      result.errors.push_back(out.fatal->message);
      continue;
    }
    for (RawRow& row : out.rows) result.raw.push_back(row);
    for (const std::string& msg : out.skipped) result.errors.push_back(msg);
    for (const auto& [method, secs] : out.seconds) {
      wall_times[{method, tasks[idx].n}] += secs;
    }
    negative_sum += out.negative_fraction;
    ++cell_count;
  }
  if (cell_count > 0) {
    result.negative_outcome_rate = negative_sum / static_cast<double>(cell_count);
  }
  result.aggregates = aggregate(result.raw, wall_times);
  return result;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  ExperimentConfig config;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = line.substr(0, line.find('#'));
    stripped = trim(stripped);
    if (stripped.empty()) continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(lineno) +
                       ": expected key = value");
    }
    apply_config_entry(config, trim(stripped.substr(0, eq)),
                       trim(stripped.substr(eq + 1)));
  }
  return config;
}

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
  auto as_long = [&](const std::string& v) {
    return static_cast<long>(std::stoll(v));
  };
  auto as_bool = [&](const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ParseError("config key '" + key + "': expected true/false");
  };
  try {
    if (key == "n_grid") {
      config.n_grid.clear();
      for (const std::string& item : split(value, ',')) {
        config.n_grid.push_back(static_cast<std::size_t>(as_long(trim(item))));
      }
    } else if (key == "scenarios") {
      config.scenarios = static_cast<int>(as_long(value));
    } else if (key == "replications") {
      config.replications = static_cast<int>(as_long(value));
    } else if (key == "regime") {
      config.regime = regime_from_string(value);
    } else if (key == "dataset") {
      config.dataset = value;
    } else if (key == "methods") {
      config.methods.clear();
      for (const std::string& item : split(value, ',')) {
        config.methods.push_back(method_from_string(trim(item)));
      }
    } else if (key == "alpha") {
      config.alpha = parse_double(value, "config key alpha");
    } else if (key == "tau_true") {
      config.tau_true = parse_double(value, "config key tau_true");
    } else if (key == "noise_sd") {
      config.noise_sd = parse_double(value, "config key noise_sd");
    } else if (key == "shift_nonnegative") {
      config.shift_nonnegative = as_bool(value);
    } else if (key == "master_seed") {
      config.master_seed = static_cast<std::uint64_t>(std::stoull(value));
    } else if (key == "threads") {
      config.threads = static_cast<int>(as_long(value));
    } else if (key == "skip_errors") {
      config.skip_errors = as_bool(value);
    } else if (key == "rejection_max_tries") {
      config.rejection_max_tries = as_long(value);
    } else if (key == "rerand_candidates") {
      config.rerand_candidates = static_cast<int>(as_long(value));
    } else if (key == "rerand_replications") {
      config.rerand_replications = static_cast<int>(as_long(value));
    } else if (key == "aggregate_out") {
      config.aggregate_out = value;
    } else if (key == "raw_out") {
      config.raw_out = value;
    } else if (key == "json_out") {
      config.json_out = value;
    } else {
      throw ValidationError("unknown config key: " + key);
    }
  } catch (const std::invalid_argument&) {
    throw ParseError("config key '" + key + "': bad value '" + value + "'");
  } catch (const std::out_of_range&) {
    throw ParseError("config key '" + key + "': value out of range");
  }
}

std::string aggregate_csv_string(const std::vector<AggregateRow>& rows) {
  std::ostringstream out;
  out << "method,n,mean_emp_var,var_ci_lo,var_ci_hi,mean_bias,coverage,"
         "mean_sigma_hat,clamp_rate,wall_time_s\n";
  for (const AggregateRow& r : rows) {
    out << to_string(r.method) << ',' << r.n << ',' << format_double(r.mean_emp_var)
        << ',' << format_double(r.var_ci_lo) << ',' << format_double(r.var_ci_hi)
        << ',' << format_double(r.mean_bias) << ',' << format_double(r.coverage)
        << ',' << format_double(r.mean_sigma_hat) << ','
        << format_double(r.clamp_rate) << ',' << format_double(r.wall_time_s)
        << '\n';
  }
  return out.str();
}

std::string raw_csv_string(const std::vector<RawRow>& rows) {
  std::ostringstream out;
  out << "method,n,scenario,replication,budget,sate,pate,tau_hat,sigma_hat_sq,"
         "clamped,ci_low,ci_high,covered\n";
  for (const RawRow& r : rows) {
    out << to_string(r.method) << ',' << r.n << ',' << r.scenario << ','
        << r.replication << ',' << r.budget << ',' << format_double(r.sate_value)
        << ',' << format_double(r.pate_value) << ',' << format_double(r.tau_hat)
        << ',' << format_double(r.sigma_hat_sq) << ',' << (r.clamped ? 1 : 0)
        << ',' << format_double(r.ci_low) << ',' << format_double(r.ci_high) << ','
        << (r.covered ? 1 : 0) << '\n';
  }
  return out.str();
}

std::vector<RawRow> parse_raw_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("raw csv: missing header");
  if (trim(line) !=
      "method,n,scenario,replication,budget,sate,pate,tau_hat,sigma_hat_sq,"
      "clamped,ci_low,ci_high,covered") {
    throw SchemaError("raw csv: unexpected header");
  }
  std::vector<RawRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> f = split(line, ',');
    if (f.size() != 13) {
      throw ParseError("raw csv line " + std::to_string(lineno) +
                       ": expected 13 fields");
    }
    RawRow r;
    r.method = method_from_string(f[0]);
    r.n = static_cast<std::size_t>(std::stoull(f[1]));
    r.scenario = std::stoi(f[2]);
    r.replication = std::stoi(f[3]);
    r.budget = std::stol(f[4]);
    r.sate_value = parse_double(f[5], "raw csv sate");
    r.pate_value = parse_double(f[6], "raw csv pate");
    r.tau_hat = parse_double(f[7], "raw csv tau_hat");
    r.sigma_hat_sq = parse_double(f[8], "raw csv sigma_hat_sq");
    r.clamped = f[9] == "1";
    r.ci_low = parse_double(f[10], "raw csv ci_low");
    r.ci_high = parse_double(f[11], "raw csv ci_high");
    r.covered = f[12] == "1";
    rows.push_back(r);
  }
  return rows;
}

void emit_results(const RunResult& result, const ExperimentConfig& config) {
  auto write_file = [](const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
  };
  write_file(config.aggregate_out, aggregate_csv_string(result.aggregates));
  write_file(config.raw_out, raw_csv_string(result.raw));
  if (!result.errors.empty()) {
    std::ostringstream sidecar;
    for (const std::string& msg : result.errors) sidecar << msg << '\n';
    write_file(config.raw_out + ".errors", sidecar.str());
  }
  if (!config.json_out.empty()) {
    write_file(config.json_out, experiment_config_json(config));
  }
}

std::string experiment_config_json(const ExperimentConfig& config) {
  nlohmann::json j;
  nlohmann::json c;
  c["n_grid"] = config.n_grid;
  c["scenarios"] = config.scenarios;
  c["replications"] = config.replications;
  c["regime"] = to_string(config.regime);
  c["dataset"] = config.dataset;
  std::vector<std::string> methods;
  for (Method m : config.methods) methods.push_back(to_string(m));
  c["methods"] = methods;
  c["alpha"] = config.alpha;
  c["tau_true"] = config.tau_true;
  c["noise_sd"] = config.noise_sd;
  c["shift_nonnegative"] = config.shift_nonnegative;
  c["master_seed"] = config.master_seed;
  c["threads"] = config.threads;
  c["skip_errors"] = config.skip_errors;
  c["rejection_max_tries"] = config.rejection_max_tries;
  c["rerand_candidates"] = config.rerand_candidates;
  c["rerand_replications"] = config.rerand_replications;
  c["aggregate_out"] = config.aggregate_out;
  c["raw_out"] = config.raw_out;
  c["json_out"] = config.json_out;
  j["config"] = c;
  j["library_version"] = "0.1.0";
  j["master_seed"] = config.master_seed;
  return j.dump(2) + "\n";
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const nlohmann::json& c = j.at("config");
  ExperimentConfig config;
  config.n_grid = c.at("n_grid").get<std::vector<std::size_t>>();
  config.scenarios = c.at("scenarios").get<int>();
  config.replications = c.at("replications").get<int>();
  config.regime = regime_from_string(c.at("regime").get<std::string>());
  config.dataset = c.at("dataset").get<std::string>();
  config.methods.clear();
  for (const auto& name : c.at("methods")) {
    config.methods.push_back(method_from_string(name.get<std::string>()));
  }
  config.alpha = c.at("alpha").get<double>();
  config.tau_true = c.at("tau_true").get<double>();
  config.noise_sd = c.at("noise_sd").get<double>();
  config.shift_nonnegative = c.at("shift_nonnegative").get<bool>();
  config.master_seed = c.at("master_seed").get<std::uint64_t>();
  config.threads = c.at("threads").get<int>();
  config.skip_errors = c.at("skip_errors").get<bool>();
  config.rejection_max_tries = c.at("rejection_max_tries").get<long>();
  config.rerand_candidates = c.at("rerand_candidates").get<int>();
  config.rerand_replications = c.at("rerand_replications").get<int>();
  config.aggregate_out = c.at("aggregate_out").get<std::string>();
  config.raw_out = c.at("raw_out").get<std::string>();
  config.json_out = c.at("json_out").get<std::string>();
  return config;
}

}  // namespace swapdesign
