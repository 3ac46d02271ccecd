// Command-line front end: validate designs, draw assignments, estimate
// effects, compute covariate orderings and run Monte Carlo studies.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "swapdesign/baselines.hpp"
#include "swapdesign/core.hpp"
#include "swapdesign/datagen.hpp"
#include "swapdesign/estimators.hpp"
#include "swapdesign/harness.hpp"
#include "swapdesign/ordering.hpp"
#include "swapdesign/rng.hpp"
#include "swapdesign/rounding.hpp"

namespace {

using namespace swapdesign;

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

struct DesignInput {
  std::string data_path;
  std::string p0_list;
  long budget = -1;

  void attach(CLI::App* cmd, bool data_only = false) {
    cmd->add_option("--data", data_path, "dataset CSV (id,y0,y1,p0[,v_...])");
    if (!data_only) {
      cmd->add_option("--p0", p0_list, "inline design: comma-separated probabilities");
      cmd->add_option("--budget", budget, "inline design: integer budget");
    }
  }

  Scenario resolve() const {
    if (!data_path.empty()) return load_dataset(data_path);
    if (p0_list.empty()) {
      throw ValidationError("provide --data or an inline --p0/--budget design");
    }
    Scenario scenario;
    std::istringstream in(p0_list);
    std::string item;
    while (std::getline(in, item, ',')) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || ptr != item.data() + item.size()) {
        throw ParseError("--p0: cannot parse '" + item + "'");
      }
      scenario.design.p0.push_back(v);
    }
    if (budget < 0) throw ValidationError("inline designs need --budget");
    scenario.design.budget = budget;
    scenario.design = validate_design(scenario.design);
    scenario.outcomes.y0.assign(scenario.design.size(), 0.0);
    scenario.outcomes.y1.assign(scenario.design.size(), 0.0);
    return scenario;
  }
};

const char* case_name(SwapCase c) {
  return c == SwapCase::sum_le_1 ? "sum_le_1" : "sum_gt_1";
}

SwapCase case_from_name(const std::string& name) {
  if (name == "sum_le_1") return SwapCase::sum_le_1;
  if (name == "sum_gt_1") return SwapCase::sum_gt_1;
  throw ParseError("unknown swap case: " + name);
}

const char* branch_name(SwapBranch b) {
  return b == SwapBranch::i_won ? "i_won" : "j_won";
}

SwapBranch branch_from_name(const std::string& name) {
  if (name == "i_won") return SwapBranch::i_won;
  if (name == "j_won") return SwapBranch::j_won;
  throw ParseError("unknown swap branch: " + name);
}

nlohmann::json draw_to_json(const AssignmentDraw& draw, long budget,
                            std::uint64_t seed) {
  nlohmann::json j;
  j["mechanism"] = to_string(draw.mechanism);
  j["seed"] = seed;
  j["n"] = draw.assignment.size();
  j["budget"] = budget;
  j["tries"] = draw.tries;
  j["assignment"] = draw.assignment;
  nlohmann::json trace = nlohmann::json::array();
  for (const SwapRecord& rec : draw.trace.records) {
    trace.push_back({{"step", rec.step},
                     {"i", rec.i},
                     {"j", rec.j},
                     {"p_i", rec.pi_before},
                     {"p_j", rec.pj_before},
                     {"case", case_name(rec.swap_case)},
                     {"branch", branch_name(rec.branch)}});
  }
  j["trace"] = trace;
  if (draw.effective_p) j["effective_p"] = *draw.effective_p;
  return j;
}

AssignmentDraw draw_from_json(const nlohmann::json& j) {
  AssignmentDraw draw;
  draw.mechanism = mechanism_from_string(j.at("mechanism").get<std::string>());
  draw.assignment = j.at("assignment").get<std::vector<std::uint8_t>>();
  draw.tries = j.value("tries", 1L);
  for (const auto& rec : j.at("trace")) {
    draw.trace.records.push_back(
        {rec.at("step").get<int>(), rec.at("i").get<int>(), rec.at("j").get<int>(),
         rec.at("p_i").get<double>(), rec.at("p_j").get<double>(),
         case_from_name(rec.at("case").get<std::string>()),
         branch_from_name(rec.at("branch").get<std::string>())});
  }
  if (j.contains("effective_p")) {
    draw.effective_p = j.at("effective_p").get<std::vector<double>>();
  }
  return draw;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_validate(const DesignInput& input) {
  Scenario scenario = input.resolve();
  const DesignSpec& d = scenario.design;
  std::size_t k = d.covariates ? d.covariates->cols() : 0;
  std::cout << "ok: n=" << d.size() << " budget=" << d.budget
            << " covariates=" << k << '\n';
  return 0;
}

struct AssignOptions {
  std::string method = "swap";
  std::uint64_t seed = 0;
  long max_tries = kDefaultRejectionTries;
  int rerand_candidates = 100;
  int rerand_replications = 1000;
  bool standardize = false;
  int max_passes = 50;
  std::string out_path;
};

int cmd_assign(const DesignInput& input, const AssignOptions& opt) {
  Scenario scenario = input.resolve();
  const DesignSpec& design = scenario.design;
  RngStream rng = RngStream::from_path(opt.seed, {0xa551});
  AssignmentDraw draw;
  Mechanism mechanism = mechanism_from_string(opt.method);
  switch (mechanism) {
    case Mechanism::swap:
      draw = swap_round(design, SequentialChain{}, rng);
      break;
    case Mechanism::covariate_swap: {
      if (!design.covariates) {
        throw ValidationError("covariate_swap needs covariate columns");
      }
      OrderingConfig ocfg;
      ocfg.standardize = opt.standardize;
      ocfg.two_opt_max_passes = opt.max_passes;
      OrderingResult ordering = order_covariates(*design.covariates, ocfg);
      draw = swap_round(design, OrderedChain{ordering.permutation}, rng,
                        Mechanism::covariate_swap);
      break;
    }
    case Mechanism::bernoulli:
      draw = bernoulli_assign(design.p0, rng);
      break;
    case Mechanism::rejection_budget:
      draw = rejection_budget_assign(design.p0, design.budget, opt.max_tries, rng);
      break;
    case Mechanism::srs:
      draw = srs_assign(design.size(), design.budget, rng);
      break;
    case Mechanism::rerandomized: {
      if (!design.covariates) {
        throw ValidationError("rerandomized needs covariate columns");
      }
      RerandConfig rcfg;
      rcfg.candidates = opt.rerand_candidates;
      rcfg.effective_p_replications = opt.rerand_replications;
      draw = rerandomize_assign(design, rcfg, rng);
      break;
    }
  }

  std::cout << "mechanism=" << to_string(draw.mechanism)
            << " treated=" << draw.treated_count() << "/" << design.size()
            << " budget=" << design.budget << " tries=" << draw.tries << '\n';
  std::cout << "assignment:";
  for (std::uint8_t a : draw.assignment) std::cout << ' ' << int(a);
  std::cout << '\n';
  if (!draw.trace.empty()) {
    std::cout << "trace (" << draw.trace.size() << " swaps):\n";
    for (const SwapRecord& rec : draw.trace.records) {
      std::cout << "  step " << rec.step << ": (" << rec.i << ',' << rec.j
                << ") p=(" << format_double(rec.pi_before) << ','
                << format_double(rec.pj_before) << ") " << case_name(rec.swap_case)
                << ' ' << branch_name(rec.branch) << '\n';
    }
  }
  if (!opt.out_path.empty()) {
    write_text(opt.out_path,
               draw_to_json(draw, design.budget, opt.seed).dump(2) + "\n");
    std::cout << "wrote " << opt.out_path << '\n';
  }
  return 0;
}

int cmd_estimate(const DesignInput& input, const std::string& draw_path,
                 double alpha, const std::string& out_path) {
  Scenario scenario = input.resolve();
  AssignmentDraw draw =
      draw_from_json(nlohmann::json::parse(read_text(draw_path)));
  if (draw.assignment.size() != scenario.design.size()) {
    throw DimensionMismatch("assignment length != dataset rows");
  }
  std::vector<double> y = scenario.outcomes.observed(draw.assignment);

  std::vector<double> uniform;
  std::span<const double> weights(scenario.design.p0);
  if (draw.mechanism == Mechanism::srs) {
    uniform.assign(scenario.design.size(),
                   static_cast<double>(scenario.design.budget) /
                       static_cast<double>(scenario.design.size()));
    weights = uniform;
  } else if (draw.mechanism == Mechanism::rerandomized) {
    if (!draw.effective_p) {
      throw ValidationError("rerandomized draw file lacks effective_p");
    }
    weights = *draw.effective_p;
  }
  ObservedStudy study = make_study(draw, y, weights);
  EstimateReport report = estimate_report(study, alpha, to_string(draw.mechanism));

  std::cout << "tau_hat=" << format_double(report.tau_hat)
            << " sigma_hat_sq=" << format_double(report.sigma_hat_sq)
            << (report.variance_clamped ? " (clamped)" : "") << " ci=["
            << format_double(report.ci_low) << ", " << format_double(report.ci_high)
            << "] alpha=" << format_double(report.alpha) << " n=" << report.n
            << '\n';
  if (!out_path.empty()) {
    nlohmann::json j;
    j["method"] = report.method;
    j["tau_hat"] = report.tau_hat;
    j["sigma_hat_sq"] = report.sigma_hat_sq;
    j["variance_clamped"] = report.variance_clamped;
    j["ci_low"] = report.ci_low;
    j["ci_high"] = report.ci_high;
    j["alpha"] = report.alpha;
    j["n"] = report.n;
    write_text(out_path, j.dump(2) + "\n");
    std::cout << "wrote " << out_path << '\n';
  }
  return 0;
}

int cmd_order(const DesignInput& input, bool standardize, int max_passes,
              const std::string& out_path) {
  Scenario scenario = input.resolve();
  if (!scenario.design.covariates) {
    throw ValidationError("ordering needs covariate columns");
  }
  OrderingConfig config;
  config.standardize = standardize;
  config.two_opt_max_passes = max_passes;
  OrderingResult result = order_covariates(*scenario.design.covariates, config);
  std::cout << "path_length=" << format_double(result.path_length)
            << " improvement_passes=" << result.improvement_passes << '\n';
  std::cout << "order:";
  for (int idx : result.permutation) std::cout << ' ' << idx;
  std::cout << '\n';
  if (!out_path.empty()) {
    std::ostringstream csv;
    csv << "position,unit_index,id\n";
    for (std::size_t pos = 0; pos < result.permutation.size(); ++pos) {
      int idx = result.permutation[pos];
      csv << pos << ',' << idx << ',';
      if (scenario.design.unit_ids) {
        csv << (*scenario.design.unit_ids)[static_cast<std::size_t>(idx)];
      } else {
        csv << 'u' << idx;
      }
      csv << '\n';
    }
    write_text(out_path, csv.str());
    std::cout << "wrote " << out_path << '\n';
  }
  return 0;
}

int cmd_simulate(const std::string& config_path,
                 const std::vector<std::string>& overrides) {
  ExperimentConfig config;
  if (!config_path.empty()) config = load_experiment_config(config_path);
  for (const std::string& entry : overrides) {
    std::size_t eq = entry.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("--set expects key=value, got: " + entry);
    }
    apply_config_entry(config, entry.substr(0, eq), entry.substr(eq + 1));
  }
  RunResult result = run_experiment(config);
  emit_results(result, config);
  std::cout << "rows=" << result.raw.size()
            << " aggregates=" << result.aggregates.size()
            << " skipped=" << result.errors.size() << " negative_outcome_rate="
            << format_double(result.negative_outcome_rate) << '\n';
  std::cout << "wrote " << config.aggregate_out << " and " << config.raw_out;
  if (!config.json_out.empty()) std::cout << " and " << config.json_out;
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-exact randomized assignment via swap rounding"};
  app.require_subcommand(1);

  DesignInput validate_input;
  CLI::App* validate_cmd = app.add_subcommand("validate", "check a design or dataset");
  validate_input.attach(validate_cmd);

  DesignInput assign_input;
  AssignOptions assign_opt;
  CLI::App* assign_cmd = app.add_subcommand("assign", "draw one assignment");
  assign_input.attach(assign_cmd);
  assign_cmd->add_option("--method", assign_opt.method,
                         "swap|covariate_swap|bernoulli|rejection_budget|srs|"
                         "rerandomized");
  assign_cmd->add_option("--seed", assign_opt.seed, "random seed");
  assign_cmd->add_option("--max-tries", assign_opt.max_tries,
                         "rejection sampling limit");
  assign_cmd->add_option("--rerand-candidates", assign_opt.rerand_candidates,
                         "candidates per re-randomization");
  assign_cmd->add_option("--rerand-replications", assign_opt.rerand_replications,
                         "replays behind effective propensities");
  assign_cmd->add_flag("--standardize", assign_opt.standardize,
                       "z-score covariates before ordering");
  assign_cmd->add_option("--max-passes", assign_opt.max_passes, "2-opt pass limit");
  assign_cmd->add_option("--out", assign_opt.out_path, "write the draw as JSON");

  DesignInput estimate_input;
  std::string draw_path, estimate_out;
  double alpha = 0.05;
  CLI::App* estimate_cmd =
      app.add_subcommand("estimate", "estimate from a dataset and a draw file");
  estimate_input.attach(estimate_cmd, /*data_only=*/true);
  estimate_cmd->add_option("--draw", draw_path, "draw JSON from `assign --out`")
      ->required();
  estimate_cmd->add_option("--alpha", alpha, "interval level (default 0.05)");
  estimate_cmd->add_option("--out", estimate_out, "write the report as JSON");

  DesignInput order_input;
  bool order_standardize = false;
  int order_max_passes = 50;
  std::string order_out;
  CLI::App* order_cmd = app.add_subcommand("order", "emit the covariate ordering");
  order_input.attach(order_cmd, /*data_only=*/true);
  order_cmd->add_flag("--standardize", order_standardize,
                      "z-score covariates before ordering");
  order_cmd->add_option("--max-passes", order_max_passes, "2-opt pass limit");
  order_cmd->add_option("--out", order_out, "write position,unit_index,id CSV");

  std::string sim_config;
  std::vector<std::string> sim_overrides;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "run a Monte Carlo study from a config file");
  simulate_cmd->add_option("--config", sim_config, "key = value config file");
  simulate_cmd->add_option("--set", sim_overrides,
                           "override any config key, e.g. --set scenarios=10");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(validate_input);
    if (assign_cmd->parsed()) return cmd_assign(assign_input, assign_opt);
    if (estimate_cmd->parsed()) {
      return cmd_estimate(estimate_input, draw_path, alpha, estimate_out);
    }
    if (order_cmd->parsed()) {
      return cmd_order(order_input, order_standardize, order_max_passes, order_out);
    }
    if (simulate_cmd->parsed()) return cmd_simulate(sim_config, sim_overrides);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
