#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "swapdesign/rounding.hpp"
#include "test_support.hpp"

using namespace swapdesign;
using test_support::mean;
using test_support::sample_covariance;
using test_support::sample_variance;

namespace {

DesignSpec make_design(std::vector<double> p0, long budget) {
  DesignSpec spec;
  spec.p0 = std::move(p0);
  spec.budget = budget;
  return validate_design(spec);
}

}  // namespace

TEST_CASE("single_swap case 1 splits the mass") {
  RngStream rng(101);
  SwapStep step = single_swap(0.3, 0.4, rng);
  CHECK(step.swap_case == SwapCase::sum_le_1);
  if (step.branch == SwapBranch::i_won) {
    CHECK(step.new_i == doctest::Approx(0.7));
    CHECK(step.new_j == 0.0);
  } else {
    CHECK(step.new_i == 0.0);
    CHECK(step.new_j == doctest::Approx(0.7));
  }
}

TEST_CASE("single_swap (0.5,0.5): both outcomes, equal frequency") {
  RngStream rng(7);
  const int draws = 100000;
  int i_won = 0;
  for (int r = 0; r < draws; ++r) {
    SwapStep step = single_swap(0.5, 0.5, rng);
    CHECK(((step.new_i == 1.0 && step.new_j == 0.0) ||
           (step.new_i == 0.0 && step.new_j == 1.0)));
    i_won += step.branch == SwapBranch::i_won;
  }
  double freq = static_cast<double>(i_won) / draws;
  CHECK(std::abs(freq - 0.5) < 3.0 * std::sqrt(0.25 / draws));
}

TEST_CASE("single_swap martingale: E[new value] equals the input") {
  struct Args {
    double pi, pj;
  };
  for (Args args : {Args{0.3, 0.4}, Args{0.7, 0.6}, Args{0.45, 0.55}, Args{0.9, 0.8}}) {
    RngStream rng(202);
    const int draws = 100000;
    double sum_i = 0.0, sum_sq_i = 0.0, sum_j = 0.0;
    for (int r = 0; r < draws; ++r) {
      SwapStep step = single_swap(args.pi, args.pj, rng);
      sum_i += step.new_i;
      sum_sq_i += step.new_i * step.new_i;
      sum_j += step.new_j;
    }
    double mean_i = sum_i / draws;
    double var_i = sum_sq_i / draws - mean_i * mean_i;
    double bound = 3.0 * std::sqrt(var_i / draws);
    CHECK(std::abs(mean_i - args.pi) < bound);
    CHECK(std::abs(sum_j / draws - args.pj) < 2.0 * bound + 1e-6);
  }
}

TEST_CASE("single_swap case 2 uses the corrected branch probability") {
  // (0.7,0.6): P(round i up) must be (1-0.6)/(2-1.3) = 4/7, not 3/7.
  RngStream rng(303);
  const int draws = 100000;
  int i_won = 0;
  for (int r = 0; r < draws; ++r) {
    SwapStep step = single_swap(0.7, 0.6, rng);
    CHECK(step.swap_case == SwapCase::sum_gt_1);
    if (step.branch == SwapBranch::i_won) {
      ++i_won;
      CHECK(step.new_i == 1.0);
      CHECK(step.new_j == doctest::Approx(0.3));
    } else {
      CHECK(step.new_j == 1.0);
      CHECK(step.new_i == doctest::Approx(0.3));
    }
  }
  double freq = static_cast<double>(i_won) / draws;
  double expect = 4.0 / 7.0;
  CHECK(std::abs(freq - expect) < 3.0 * std::sqrt(expect * (1 - expect) / draws));
}

TEST_CASE("single_swap rejects boundary inputs") {
  RngStream rng(1);
  CHECK_THROWS_AS(single_swap(0.0, 0.5, rng), OutOfRange);
  CHECK_THROWS_AS(single_swap(0.5, 1.0, rng), OutOfRange);
}

TEST_CASE("chain pairing walks fractional indices in order") {
  std::vector<std::uint8_t> all_frac = {1, 1, 1};
  ChainPairing chain(all_frac, SequentialChain{}, nullptr);
  auto first = chain.next();
  CHECK(first == std::pair<int, int>{0, 1});
  SUBCASE("carrier keeps index 0") {
    chain.resolve(0);
    CHECK(chain.next() == std::pair<int, int>{0, 2});
  }
  SUBCASE("carrier moves to index 1") {
    chain.resolve(1);
    CHECK(chain.next() == std::pair<int, int>{1, 2});
  }
  SUBCASE("both resolved reseeds the carrier") {
    chain.resolve(std::nullopt);
    CHECK_FALSE(chain.has_next());  // only index 2 remains
  }
}

TEST_CASE("chain pairing with an explicit order starts at the permutation head") {
  std::vector<std::uint8_t> all_frac = {1, 1, 1, 1};
  OrderedChain ordered{{2, 0, 3, 1}};
  ChainPairing chain(all_frac, ordered, nullptr);
  CHECK(chain.next() == std::pair<int, int>{2, 0});
}

TEST_CASE("chain pairing on two units yields exactly one pair") {
  std::vector<std::uint8_t> frac = {1, 1};
  ChainPairing chain(frac, SequentialChain{}, nullptr);
  CHECK(chain.next() == std::pair<int, int>{0, 1});
  chain.resolve(std::nullopt);
  CHECK_FALSE(chain.has_next());
}

TEST_CASE("chain pairing skips integral entries") {
  std::vector<std::uint8_t> frac = {0, 1, 0, 1, 1};
  ChainPairing chain(frac, SequentialChain{}, nullptr);
  CHECK(chain.next() == std::pair<int, int>{1, 3});
}

TEST_CASE("ordered chain rejects non-bijections") {
  std::vector<std::uint8_t> frac = {1, 1, 1};
  CHECK_THROWS_AS(ChainPairing(frac, OrderedChain{{0, 0, 1}}, nullptr),
                  InvalidParams);
  CHECK_THROWS_AS(ChainPairing(frac, OrderedChain{{0, 1}}, nullptr),
                  DimensionMismatch);
}

TEST_CASE("swap_round leaves an integral design untouched") {
  DesignSpec spec = make_design({1.0, 0.0, 1.0}, 2);
  RngStream rng(5);
  for (const PairingStrategy& strategy :
       {PairingStrategy{SequentialChain{}}, PairingStrategy{RandomChain{}},
        PairingStrategy{OrderedChain{{2, 1, 0}}}}) {
    AssignmentDraw draw = swap_round(spec, strategy, rng);
    CHECK(draw.assignment == std::vector<std::uint8_t>{1, 0, 1});
    CHECK(draw.trace.empty());
  }
}

TEST_CASE("swap_round two-unit marginals") {
  DesignSpec spec = make_design({0.3, 0.7}, 1);
  RngStream rng(17);
  const int draws = 100000;
  int first_treated = 0;
  for (int r = 0; r < draws; ++r) {
    AssignmentDraw draw = swap_round(spec, SequentialChain{}, rng);
    REQUIRE(draw.treated_count() == 1);
    first_treated += draw.assignment[0];
  }
  CHECK(std::abs(static_cast<double>(first_treated) / draws - 0.3) < 0.005);
}

TEST_CASE("swap_round case-2 chain marginals") {
  DesignSpec spec = make_design({0.7, 0.6, 0.7}, 2);
  RngStream rng(23);
  const int draws = 100000;
  std::vector<long> treated(3, 0);
  for (int r = 0; r < draws; ++r) {
    AssignmentDraw draw = swap_round(spec, SequentialChain{}, rng);
    REQUIRE(draw.treated_count() == 2);
    for (std::size_t i = 0; i < 3; ++i) treated[i] += draw.assignment[i];
  }
  for (std::size_t i = 0; i < 3; ++i) {
    double freq = static_cast<double>(treated[i]) / draws;
    CHECK(std::abs(freq - spec.p0[i]) < 0.005);
  }
}

TEST_CASE("marginals hold for every strategy on a mixed-case design") {
  DesignSpec spec =
      make_design({0.7, 0.6, 0.2, 0.45, 0.55, 0.5}, 3);
  const int draws = 100000;
  int strategy_id = 0;
  for (const PairingStrategy& strategy :
       {PairingStrategy{SequentialChain{}}, PairingStrategy{RandomChain{}},
        PairingStrategy{OrderedChain{{5, 3, 0, 2, 4, 1}}}}) {
    RngStream rng(400 + strategy_id++);
    std::vector<long> treated(spec.size(), 0);
    for (int r = 0; r < draws; ++r) {
      AssignmentDraw draw = swap_round(spec, strategy, rng);
      for (std::size_t i = 0; i < spec.size(); ++i) treated[i] += draw.assignment[i];
    }
    for (std::size_t i = 0; i < spec.size(); ++i) {
      double p = spec.p0[i];
      double freq = static_cast<double>(treated[i]) / draws;
      CHECK(std::abs(freq - p) < 3.0 * std::sqrt(p * (1 - p) / draws));
    }
  }
}

TEST_CASE("first-swap pair covariance matches the closed form") {
  struct Case {
    std::vector<double> p0;
    long budget;
  };
  // first chain pair exercises case 1 and case 2 respectively
  for (const Case& tc : {Case{{0.3, 0.4, 0.3}, 1}, Case{{0.7, 0.6, 0.7}, 2}}) {
    DesignSpec spec = make_design(tc.p0, tc.budget);
    RngStream rng(771);
    const int draws = 200000;
    std::vector<double> a0(draws), a1(draws);
    for (int r = 0; r < draws; ++r) {
      AssignmentDraw draw = swap_round(spec, SequentialChain{}, rng);
      REQUIRE(draw.trace.records.front().i == 0);
      REQUIRE(draw.trace.records.front().j == 1);
      a0[static_cast<std::size_t>(r)] = draw.assignment[0];
      a1[static_cast<std::size_t>(r)] = draw.assignment[1];
    }
    double expected = pair_covariance(tc.p0[0], tc.p0[1]);
    double got = sample_covariance(a0, a1);
    // moment-based standard error of the empirical covariance
    double m0 = mean(a0), m1 = mean(a1);
    double second = 0.0;
    for (int r = 0; r < draws; ++r) {
      double prod = (a0[static_cast<std::size_t>(r)] - m0) *
                    (a1[static_cast<std::size_t>(r)] - m1);
      second += prod * prod;
    }
    double se = std::sqrt((second / draws - got * got) / draws);
    CHECK(std::abs(got - expected) < 3.0 * se);
  }
}

TEST_CASE("trace is well formed and short") {
  RngStream rng(900);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + rng.below(12);
    std::vector<double> p(n);
    double sum = 0.0;
    for (double& v : p) {
      v = rng.uniform(0.05, 0.95);
      sum += v;
    }
    long budget = static_cast<long>(sum);
    if (budget == 0) budget = 1;
    for (double& v : p) v *= static_cast<double>(budget) / sum;
    DesignSpec spec = make_design(p, budget);

    AssignmentDraw draw = swap_round(spec, RandomChain{}, rng);
    CHECK(draw.treated_count() == budget);
    CHECK(draw.trace.size() <= n - 1);
    int last_step = -1;
    for (const SwapRecord& rec : draw.trace.records) {
      CHECK(rec.step == last_step + 1);
      last_step = rec.step;
      CHECK(rec.pi_before > 0.0);
      CHECK(rec.pi_before < 1.0);
      CHECK(rec.pj_before > 0.0);
      CHECK(rec.pj_before < 1.0);
      CHECK(rec.i != rec.j);
    }
  }
}

TEST_CASE("ordered chain swaps adjacent pairs of the permutation") {
  DesignSpec spec = make_design({0.4, 0.6, 0.5, 0.3, 0.2}, 2);
  std::vector<int> perm = {3, 1, 4, 0, 2};
  RngStream rng(31);
  for (int r = 0; r < 200; ++r) {
    AssignmentDraw draw =
        swap_round(spec, OrderedChain{perm}, rng, Mechanism::covariate_swap);
    CHECK(draw.mechanism == Mechanism::covariate_swap);
    // partner sequence must follow the permutation order exactly
    std::size_t next_pos = 1;
    for (const SwapRecord& rec : draw.trace.records) {
      CHECK(rec.j == perm[next_pos]);
      ++next_pos;
    }
  }
}

TEST_CASE("swap_round is reproducible from its stream") {
  DesignSpec spec = make_design({0.2, 0.8, 0.35, 0.65}, 2);
  RngStream a(55), b(55);
  for (int r = 0; r < 20; ++r) {
    AssignmentDraw da = swap_round(spec, RandomChain{}, a);
    AssignmentDraw db = swap_round(spec, RandomChain{}, b);
    CHECK(da.assignment == db.assignment);
    REQUIRE(da.trace.size() == db.trace.size());
    for (std::size_t t = 0; t < da.trace.size(); ++t) {
      CHECK(da.trace.records[t].i == db.trace.records[t].i);
      CHECK(da.trace.records[t].j == db.trace.records[t].j);
    }
  }
}

TEST_CASE("linear estimators keep their mean and lose variance") {
  DesignSpec spec = make_design({0.3, 0.4, 0.3, 0.6, 0.4}, 2);
  std::vector<double> weights = {1.0, 2.0, 0.5, 1.5, 3.0};
  const double offset = 0.7;
  double expect = offset;
  for (std::size_t i = 0; i < spec.size(); ++i) expect += weights[i] * spec.p0[i];

  RngStream rng(808);
  const int draws = 100000;
  std::vector<double> swap_vals(draws), bern_vals(draws);
  for (int r = 0; r < draws; ++r) {
    AssignmentDraw draw = swap_round(spec, SequentialChain{}, rng);
    double v = offset;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      v += weights[i] * draw.assignment[i];
    }
    swap_vals[static_cast<std::size_t>(r)] = v;
    double b = offset;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      b += weights[i] * (rng.bernoulli(spec.p0[i]) ? 1.0 : 0.0);
    }
    bern_vals[static_cast<std::size_t>(r)] = b;
  }
  double swap_mean = mean(swap_vals);
  double se = std::sqrt(sample_variance(swap_vals) / draws);
  CHECK(std::abs(swap_mean - expect) < 3.0 * se);

  double var_swap = sample_variance(swap_vals);
  double var_bern = sample_variance(bern_vals);
  double var_se = std::hypot(test_support::variance_se(swap_vals),
                             test_support::variance_se(bern_vals));
  CHECK(var_swap < var_bern + 3.0 * var_se);
  // every unit carries weight, so the reduction must be strict
  CHECK(var_swap < var_bern - 3.0 * var_se);
}

TEST_CASE("swap_round propagates validation failures") {
  DesignSpec bad;
  bad.p0 = {0.4, 0.4};
  bad.budget = 2;
  RngStream rng(1);
  CHECK_THROWS_AS(swap_round(bad, SequentialChain{}, rng), BudgetMismatch);
}
