#include "swapdesign/rounding.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace swapdesign {

namespace {

// Live values within this distance of 0/1 count as integral during the walk.
constexpr double kFracTol = 1e-12;
// The last carrier must land this close to an integer; anything else means
// the design's mass accounting was broken.
constexpr double kResidueTol = 1e-6;

bool is_fractional(double p) { return p > kFracTol && p < 1.0 - kFracTol; }

}  // namespace

SwapStep single_swap(double p_i, double p_j, RngStream& rng) {
  if (!(p_i > 0.0 && p_i < 1.0 && p_j > 0.0 && p_j < 1.0)) {
    throw OutOfRange("single_swap requires probabilities strictly in (0,1)");
  }
  SwapStep step;
  double sum = p_i + p_j;
  if (sum <= 1.0) {
    step.swap_case = SwapCase::sum_le_1;
    if (rng.uniform() < p_i / sum) {
      step.branch = SwapBranch::i_won;
      step.new_i = sum;
      step.new_j = 0.0;
    } else {
      step.branch = SwapBranch::j_won;
      step.new_i = 0.0;
      step.new_j = sum;
    }
  } else {
    step.swap_case = SwapCase::sum_gt_1;
    // P(round p_i up) = (1-p_j)/(2-sum): the unique choice with
    // E[new_i] = p_i and E[new_j] = p_j.
    if (rng.uniform() < (1.0 - p_j) / (2.0 - sum)) {
      step.branch = SwapBranch::i_won;
      step.new_i = 1.0;
      step.new_j = sum - 1.0;
    } else {
      step.branch = SwapBranch::j_won;
      step.new_i = sum - 1.0;
      step.new_j = 1.0;
    }
  }
  return step;
}

ChainPairing::ChainPairing(std::span<const std::uint8_t> fractional,
                           const PairingStrategy& strategy, RngStream* rng) {
  const int n = static_cast<int>(fractional.size());
  auto push_if_fractional = [&](int idx) {
    if (fractional[static_cast<std::size_t>(idx)]) order_.push_back(idx);
  };
  if (std::holds_alternative<SequentialChain>(strategy)) {
    for (int i = 0; i < n; ++i) push_if_fractional(i);
  } else if (std::holds_alternative<RandomChain>(strategy)) {
    if (rng == nullptr) {
      throw InvalidParams("RandomChain needs a random stream");
    }
    for (int i : rng->permutation(n)) push_if_fractional(i);
  } else {
    const auto& ordered = std::get<OrderedChain>(strategy);
    if (static_cast<int>(ordered.permutation.size()) != n) {
      throw DimensionMismatch("OrderedChain permutation size != n");
    }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int i : ordered.permutation) {
      if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)]) {
        throw InvalidParams("OrderedChain permutation is not a bijection");
      }
      seen[static_cast<std::size_t>(i)] = true;
      push_if_fractional(i);
    }
  }
}

bool ChainPairing::has_next() const {
  if (carrier_ >= 0) return pos_ < order_.size();
  return pos_ + 1 < order_.size();
}

std::pair<int, int> ChainPairing::next() {
  if (!has_next()) throw std::logic_error("ChainPairing exhausted");
  if (carrier_ < 0) carrier_ = order_[pos_++];
  int partner = order_[pos_++];
  return {carrier_, partner};
}

void ChainPairing::resolve(std::optional<int> still_fractional) {
  carrier_ = still_fractional.value_or(-1);
}

void swap_round(const DesignSpec& spec, const PairingStrategy& strategy,
                RngStream& rng, AssignmentDraw& out, Mechanism mechanism) {
  const std::size_t n = spec.p0.size();
  std::vector<double> live(spec.p0.begin(), spec.p0.end());
  validate_probabilities(std::span<double>(live), spec.budget);

  out.mechanism = mechanism;
  out.effective_p.reset();
  out.tries = 1;
  out.trace.clear();
  out.assignment.assign(n, 0);

  std::vector<std::uint8_t> fractional(n);
  for (std::size_t i = 0; i < n; ++i) fractional[i] = is_fractional(live[i]) ? 1 : 0;

  ChainPairing chain(std::span<const std::uint8_t>(fractional), strategy, &rng);
  int step_count = 0;
  while (chain.has_next()) {
    auto [i, j] = chain.next();
    const auto iu = static_cast<std::size_t>(i);
    const auto ju = static_cast<std::size_t>(j);
    SwapStep step = single_swap(live[iu], live[ju], rng);
    out.trace.records.push_back({step_count++, i, j, live[iu], live[ju],
                                 step.swap_case, step.branch});
    live[iu] = step.new_i;
    live[ju] = step.new_j;
    if (is_fractional(live[iu])) {
      chain.resolve(i);
    } else if (is_fractional(live[ju])) {
      chain.resolve(j);
    } else {
      chain.resolve(std::nullopt);
    }
  }

  long treated = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double p = live[i];
    if (is_fractional(p)) {
      // Only floating-point residue on the final carrier can land here.
      if (std::abs(p - std::round(p)) > kResidueTol) {
        throw std::logic_error("swap rounding left a fractional residue");
      }
      p = std::round(p);
    }
    out.assignment[i] = p > 0.5 ? 1 : 0;
    treated += out.assignment[i];
  }
  if (treated != spec.budget) {
    throw std::logic_error("swap rounding violated the budget");
  }
}

AssignmentDraw swap_round(const DesignSpec& spec, const PairingStrategy& strategy,
                          RngStream& rng, Mechanism mechanism) {
  AssignmentDraw out;
  swap_round(spec, strategy, rng, out, mechanism);
  return out;
}

}  // namespace swapdesign
