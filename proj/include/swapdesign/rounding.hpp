#pragma once

#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "swapdesign/core.hpp"
#include "swapdesign/rng.hpp"

namespace swapdesign {

/// Pair the chain carrier with the next fractional index, in index order.
struct SequentialChain {};

/// Same walk over a fresh uniform permutation drawn from the rounding stream.
struct RandomChain {};

/// Same walk over an explicit visiting order (e.g. a covariate ordering).
struct OrderedChain {
  std::vector<int> permutation;
};

using PairingStrategy = std::variant<SequentialChain, RandomChain, OrderedChain>;

/// Outcome of one pairwise swap.
struct SwapStep {
  double new_i = 0.0;
  double new_j = 0.0;
  SwapCase swap_case = SwapCase::sum_le_1;
  SwapBranch branch = SwapBranch::i_won;
};

/// Resolves two fractional probabilities into at least one integral value.
///
/// sum <= 1: with probability p_i/(p_i+p_j) the pair becomes (p_i+p_j, 0),
/// otherwise (0, p_i+p_j). sum > 1: with probability (1-p_j)/(2-p_i-p_j) the
/// pair becomes (1, p_i+p_j-1), otherwise (p_i+p_j-1, 1). Either way each
/// coordinate keeps its expectation, which is the martingale step the
/// estimator theory rests on.
SwapStep single_swap(double p_i, double p_j, RngStream& rng);

/// Walks fractional indices in strategy order, always pairing the current
/// fractional carrier with the next fractional index. The caller reports
/// after each swap which index (if any) stayed fractional.
class ChainPairing {
 public:
  /// fractional[k] must be nonzero iff unit k is strictly between 0 and 1.
  /// For RandomChain the permutation is drawn from rng (required non-null).
  ChainPairing(std::span<const std::uint8_t> fractional,
               const PairingStrategy& strategy, RngStream* rng);

  bool has_next() const;

  /// Next pair (carrier, partner). Requires has_next().
  std::pair<int, int> next();

  /// Report which of the last pair is still fractional; nullopt if neither.
  void resolve(std::optional<int> still_fractional);

  std::span<const int> visit_order() const { return order_; }

 private:
  std::vector<int> order_;  // fractional indices in visiting order
  std::size_t pos_ = 0;
  int carrier_ = -1;
};

/// Draws one budget-exact assignment from a validated design by iterated
/// pairwise swaps. Marginals are preserved: Pr(A_i = 1) = p0_i. The trace
/// lists every executed swap in order; at most n-1 swaps ever run.
AssignmentDraw swap_round(const DesignSpec& spec, const PairingStrategy& strategy,
                          RngStream& rng, Mechanism mechanism = Mechanism::swap);

/// Buffer-reusing variant for tight Monte Carlo loops.
void swap_round(const DesignSpec& spec, const PairingStrategy& strategy,
                RngStream& rng, AssignmentDraw& out,
                Mechanism mechanism = Mechanism::swap);

}  // namespace swapdesign
