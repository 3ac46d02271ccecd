#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swapdesign/errors.hpp"

namespace swapdesign {

/// Entries this close to 0 or 1 are snapped exactly during validation.
inline constexpr double kSnapTol = 1e-12;
/// |sum(p0) - budget| must stay below this for a design to be accepted.
inline constexpr double kBudgetTol = 1e-9;

/// Dense row-major matrix, just big enough for covariate tables.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }

  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Target design: per-unit treatment probabilities summing to an integer
/// budget, plus optional covariates used by ordering and re-randomization.
struct DesignSpec {
  std::vector<double> p0;
  long budget = 0;
  std::optional<Matrix> covariates;
  std::optional<std::vector<std::string>> unit_ids;

  std::size_t size() const { return p0.size(); }
};

enum class SwapCase : std::uint8_t { sum_le_1, sum_gt_1 };
enum class SwapBranch : std::uint8_t { i_won, j_won };

/// One executed swap: indices, live probabilities just before the swap, and
/// which branch the coin chose.
struct SwapRecord {
  int step = 0;
  int i = 0;
  int j = 0;
  double pi_before = 0.0;
  double pj_before = 0.0;
  SwapCase swap_case = SwapCase::sum_le_1;
  SwapBranch branch = SwapBranch::i_won;
};

/// Ordered list of executed swaps. The (i, j) pairs are exactly the set the
/// variance estimator's pairwise correction sums over.
struct SwapTrace {
  std::vector<SwapRecord> records;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
  void clear() { records.clear(); }
};

enum class Mechanism : std::uint8_t {
  swap,
  covariate_swap,
  bernoulli,
  rejection_budget,
  srs,
  rerandomized,
};

std::string to_string(Mechanism mechanism);
Mechanism mechanism_from_string(const std::string& name);

/// A realized binary assignment together with everything inference needs:
/// the swap trace (budget-exact rounding mechanisms), the effective
/// propensities (re-randomization), and the tries consumed (rejection).
struct AssignmentDraw {
  std::vector<std::uint8_t> assignment;
  SwapTrace trace;
  Mechanism mechanism = Mechanism::swap;
  std::optional<std::vector<double>> effective_p;
  long tries = 1;

  long treated_count() const;
};

/// Potential outcomes for every unit; the generator/oracle side of a study.
struct OutcomeTable {
  std::vector<double> y0;
  std::vector<double> y1;

  std::size_t size() const { return y0.size(); }
  /// True iff min(y0, y1) >= 0; several variance-reduction guarantees assume it.
  bool nonnegative() const;
  /// Observed outcomes under an assignment: y[i] = a[i] ? y1[i] : y0[i].
  std::vector<double> observed(std::span<const std::uint8_t> assignment) const;
};

/// Point estimate with variance, normal-approximation interval and metadata.
struct EstimateReport {
  double tau_hat = 0.0;
  double sigma_hat_sq = 0.0;
  bool variance_clamped = false;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double alpha = 0.05;
  std::size_t n = 0;
  std::string method;
};

/// Validates and canonicalizes a design: snaps entries within kSnapTol of
/// 0/1, rejects out-of-range probabilities, checks sum(p0) == budget within
/// kBudgetTol and that covariate rows match. Idempotent.
DesignSpec validate_design(const DesignSpec& spec);

/// In-place validation of the probability vector only (no covariate checks,
/// no copies); used by the rounding hot path.
void validate_probabilities(std::span<double> p0, long budget);

/// Covariance cov(A_i, A_j) induced by a single swap of two fractional
/// probabilities: -p_i*p_j when p_i+p_j <= 1, else -(1-p_i)(1-p_j).
/// Always negative; continuous across p_i+p_j = 1.
double pair_covariance(double p_i, double p_j);

/// Sample average treatment effect: mean of y1 - y0.
double sate(const OutcomeTable& outcomes);

}  // namespace swapdesign
