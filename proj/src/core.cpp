#include "swapdesign/core.hpp"

#include <cmath>
#include <numeric>

namespace swapdesign {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionMismatch("matrix data size does not match rows*cols");
  }
}

std::string to_string(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::swap: return "swap";
    case Mechanism::covariate_swap: return "covariate_swap";
    case Mechanism::bernoulli: return "bernoulli";
    case Mechanism::rejection_budget: return "rejection_budget";
    case Mechanism::srs: return "srs";
    case Mechanism::rerandomized: return "rerandomized";
  }
  return "unknown";
}

Mechanism mechanism_from_string(const std::string& name) {
  if (name == "swap") return Mechanism::swap;
  if (name == "covariate_swap") return Mechanism::covariate_swap;
  if (name == "bernoulli") return Mechanism::bernoulli;
  if (name == "rejection_budget") return Mechanism::rejection_budget;
  if (name == "srs") return Mechanism::srs;
  if (name == "rerandomized") return Mechanism::rerandomized;
  throw ValidationError("unknown mechanism: " + name);
}

long AssignmentDraw::treated_count() const {
  return std::accumulate(assignment.begin(), assignment.end(), 0L);
}

bool OutcomeTable::nonnegative() const {
  for (double v : y0)
    if (v < 0.0) return false;
  for (double v : y1)
    if (v < 0.0) return false;
  return true;
}

std::vector<double> OutcomeTable::observed(
    std::span<const std::uint8_t> assignment) const {
  if (assignment.size() != y0.size() || y0.size() != y1.size()) {
    throw DimensionMismatch("assignment/outcome length mismatch");
  }
  std::vector<double> y(assignment.size());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    y[i] = assignment[i] ? y1[i] : y0[i];
  }
  return y;
}

void validate_probabilities(std::span<double> p0, long budget) {
  if (p0.empty()) throw DimensionMismatch("design has no units");
  if (budget < 0) throw BudgetMismatch("budget must be nonnegative");
  double sum = 0.0;
  for (double& p : p0) {
    if (!std::isfinite(p)) throw OutOfRange("non-finite probability entry");
    if (p < -kSnapTol || p > 1.0 + kSnapTol) {
      throw OutOfRange("probability entry outside [0, 1]");
    }
    if (std::abs(p) <= kSnapTol) p = 0.0;
    if (std::abs(p - 1.0) <= kSnapTol) p = 1.0;
    sum += p;
  }
  if (std::abs(sum - static_cast<double>(budget)) > kBudgetTol) {
    throw BudgetMismatch("sum(p0) = " + std::to_string(sum) +
                         " does not match budget " + std::to_string(budget));
  }
}

DesignSpec validate_design(const DesignSpec& spec) {
  DesignSpec out = spec;
  validate_probabilities(std::span<double>(out.p0), out.budget);
  if (out.covariates && out.covariates->rows() != out.p0.size()) {
    throw DimensionMismatch("covariate rows != number of units");
  }
  if (out.unit_ids && out.unit_ids->size() != out.p0.size()) {
    throw DimensionMismatch("unit id count != number of units");
  }
  return out;
}

double pair_covariance(double p_i, double p_j) {
  if (!(p_i > 0.0 && p_i < 1.0 && p_j > 0.0 && p_j < 1.0)) {
    throw OutOfRange("pair_covariance requires probabilities strictly in (0,1)");
  }
  if (p_i + p_j <= 1.0) return -p_i * p_j;
  return -(1.0 - p_i) * (1.0 - p_j);
}

double sate(const OutcomeTable& outcomes) {
  if (outcomes.y0.size() != outcomes.y1.size()) {
    throw DimensionMismatch("y0/y1 length mismatch");
  }
  if (outcomes.y0.empty()) throw DimensionMismatch("empty outcome table");
  double acc = 0.0;
  for (std::size_t i = 0; i < outcomes.y0.size(); ++i) {
    acc += outcomes.y1[i] - outcomes.y0[i];
  }
  return acc / static_cast<double>(outcomes.y0.size());
}

}  // namespace swapdesign
