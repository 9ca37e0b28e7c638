#include "mtclust/labeling.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mtclust/labels.hpp"

namespace mtclust {

namespace {

// Assigning row j to class k contributes (C/(C-1)) alpha(j,k) minus a
// per-row constant, so the argmin is the bounded assignment under the raw
// alpha columns.
std::vector<int> violated_assignment(const Matrix& alpha,
                                     const CountBounds& bounds,
                                     bool use_oracle) {
  if (alpha.cols() != bounds.num_classes())
    throw ArgumentError("most_violated: alpha/bounds class count mismatch");
  return use_oracle ? bounded_assignment_oracle(alpha, bounds)
                    : solve_bounded_assignment(alpha, bounds);
}

}  // namespace

IndicatorMatrix most_violated(const Matrix& alpha, const CountBounds& bounds,
                              int task_id) {
  IndicatorMatrix y;
  y.task_id = task_id;
  y.values = assignment_to_indicator(
      violated_assignment(alpha, bounds, false),
      static_cast<int>(alpha.cols()));
  return y;
}

IndicatorMatrix most_violated_oracle(const Matrix& alpha,
                                     const CountBounds& bounds, int task_id) {
  IndicatorMatrix y;
  y.task_id = task_id;
  y.values = assignment_to_indicator(
      violated_assignment(alpha, bounds, true),
      static_cast<int>(alpha.cols()));
  return y;
}

double constraint_value(const Matrix& alpha, const IndicatorMatrix& y) {
  if (alpha.rows() != y.values.rows() || alpha.cols() != y.values.cols())
    throw ArgumentError("constraint_value: shape mismatch");
  return alpha.cwiseProduct(y.values).sum();
}

bool ConstraintPool::contains(const IndicatorMatrix& y) const {
  for (const auto& c : constraints_) {
    if (c.values.rows() == y.values.rows() &&
        (c.values - y.values).cwiseAbs().maxCoeff() == 0.0)
      return true;
  }
  return false;
}

bool ConstraintPool::add(const IndicatorMatrix& y) {
  if (!is_member(y, bounds_))
    throw ArgumentError("ConstraintPool::add: constraint violates membership");
  if (contains(y)) return false;
  constraints_.push_back(y);
  mu_.push_back(0.0);
  return true;
}

void ConstraintPool::reset_weights_uniform() {
  if (constraints_.empty())
    throw StateError("ConstraintPool: empty pool");
  std::fill(mu_.begin(), mu_.end(),
            1.0 / static_cast<double>(mu_.size()));
}

void ConstraintPool::set_weights(const std::vector<double>& mu) {
  if (mu.size() != constraints_.size())
    throw ArgumentError("ConstraintPool::set_weights: length mismatch");
  double sum = 0.0;
  for (double w : mu) {
    if (w < -1e-9 || w > 1.0 + 1e-9)
      throw ArgumentError("ConstraintPool::set_weights: weight outside [0,1]");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ArgumentError("ConstraintPool::set_weights: weights must sum to 1");
  mu_ = mu;
}

FractionalLabelMatrix ConstraintPool::fractional_labels() const {
  if (constraints_.empty())
    throw StateError("ConstraintPool: fractional_labels on empty pool");
  FractionalLabelMatrix f;
  f.task_id = task_id_;
  f.values = Matrix::Zero(constraints_[0].values.rows(),
                          constraints_[0].values.cols());
  for (std::size_t k = 0; k < constraints_.size(); ++k)
    f.values += mu_[k] * constraints_[k].values;
  return f;
}

}  // namespace mtclust
