#ifndef MTCLUST_LABELING_HPP
#define MTCLUST_LABELING_HPP

#include <vector>

#include "mtclust/balance.hpp"
#include "mtclust/transportation.hpp"
#include "mtclust/types.hpp"

namespace mtclust {

/// Most violated constraint for one task: the legal indicator matrix
/// minimizing sum_{c,j} alpha(j,c) y(j,c) under the count bounds. `alpha`
/// is the n_i x C dual block of the task. Exact; ties resolved to the
/// lexicographically smallest assignment.
IndicatorMatrix most_violated(const Matrix& alpha, const CountBounds& bounds,
                              int task_id = 0);

/// Enumeration reference for most_violated (n_i <= 10, C <= 4).
IndicatorMatrix most_violated_oracle(const Matrix& alpha,
                                     const CountBounds& bounds,
                                     int task_id = 0);

/// Value sum_{c,j} alpha(j,c) y(j,c) of a constraint under the duals.
double constraint_value(const Matrix& alpha, const IndicatorMatrix& y);

/// Ordered constraint set of one task with its simplex weight vector.
class ConstraintPool {
 public:
  ConstraintPool(int task_id, CountBounds bounds)
      : task_id_(task_id), bounds_(std::move(bounds)) {}

  /// Appends `y` unless an identical matrix is already present; a new
  /// entry starts with weight 0. Returns whether it was novel.
  bool add(const IndicatorMatrix& y);

  bool contains(const IndicatorMatrix& y) const;

  /// Uniform weights over the pool (used at initialization).
  void reset_weights_uniform();
  void set_weights(const std::vector<double>& mu);

  /// Fractional label matrix sum_k mu_k Y_k; throws StateError on an
  /// empty pool.
  FractionalLabelMatrix fractional_labels() const;

  int size() const { return static_cast<int>(constraints_.size()); }
  int task_id() const { return task_id_; }
  const CountBounds& bounds() const { return bounds_; }
  const IndicatorMatrix& constraint(int k) const {
    return constraints_[static_cast<std::size_t>(k)];
  }
  const std::vector<double>& weights() const { return mu_; }

 private:
  int task_id_;
  CountBounds bounds_;
  std::vector<IndicatorMatrix> constraints_;
  std::vector<double> mu_;
};

}  // namespace mtclust

#endif  // MTCLUST_LABELING_HPP
