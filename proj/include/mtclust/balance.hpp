#ifndef MTCLUST_BALANCE_HPP
#define MTCLUST_BALANCE_HPP

#include <vector>

#include "mtclust/types.hpp"

namespace mtclust {

/// Integer per-class count bounds for one task, derived from the balance
/// slack vector.
struct CountBounds {
  std::vector<int> lower;
  std::vector<int> upper;

  int num_classes() const { return static_cast<int>(lower.size()); }
};

/// Per-task, per-class balance slack l_{i,c} in [0,1].
class BalanceSpec {
 public:
  BalanceSpec() = default;

  /// Full m x C slack matrix.
  explicit BalanceSpec(Matrix l);

  /// Single scalar slack applied to every (task, class).
  static BalanceSpec uniform(double l, int num_tasks, int num_classes);

  const Matrix& slack() const { return l_; }
  int num_tasks() const { return static_cast<int>(l_.rows()); }
  int num_classes() const { return static_cast<int>(l_.cols()); }

  /// Count bounds for task i with n_i rows; throws BalanceInfeasibleError
  /// when the bounds admit no assignment.
  CountBounds bounds_for(int task, int n_i) const;

 private:
  Matrix l_;
};

/// Count bounds from one task's slack vector (the column-sum constraints
/// translated to class counts).
CountBounds derive_count_bounds(int n_i, int num_classes,
                                const std::vector<double>& l);

/// True iff every row of Y is a legal code and every class count lies
/// within `bounds`.
bool is_member(const IndicatorMatrix& y, const CountBounds& bounds);

/// Smallest uniform slack making (n_i, C) feasible; used in error messages.
double minimal_feasible_slack(int n_i, int num_classes);

}  // namespace mtclust

#endif  // MTCLUST_BALANCE_HPP
