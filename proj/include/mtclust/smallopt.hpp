#ifndef MTCLUST_SMALLOPT_HPP
#define MTCLUST_SMALLOPT_HPP

#include <optional>

#include "mtclust/types.hpp"

namespace mtclust {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  double value = 0.0;
};

/// Dense two-phase primal simplex with Bland's rule:
///   min c'x  s.t.  A_eq x = b_eq,  A_le x <= b_le,  x >= 0.
/// Either constraint block may be empty (0 rows).
LpResult solve_lp(const Matrix& a_eq, const Vector& b_eq, const Matrix& a_le,
                  const Vector& b_le, const Vector& c);

/// Euclidean projection by a primal active-set method:
///   min 0.5 |x - r|^2  s.t.  A_eq x = b_eq,  A_in x <= b_in,
/// starting from the feasible point x0. Returns nullopt if the iteration
/// cap is hit before convergence.
std::optional<Vector> project_active_set(const Vector& r, const Matrix& a_eq,
                                         const Vector& b_eq,
                                         const Matrix& a_in,
                                         const Vector& b_in, const Vector& x0,
                                         int max_iter = 300);

}  // namespace mtclust

#endif  // MTCLUST_SMALLOPT_HPP
