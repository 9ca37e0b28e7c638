#ifndef MTCLUST_TRANSPORTATION_HPP
#define MTCLUST_TRANSPORTATION_HPP

#include <vector>

#include "mtclust/balance.hpp"
#include "mtclust/types.hpp"

namespace mtclust {

/// Exact solver for the capacity-bounded assignment problem
///
///   min  sum_j cost(j, k_j)
///   s.t. lower_c <= |{j : k_j = c}| <= upper_c  for every class c,
///
/// by successive shortest augmenting paths. Among optimal assignments the
/// lexicographically smallest one (row 0 takes the lowest class consistent
/// with optimality, then row 1, ...) is returned; ties are resolved over
/// the zero-reduced-cost residual structure, which reproduces the
/// enumeration oracle whenever tied costs are exactly representable.
std::vector<int> solve_bounded_assignment(const Matrix& cost,
                                          const CountBounds& bounds);

/// Brute-force reference: enumerates all assignments in lexicographic
/// order and keeps the first minimizer. Guarded to rows <= 10, C <= 4.
std::vector<int> bounded_assignment_oracle(const Matrix& cost,
                                           const CountBounds& bounds);

/// Objective of an assignment under `cost`, summed in row order.
double assignment_cost(const Matrix& cost, const std::vector<int>& assignment);

}  // namespace mtclust

#endif  // MTCLUST_TRANSPORTATION_HPP
