#ifndef MTCLUST_LABELS_HPP
#define MTCLUST_LABELS_HPP

#include "mtclust/types.hpp"

namespace mtclust {

/// Code vector for `class_index` among C classes: 1 at the class, -1/(C-1)
/// elsewhere.
Vector encode_label(int class_index, int num_classes);

/// Inverse of encode_label; `row` must be within 1e-9 of a legal code.
int decode_row(const Eigen::Ref<const Vector>& row);

/// True iff `row` is within `tol` of some legal code vector.
bool is_legal_code_row(const Eigen::Ref<const Vector>& row,
                       double tol = 1e-9);

/// Materialize the indicator matrix of a per-row class assignment.
Matrix assignment_to_indicator(const std::vector<int>& assignment,
                               int num_classes);

/// Per-row class assignment of a legal indicator matrix.
std::vector<int> indicator_to_assignment(const Matrix& indicator);

}  // namespace mtclust

#endif  // MTCLUST_LABELS_HPP
