#include "mtclust/labels.hpp"

#include <cmath>
#include <string>

namespace mtclust {

Vector encode_label(int class_index, int num_classes) {
  if (num_classes < 2) throw ArgumentError("encode_label: C must be >= 2");
  if (class_index < 0 || class_index >= num_classes) {
    throw ArgumentError("encode_label: class index " +
                        std::to_string(class_index) + " out of range [0," +
                        std::to_string(num_classes) + ")");
  }
  Vector code = Vector::Constant(num_classes,
                                 -1.0 / static_cast<double>(num_classes - 1));
  code(class_index) = 1.0;
  return code;
}

namespace {

int near_one_index(const Eigen::Ref<const Vector>& row, double tol) {
  const double off = -1.0 / static_cast<double>(row.size() - 1);
  int hit = -1;
  for (Eigen::Index c = 0; c < row.size(); ++c) {
    if (std::abs(row(c) - 1.0) <= tol) {
      if (hit >= 0) return -2;  // multiple entries near 1
      hit = static_cast<int>(c);
    } else if (std::abs(row(c) - off) > tol) {
      return -1;
    }
  }
  return hit;
}

}  // namespace

bool is_legal_code_row(const Eigen::Ref<const Vector>& row, double tol) {
  return row.size() >= 2 && near_one_index(row, tol) >= 0;
}

int decode_row(const Eigen::Ref<const Vector>& row) {
  if (row.size() < 2) throw ArgumentError("decode_row: row too short");
  const int hit = near_one_index(row, 1e-9);
  if (hit == -2)
    throw MalformedIndicatorError("decode_row: multiple entries near 1");
  if (hit < 0)
    throw MalformedIndicatorError("decode_row: row is not a legal code");
  return hit;
}

Matrix assignment_to_indicator(const std::vector<int>& assignment,
                               int num_classes) {
  Matrix out(static_cast<Eigen::Index>(assignment.size()), num_classes);
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    out.row(static_cast<Eigen::Index>(j)) =
        encode_label(assignment[j], num_classes).transpose();
  }
  return out;
}

std::vector<int> indicator_to_assignment(const Matrix& indicator) {
  std::vector<int> out(static_cast<std::size_t>(indicator.rows()));
  for (Eigen::Index j = 0; j < indicator.rows(); ++j) {
    out[static_cast<std::size_t>(j)] = decode_row(indicator.row(j));
  }
  return out;
}

}  // namespace mtclust
