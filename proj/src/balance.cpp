#include "mtclust/balance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mtclust/labels.hpp"

namespace mtclust {

namespace {

// Nudged rounding so exact integer boundaries are stable in floating point.
int ceil_count(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }
int floor_count(double x) { return static_cast<int>(std::floor(x + 1e-9)); }

bool feasible(const CountBounds& b, int n_i) {
  const int lo = std::accumulate(b.lower.begin(), b.lower.end(), 0);
  const int hi = std::accumulate(b.upper.begin(), b.upper.end(), 0);
  return lo <= n_i && n_i <= hi;
}

CountBounds raw_bounds(int n_i, int num_classes,
                       const std::vector<double>& l) {
  CountBounds b;
  b.lower.resize(static_cast<std::size_t>(num_classes));
  b.upper.resize(static_cast<std::size_t>(num_classes));
  const double n = static_cast<double>(n_i);
  const double cm1 = static_cast<double>(num_classes - 1);
  for (int c = 0; c < num_classes; ++c) {
    const double lc = l[static_cast<std::size_t>(c)];
    // Column sum of class c with count n_c is (C n_c - n_i)/(C-1); the two
    // slack inequalities bound n_c by n(1-l)/C and n(1+l(C-1))/C.
    int lo = ceil_count(n * (1.0 - lc) / num_classes);
    int hi = floor_count(n * (1.0 + lc * cm1) / num_classes);
    b.lower[static_cast<std::size_t>(c)] = std::max(0, lo);
    b.upper[static_cast<std::size_t>(c)] = std::min(n_i, hi);
  }
  return b;
}

}  // namespace

CountBounds derive_count_bounds(int n_i, int num_classes,
                                const std::vector<double>& l) {
  if (num_classes < 2) throw ArgumentError("derive_count_bounds: C < 2");
  if (n_i < num_classes)
    throw ArgumentError("derive_count_bounds: n_i < C");
  if (static_cast<int>(l.size()) != num_classes)
    throw ArgumentError("derive_count_bounds: slack vector length mismatch");
  for (double lc : l) {
    if (lc < 0.0 || lc > 1.0)
      throw ArgumentError("derive_count_bounds: slack outside [0,1]");
  }
  CountBounds b = raw_bounds(n_i, num_classes, l);
  for (int c = 0; c < num_classes; ++c) {
    if (b.lower[static_cast<std::size_t>(c)] >
        b.upper[static_cast<std::size_t>(c)]) {
      throw BalanceInfeasibleError(
          "balance bounds infeasible for class " + std::to_string(c) +
          " (n=" + std::to_string(n_i) + ", C=" +
          std::to_string(num_classes) + "); minimal feasible uniform l is " +
          std::to_string(minimal_feasible_slack(n_i, num_classes)));
    }
  }
  if (!feasible(b, n_i)) {
    throw BalanceInfeasibleError(
        "balance bounds infeasible: count bounds cannot cover n=" +
        std::to_string(n_i) + " rows over C=" + std::to_string(num_classes) +
        " classes; minimal feasible uniform l is " +
        std::to_string(minimal_feasible_slack(n_i, num_classes)));
  }
  return b;
}

double minimal_feasible_slack(int n_i, int num_classes) {
  if (n_i % num_classes == 0) return 0.0;
  // Feasibility is monotone in l; scan the breakpoints where a rounded
  // bound changes value.
  std::vector<double> candidates{0.0, 1.0};
  for (int k = 0; k <= n_i; ++k) {
    const double n = static_cast<double>(n_i);
    const double a = 1.0 - num_classes * static_cast<double>(k) / n;
    const double bb = (num_classes * static_cast<double>(k) / n - 1.0) /
                      static_cast<double>(num_classes - 1);
    if (a >= 0.0 && a <= 1.0) candidates.push_back(a);
    if (bb >= 0.0 && bb <= 1.0) candidates.push_back(bb);
  }
  std::sort(candidates.begin(), candidates.end());
  for (double l : candidates) {
    std::vector<double> lv(static_cast<std::size_t>(num_classes), l);
    CountBounds b = raw_bounds(n_i, num_classes, lv);
    bool per_class_ok = true;
    for (int c = 0; c < num_classes; ++c) {
      if (b.lower[static_cast<std::size_t>(c)] >
          b.upper[static_cast<std::size_t>(c)])
        per_class_ok = false;
    }
    if (per_class_ok && feasible(b, n_i)) return l;
  }
  return 1.0;
}

BalanceSpec::BalanceSpec(Matrix l) : l_(std::move(l)) {
  if (l_.rows() < 1 || l_.cols() < 2)
    throw ArgumentError("BalanceSpec: slack matrix must be m x C, C >= 2");
  if ((l_.array() < 0.0).any() || (l_.array() > 1.0).any())
    throw ArgumentError("BalanceSpec: slack entries must lie in [0,1]");
}

BalanceSpec BalanceSpec::uniform(double l, int num_tasks, int num_classes) {
  return BalanceSpec(Matrix::Constant(num_tasks, num_classes, l));
}

CountBounds BalanceSpec::bounds_for(int task, int n_i) const {
  if (task < 0 || task >= num_tasks())
    throw ArgumentError("BalanceSpec: task index out of range");
  std::vector<double> l(static_cast<std::size_t>(num_classes()));
  for (int c = 0; c < num_classes(); ++c)
    l[static_cast<std::size_t>(c)] = l_(task, c);
  return derive_count_bounds(n_i, num_classes(), l);
}

bool is_member(const IndicatorMatrix& y, const CountBounds& bounds) {
  const int C = bounds.num_classes();
  if (y.values.cols() != C) return false;
  std::vector<int> counts(static_cast<std::size_t>(C), 0);
  for (Eigen::Index j = 0; j < y.values.rows(); ++j) {
    if (!is_legal_code_row(y.values.row(j))) return false;
    ++counts[static_cast<std::size_t>(decode_row(y.values.row(j)))];
  }
  for (int c = 0; c < C; ++c) {
    if (counts[static_cast<std::size_t>(c)] <
            bounds.lower[static_cast<std::size_t>(c)] ||
        counts[static_cast<std::size_t>(c)] >
            bounds.upper[static_cast<std::size_t>(c)])
      return false;
  }
  return true;
}

}  // namespace mtclust
