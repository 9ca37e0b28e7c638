#include "mtclust/transportation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

namespace mtclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_bounds(const Matrix& cost, const CountBounds& bounds) {
  const int n = static_cast<int>(cost.rows());
  const int C = static_cast<int>(cost.cols());
  if (C < 1 || n < 1) throw ArgumentError("bounded assignment: empty input");
  if (bounds.num_classes() != C)
    throw ArgumentError("bounded assignment: bounds/class count mismatch");
  int lo = 0, hi = 0;
  for (int c = 0; c < C; ++c) {
    const int l = bounds.lower[static_cast<std::size_t>(c)];
    const int u = bounds.upper[static_cast<std::size_t>(c)];
    if (l < 0 || u < l)
      throw BalanceInfeasibleError(
          "bounded assignment: bad bounds for class " + std::to_string(c));
    lo += l;
    hi += std::min(u, n);
  }
  if (lo > n || hi < n)
    throw BalanceInfeasibleError("bounded assignment: bounds cannot cover " +
                                 std::to_string(n) + " rows");
  if (!cost.allFinite())
    throw ArgumentError("bounded assignment: non-finite cost");
}

// Min-cost flow over the implicit network: rows (unit supply) -> classes ->
// sink, where class c absorbs its mandatory lower_c units itself and passes
// at most upper_c - lower_c on to the sink. Successive shortest paths with
// potentials; the state is the assignment vector plus per-class counts, and
// residual arcs are derived from it on the fly.
class BoundedAssignment {
 public:
  BoundedAssignment(const Matrix& cost, const CountBounds& bounds)
      : n_(static_cast<int>(cost.rows())),
        C_(static_cast<int>(cost.cols())),
        lo_(bounds.lower),
        up_(bounds.upper),
        cost_(cost),
        assign_(static_cast<std::size_t>(n_), -1),
        locked_(static_cast<std::size_t>(C_), 0),
        count_(static_cast<std::size_t>(C_), 0),
        pi_(static_cast<std::size_t>(num_nodes()), 0.0) {
    for (int c = 0; c < C_; ++c)
      up_[static_cast<std::size_t>(c)] =
          std::min(up_[static_cast<std::size_t>(c)], n_);
    // Per-row shift keeps arc costs non-negative; every feasible assignment
    // shifts by the same total, so the argmin is unchanged.
    shift_.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j)
      shift_[static_cast<std::size_t>(j)] = cost_.row(j).minCoeff();
  }

  std::vector<int> run() {
    for (int c = 0; c < C_; ++c) {
      for (int t = 0; t < lo_[static_cast<std::size_t>(c)]; ++t) {
        augment(class_node(c));
        ++locked_[static_cast<std::size_t>(c)];
      }
    }
    const int assigned = std::accumulate(lo_.begin(), lo_.end(), 0);
    for (int t = assigned; t < n_; ++t) augment(sink_node());
    refine();
    return assign_;
  }

 private:
  int num_nodes() const { return n_ + C_ + 1; }
  int class_node(int c) const { return n_ + c; }
  int sink_node() const { return n_ + C_; }

  double arc_cost(int row, int c) const {
    return cost_(row, c) - shift_[static_cast<std::size_t>(row)];
  }
  double rc_row_class(int row, int c) const {
    return arc_cost(row, c) + pi_[static_cast<std::size_t>(row)] -
           pi_[static_cast<std::size_t>(class_node(c))];
  }
  double rc_class_sink(int c) const {
    return pi_[static_cast<std::size_t>(class_node(c))] -
           pi_[static_cast<std::size_t>(sink_node())];
  }

  // Residual capacities of the two sink-side arc directions.
  bool can_forward_sink(int c) const {
    return count_[static_cast<std::size_t>(c)] -
               locked_[static_cast<std::size_t>(c)] <
           up_[static_cast<std::size_t>(c)] -
               lo_[static_cast<std::size_t>(c)];
  }
  bool can_reverse_sink(int c) const {
    return count_[static_cast<std::size_t>(c)] >
           locked_[static_cast<std::size_t>(c)];
  }

  void set_assignment(int row, int c) {
    const int old = assign_[static_cast<std::size_t>(row)];
    if (old >= 0) --count_[static_cast<std::size_t>(old)];
    assign_[static_cast<std::size_t>(row)] = c;
    ++count_[static_cast<std::size_t>(c)];
  }

  // Multi-source Dijkstra (sources: unassigned rows) to `target`, then one
  // unit of flow along the shortest path; distances fold into potentials.
  void augment(int target) {
    const int V = num_nodes();
    std::vector<double> dist(static_cast<std::size_t>(V), kInf);
    std::vector<int> prev(static_cast<std::size_t>(V), -1);
    std::vector<int> prev_row(static_cast<std::size_t>(V), -1);
    std::vector<char> done(static_cast<std::size_t>(V), 0);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;

    for (int j = 0; j < n_; ++j) {
      if (assign_[static_cast<std::size_t>(j)] < 0) {
        dist[static_cast<std::size_t>(j)] = 0.0;
        pq.emplace(0.0, j);
      }
    }
    while (!pq.empty()) {
      const auto [d, u] = pq.top();
      pq.pop();
      if (done[static_cast<std::size_t>(u)]) continue;
      done[static_cast<std::size_t>(u)] = 1;
      if (u == target) break;

      auto push = [&](int v, double nd, int row) {
        if (nd < dist[static_cast<std::size_t>(v)]) {
          dist[static_cast<std::size_t>(v)] = nd;
          prev[static_cast<std::size_t>(v)] = u;
          prev_row[static_cast<std::size_t>(v)] = row;
          pq.emplace(nd, v);
        }
      };
      if (u < n_) {
        const int a = assign_[static_cast<std::size_t>(u)];
        for (int c = 0; c < C_; ++c) {
          if (c == a) continue;
          push(class_node(c), d + rc_row_class(u, c), u);
        }
      } else if (u < n_ + C_) {
        const int c = u - n_;
        if (can_forward_sink(c)) push(sink_node(), d + rc_class_sink(c), -1);
        for (int j = 0; j < n_; ++j) {
          if (assign_[static_cast<std::size_t>(j)] == c)
            push(j, d - rc_row_class(j, c), j);
        }
      } else {
        for (int c = 0; c < C_; ++c) {
          if (can_reverse_sink(c))
            push(class_node(c), d - rc_class_sink(c), -1);
        }
      }
    }
    if (dist[static_cast<std::size_t>(target)] == kInf)
      throw BalanceInfeasibleError(
          "bounded assignment: no augmenting path (infeasible bounds)");

    const double dt = dist[static_cast<std::size_t>(target)];
    for (int v = 0; v < V; ++v)
      pi_[static_cast<std::size_t>(v)] +=
          std::min(dist[static_cast<std::size_t>(v)], dt);

    // Apply row moves; class->row and sink arcs need no explicit update
    // because counts follow the assignment vector.
    int v = target;
    while (prev[static_cast<std::size_t>(v)] >= 0) {
      const int u = prev[static_cast<std::size_t>(v)];
      const int moved = prev_row[static_cast<std::size_t>(v)];
      if (v >= n_ && v < n_ + C_ && moved >= 0) set_assignment(moved, v - n_);
      v = u;
    }
  }

  // Lexicographic canonicalization over the optimal face: row by row, take
  // the lowest class reachable through exactly-zero reduced costs.
  void refine() {
    std::vector<char> fixed(static_cast<std::size_t>(n_), 0);
    for (int j = 0; j < n_; ++j) {
      const int a = assign_[static_cast<std::size_t>(j)];
      // A saturated arc with strictly negative reduced cost is forced: any
      // departure pays back its margin.
      if (rc_row_class(j, a) != 0.0) {
        fixed[static_cast<std::size_t>(j)] = 1;
        continue;
      }
      for (int k = 0; k < a; ++k) {
        if (rc_row_class(j, k) != 0.0) continue;
        if (zero_rc_swap(j, k, a, fixed)) break;
      }
      fixed[static_cast<std::size_t>(j)] = 1;
    }
  }

  // Re-route one unit class k -> class a along zero-reduced-cost residual
  // arcs with row j forced onto class k; applies the move on success.
  bool zero_rc_swap(int j, int k, int a, const std::vector<char>& fixed) {
    const int V = num_nodes();
    std::vector<int> prev(static_cast<std::size_t>(V), -2);
    std::vector<int> prev_row(static_cast<std::size_t>(V), -1);
    std::vector<int> queue;
    const int src = class_node(k);
    const int dst = class_node(a);
    prev[static_cast<std::size_t>(src)] = -1;
    queue.push_back(src);
    for (std::size_t qi = 0;
         qi < queue.size() && prev[static_cast<std::size_t>(dst)] == -2;
         ++qi) {
      const int u = queue[qi];
      auto visit = [&](int v, int row) {
        if (prev[static_cast<std::size_t>(v)] != -2) return;
        prev[static_cast<std::size_t>(v)] = u;
        prev_row[static_cast<std::size_t>(v)] = row;
        queue.push_back(v);
      };
      if (u < n_) {
        const int cur = assign_[static_cast<std::size_t>(u)];
        for (int c = 0; c < C_; ++c) {
          if (c != cur && rc_row_class(u, c) == 0.0) visit(class_node(c), u);
        }
      } else if (u < n_ + C_) {
        const int c = u - n_;
        if (can_forward_sink(c) && rc_class_sink(c) == 0.0)
          visit(sink_node(), -1);
        for (int r = 0; r < n_; ++r) {
          if (r == j || fixed[static_cast<std::size_t>(r)]) continue;
          if (assign_[static_cast<std::size_t>(r)] == c &&
              rc_row_class(r, c) == 0.0)
            visit(r, r);
        }
      } else {
        for (int c = 0; c < C_; ++c) {
          if (can_reverse_sink(c) && rc_class_sink(c) == 0.0)
            visit(class_node(c), -1);
        }
      }
    }
    if (prev[static_cast<std::size_t>(dst)] == -2) return false;

    set_assignment(j, k);
    int v = dst;
    while (prev[static_cast<std::size_t>(v)] >= 0) {
      const int u = prev[static_cast<std::size_t>(v)];
      const int moved = prev_row[static_cast<std::size_t>(v)];
      if (v >= n_ && v < n_ + C_ && moved >= 0) set_assignment(moved, v - n_);
      v = u;
    }
    return true;
  }

  int n_, C_;
  std::vector<int> lo_, up_;
  Matrix cost_;
  std::vector<double> shift_;
  std::vector<int> assign_;
  std::vector<int> locked_;
  std::vector<int> count_;
  std::vector<double> pi_;
};

}  // namespace

std::vector<int> solve_bounded_assignment(const Matrix& cost,
                                          const CountBounds& bounds) {
  check_bounds(cost, bounds);
  return BoundedAssignment(cost, bounds).run();
}

std::vector<int> bounded_assignment_oracle(const Matrix& cost,
                                           const CountBounds& bounds) {
  check_bounds(cost, bounds);
  const int n = static_cast<int>(cost.rows());
  const int C = static_cast<int>(cost.cols());
  if (n > 10 || C > 4)
    throw ArgumentError(
        "bounded_assignment_oracle: instance too large (n <= 10, C <= 4)");
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::vector<int> best;
  double best_cost = kInf;
  std::vector<int> counts(static_cast<std::size_t>(C), 0);
  while (true) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int j = 0; j < n; ++j)
      ++counts[static_cast<std::size_t>(a[static_cast<std::size_t>(j)])];
    bool ok = true;
    for (int c = 0; c < C; ++c) {
      if (counts[static_cast<std::size_t>(c)] <
              bounds.lower[static_cast<std::size_t>(c)] ||
          counts[static_cast<std::size_t>(c)] >
              bounds.upper[static_cast<std::size_t>(c)]) {
        ok = false;
        break;
      }
    }
    if (ok) {
      const double v = assignment_cost(cost, a);
      if (v < best_cost) {  // strict: the first minimizer wins, i.e. lex order
        best_cost = v;
        best = a;
      }
    }
    int j = n - 1;
    while (j >= 0 && a[static_cast<std::size_t>(j)] == C - 1) {
      a[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
    ++a[static_cast<std::size_t>(j)];
  }
  if (best.empty())
    throw BalanceInfeasibleError("bounded_assignment_oracle: infeasible");
  return best;
}

double assignment_cost(const Matrix& cost,
                       const std::vector<int>& assignment) {
  double v = 0.0;
  for (std::size_t j = 0; j < assignment.size(); ++j)
    v += cost(static_cast<Eigen::Index>(j), assignment[j]);
  return v;
}

}  // namespace mtclust
