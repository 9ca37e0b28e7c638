#include "mtclust/smallopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mtclust {

namespace {

constexpr double kPivotTol = 1e-11;

// Simplex over an explicit tableau; basis_ holds the basic column of each
// row. Bland's rule everywhere, so termination is guaranteed.
class Tableau {
 public:
  Tableau(Matrix a, Vector b) : a_(std::move(a)), b_(std::move(b)) {
    basis_.assign(static_cast<std::size_t>(a_.rows()), -1);
  }

  int rows() const { return static_cast<int>(a_.rows()); }
  int cols() const { return static_cast<int>(a_.cols()); }

  // min c'x over the current feasible basis; returns false when unbounded.
  bool optimize(const Vector& c) {
    while (true) {
      const Vector y = dual_prices(c);
      int enter = -1;
      for (int j = 0; j < cols(); ++j) {
        if (is_basic(j)) continue;
        const double reduced = c(j) - y.dot(a_.col(j));
        if (reduced < -1e-9) {
          enter = j;  // Bland: lowest eligible index
          break;
        }
      }
      if (enter < 0) return true;
      const Vector dir = basis_solve(a_.col(enter));
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows(); ++i) {
        if (dir(i) > kPivotTol) {
          const double ratio = xb_(i) / dir(i);
          if (ratio < best - 1e-12 ||
              (ratio < best + 1e-12 &&
               (leave < 0 || basis_[static_cast<std::size_t>(i)] <
                                 basis_[static_cast<std::size_t>(leave)]))) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter, dir, best);
    }
  }

  void set_basis(std::vector<int> basis, Vector xb) {
    basis_ = std::move(basis);
    xb_ = std::move(xb);
    refresh_inverse();
  }

  const std::vector<int>& basis() const { return basis_; }
  const Vector& basic_values() const { return xb_; }

 private:
  bool is_basic(int j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  void refresh_inverse() {
    Matrix b(rows(), rows());
    for (int i = 0; i < rows(); ++i)
      b.col(i) = a_.col(basis_[static_cast<std::size_t>(i)]);
    binv_ = b.fullPivLu().inverse();
  }

  Vector basis_solve(const Vector& col) const { return binv_ * col; }

  Vector dual_prices(const Vector& c) const {
    Vector cb(rows());
    for (int i = 0; i < rows(); ++i)
      cb(i) = c(basis_[static_cast<std::size_t>(i)]);
    return binv_.transpose() * cb;
  }

  void pivot(int leave, int enter, const Vector& dir, double step) {
    xb_ -= step * dir;
    xb_(leave) = step;
    basis_[static_cast<std::size_t>(leave)] = enter;
    refresh_inverse();
    // Guard against drift on long pivots.
    xb_ = binv_ * b_;
  }

  Matrix a_;
  Vector b_;
  Matrix binv_;
  Vector xb_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const Matrix& a_eq, const Vector& b_eq, const Matrix& a_le,
                  const Vector& b_le, const Vector& c) {
  const int n = static_cast<int>(c.size());
  const int me = static_cast<int>(a_eq.rows());
  const int mi = static_cast<int>(a_le.rows());
  const int m = me + mi;

  // Standard form: slacks on inequalities, artificials on every row.
  Matrix a = Matrix::Zero(m, n + mi + m);
  Vector b(m);
  for (int i = 0; i < me; ++i) {
    a.row(i).head(n) = a_eq.row(i);
    b(i) = b_eq(i);
  }
  for (int i = 0; i < mi; ++i) {
    a.row(me + i).head(n) = a_le.row(i);
    a(me + i, n + i) = 1.0;
    b(me + i) = b_le(i);
  }
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0.0) {
      a.row(i) = -a.row(i);
      b(i) = -b(i);
    }
    a(i, n + mi + i) = 1.0;
  }

  Tableau t(a, b);
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + mi + i;
  t.set_basis(basis, b);

  Vector phase1 = Vector::Zero(n + mi + m);
  phase1.tail(m).setOnes();
  if (!t.optimize(phase1)) return {LpStatus::Infeasible, {}, 0.0};
  double infeas = 0.0;
  for (int i = 0; i < m; ++i) {
    if (t.basis()[static_cast<std::size_t>(i)] >= n + mi)
      infeas += t.basic_values()(i);
  }
  if (infeas > 1e-7) return {LpStatus::Infeasible, {}, 0.0};

  // Phase 2 keeps artificial columns priced out by a steep cost so a
  // degenerate artificial can stay basic at zero.
  Vector phase2 = Vector::Zero(n + mi + m);
  phase2.head(n) = c;
  double big = 1.0;
  for (int j = 0; j < n; ++j) big = std::max(big, std::abs(c(j)));
  phase2.tail(m).setConstant(big * 1e10);
  if (!t.optimize(phase2)) return {LpStatus::Unbounded, {}, 0.0};

  LpResult res;
  res.status = LpStatus::Optimal;
  res.x = Vector::Zero(n);
  for (int i = 0; i < static_cast<int>(t.basis().size()); ++i) {
    const int j = t.basis()[static_cast<std::size_t>(i)];
    if (j < n) res.x(j) = t.basic_values()(i);
  }
  res.value = c.dot(res.x);
  return res;
}

std::optional<Vector> project_active_set(const Vector& r, const Matrix& a_eq,
                                         const Vector& b_eq,
                                         const Matrix& a_in,
                                         const Vector& b_in, const Vector& x0,
                                         int max_iter) {
  const int me = static_cast<int>(a_eq.rows());
  const int mi = static_cast<int>(a_in.rows());
  Vector x = x0;

  std::vector<char> active(static_cast<std::size_t>(mi), 0);
  for (int i = 0; i < mi; ++i) {
    if (a_in.row(i).dot(x) > b_in(i) - 1e-10)
      active[static_cast<std::size_t>(i)] = 1;
  }

  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<int> act;
    for (int i = 0; i < mi; ++i)
      if (active[static_cast<std::size_t>(i)]) act.push_back(i);
    const int mw = me + static_cast<int>(act.size());

    Matrix mrows(mw, r.size());
    Vector v(mw);
    mrows.topRows(me) = a_eq;
    v.head(me) = b_eq;
    for (int k = 0; k < static_cast<int>(act.size()); ++k) {
      mrows.row(me + k) = a_in.row(act[static_cast<std::size_t>(k)]);
      v(me + k) = b_in(act[static_cast<std::size_t>(k)]);
    }

    // Projection onto the working-set affine subspace (Hessian is I):
    // x* = r - M' lam with (M M') lam = M r - v.
    Vector lam;
    Vector target;
    if (mw > 0) {
      const Matrix gram = mrows * mrows.transpose();
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(gram);
      lam = cod.solve(mrows * r - v);
      target = r - mrows.transpose() * lam;
    } else {
      lam.resize(0);
      target = r;
    }
    const Vector p = target - x;

    if (p.norm() <= 1e-11 * (1.0 + x.norm())) {
      // Optimal over the working set; check inequality multipliers.
      int drop = -1;
      double most_neg = -1e-9;
      for (int k = 0; k < static_cast<int>(act.size()); ++k) {
        if (lam(me + k) < most_neg) {
          most_neg = lam(me + k);
          drop = act[static_cast<std::size_t>(k)];
        }
      }
      if (drop < 0) return x;
      active[static_cast<std::size_t>(drop)] = 0;
      continue;
    }

    // Step to the first blocking inactive constraint.
    double step = 1.0;
    int block = -1;
    for (int i = 0; i < mi; ++i) {
      if (active[static_cast<std::size_t>(i)]) continue;
      const double along = a_in.row(i).dot(p);
      if (along > 1e-12) {
        const double room = (b_in(i) - a_in.row(i).dot(x)) / along;
        if (room < step) {
          step = room;
          block = i;
        }
      }
    }
    x += std::max(step, 0.0) * p;
    if (block >= 0) active[static_cast<std::size_t>(block)] = 1;
  }
  return std::nullopt;
}

}  // namespace mtclust
