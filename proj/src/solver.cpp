#include "mtclust/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mtclust/kmeans.hpp"
#include "mtclust/labels.hpp"
#include "mtclust/smallopt.hpp"
#include "mtclust/transportation.hpp"

namespace mtclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix task_block(const WorkingSet& ws, const Matrix& alpha, int task) {
  return alpha.middleRows(ws.offsets[static_cast<std::size_t>(task)],
                          ws.rows(task));
}

std::vector<FractionalLabelMatrix> pool_labels(
    const std::vector<ConstraintPool>& pools) {
  std::vector<FractionalLabelMatrix> labels;
  labels.reserve(pools.size());
  for (const auto& p : pools) labels.push_back(p.fractional_labels());
  return labels;
}

void check_covariance(const CovarianceVariable& z, SolverReport* report) {
  if (report && !z.satisfies_contract()) report->covariance_contract_ok = false;
}

// Kernel-form S = sum_c R G_c R for the task covariance update.
Matrix task_scatter(const WorkingSet& ws, const Matrix& alpha,
                    const CovarianceVariable& prev, const HyperParams& hp) {
  const Matrix r = shrinkage_transform(prev.mat, hp.lambda1, hp.lambda2);
  Matrix s = Matrix::Zero(ws.tasks, ws.tasks);
  for (int c = 0; c < hp.num_classes; ++c) {
    Matrix t(ws.tasks, ws.total);
    for (int i = 0; i < ws.tasks; ++i) {
      t.row(i) = alpha.col(c)
                     .segment(ws.offsets[static_cast<std::size_t>(i)],
                              ws.rows(i))
                     .transpose() *
                 ws.base.middleRows(ws.offsets[static_cast<std::size_t>(i)],
                                    ws.rows(i));
    }
    Matrix g(ws.tasks, ws.tasks);
    for (int i = 0; i < ws.tasks; ++i) {
      for (int k = 0; k < ws.tasks; ++k) {
        g(i, k) =
            t.row(i)
                .segment(ws.offsets[static_cast<std::size_t>(k)], ws.rows(k))
                .dot(alpha.col(c).segment(
                    ws.offsets[static_cast<std::size_t>(k)], ws.rows(k)));
      }
    }
    s += r * 0.5 * (g + g.transpose()) * r;
  }
  return s;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(eps_cpa > 0.0) || !(eps_elm > 0.0) || !(alt_tol > 0.0) ||
      !(cov_epsilon > 0.0))
    throw ArgumentError("SolverConfig: tolerances must be positive");
  if (!(level_tau > 0.0 && level_tau < 1.0))
    throw ArgumentError("SolverConfig: level_tau must lie in (0,1)");
  if (max_outer < 1 || max_elm < 1 || max_alt < 1 || kmeans_restarts < 1 ||
      kpca_rank_cap < 1)
    throw ArgumentError("SolverConfig: iteration caps must be positive");
}

SolverState initialize(const WorkingSet& ws, const HyperParams& hp,
                       const BalanceSpec& balance, const SolverConfig& cfg) {
  cfg.validate();
  hp.validate();
  if (balance.num_tasks() != ws.tasks ||
      balance.num_classes() != hp.num_classes)
    throw ArgumentError("initialize: balance spec shape mismatch");

  SolverState st;
  for (int i = 0; i < ws.tasks; ++i) {
    CountBounds bounds = balance.bounds_for(i, ws.rows(i));
    const Matrix& x = ws.features[static_cast<std::size_t>(i)];
    KmeansResult km =
        kmeans(x, hp.num_classes, cfg.kmeans_restarts,
               cfg.init_label_seed + static_cast<std::uint64_t>(i));
    // Project the k-means labels to the nearest balance-feasible assignment:
    // cost is the negative cluster affinity.
    Matrix cost(x.rows(), hp.num_classes);
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
      for (int c = 0; c < hp.num_classes; ++c)
        cost(j, c) = (x.row(j) - km.centers.row(c)).squaredNorm();
    }
    const std::vector<int> assignment = solve_bounded_assignment(cost, bounds);
    ConstraintPool pool(i, std::move(bounds));
    IndicatorMatrix y;
    y.task_id = i;
    y.values = assignment_to_indicator(assignment, hp.num_classes);
    pool.add(y);
    pool.reset_weights_uniform();
    st.pools.push_back(std::move(pool));
  }

  st.model.alpha = Matrix::Zero(ws.total, hp.num_classes);
  if (cfg.fixed_covariance) {
    st.model.covariance.kind = ws.cov_kind();
    st.model.covariance.mat = *cfg.fixed_covariance;
    std::string why;
    if (!st.model.covariance.satisfies_contract(&why))
      throw ArgumentError("initialize: fixed covariance violates contract (" +
                          why + ")");
  } else {
    st.model.covariance =
        CovarianceVariable::identity(ws.cov_kind(), ws.cov_size());
  }
  st.theta = Vector::Zero(ws.tasks);
  return st;
}

Matrix solve_duals(const MultitaskGram& gram, const Matrix& ytilde) {
  if (ytilde.rows() != gram.tilde.rows())
    throw ArgumentError("solve_duals: label stack size mismatch");
  Eigen::LLT<Matrix> llt(gram.tilde);
  if (llt.info() != Eigen::Success)
    throw NumericalError("solve_duals: Cholesky factorization failed");
  return llt.solve(ytilde);
}

CovarianceVariable update_covariance(const WorkingSet& ws, const Matrix& alpha,
                                     const CovarianceVariable& prev,
                                     const HyperParams& hp,
                                     const SolverConfig& cfg) {
  Matrix s;
  if (ws.objective == ObjectiveKind::FeatureLearning) {
    const std::vector<Matrix> w = recover_weights(ws, alpha, prev, hp);
    s = Matrix::Zero(ws.dim, ws.dim);
    for (const auto& wc : w) s += wc * wc.transpose();
  } else {
    s = task_scatter(ws, alpha, prev, hp);
  }
  // Ridge scaled by tr(S) so the regularization is unit-free; a zero
  // scatter (alpha = 0) falls back to the uniform covariance.
  const double scale = s.trace();
  if (!(scale > 0.0))
    return CovarianceVariable::identity(prev.kind, static_cast<int>(s.rows()));
  s.diagonal().array() += cfg.cov_epsilon * scale;

  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.info() != Eigen::Success)
    throw NumericalError("update_covariance: eigendecomposition failed");
  const Vector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  CovarianceVariable z;
  z.kind = prev.kind;
  z.mat = es.eigenvectors() * roots.asDiagonal() *
          es.eigenvectors().transpose() / roots.sum();
  z.mat = 0.5 * (z.mat + z.mat.transpose()).eval();
  return z;
}

namespace {

// Equivalent structured evaluations of alpha = K~^{-1} y for large
// instances: the feature-learning kernel is block-diagonal over tasks, and
// the linear relationship kernel is diag(Lambda/2) plus a rank-(d m)
// factor, so Woodbury applies.
bool structured_dual_applies(const WorkingSet& ws, const HyperParams& hp,
                             const SolverConfig& cfg) {
  if (ws.total <= cfg.dense_dual_threshold) return false;
  if (ws.objective == ObjectiveKind::FeatureLearning) return true;
  return hp.kernel.kind == KernelKind::Linear;
}

Matrix solve_duals_structured(const WorkingSet& ws, const MultitaskGram& gram,
                              const CovarianceVariable& z,
                              const HyperParams& hp, const Matrix& ytilde) {
  Matrix alpha(ytilde.rows(), ytilde.cols());
  if (ws.objective == ObjectiveKind::FeatureLearning) {
    for (int i = 0; i < ws.tasks; ++i) {
      const int at = ws.offsets[static_cast<std::size_t>(i)];
      const int n = ws.rows(i);
      Eigen::LLT<Matrix> llt(gram.tilde.block(at, at, n, n));
      if (llt.info() != Eigen::Success)
        throw NumericalError("solve_duals: per-task Cholesky failed");
      alpha.middleRows(at, n) = llt.solve(ytilde.middleRows(at, n));
    }
    return alpha;
  }
  // K~ = diag(Lambda/2) + U U' with U row p = (R^{1/2} e_{i_p})' (x) x_p'.
  const Matrix r = shrinkage_transform(z.mat, hp.lambda1, hp.lambda2);
  Eigen::SelfAdjointEigenSolver<Matrix> es(r);
  const Matrix rhalf = es.eigenvectors() *
                       es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                       es.eigenvectors().transpose();
  const int d = ws.dim;
  const int rank = ws.tasks * d;
  Matrix u(ws.total, rank);
  for (int i = 0; i < ws.tasks; ++i) {
    const int at = ws.offsets[static_cast<std::size_t>(i)];
    const int n = ws.rows(i);
    for (int a = 0; a < ws.tasks; ++a) {
      u.block(at, a * d, n, d) =
          rhalf(i, a) * ws.features[static_cast<std::size_t>(i)];
    }
  }
  const Vector dinv = (0.5 * gram.lambda_diag).cwiseInverse();
  const Matrix udy = dinv.asDiagonal() * u;  // D^{-1} U
  Matrix cap = Matrix::Identity(rank, rank) + u.transpose() * udy;
  Eigen::LLT<Matrix> llt(cap);
  if (llt.info() != Eigen::Success)
    throw NumericalError("solve_duals: capacitance Cholesky failed");
  const Matrix rhs = dinv.asDiagonal() * ytilde;
  alpha = rhs - udy * llt.solve(u.transpose() * rhs);
  return alpha;
}

}  // namespace

AlternationResult inner_alternation(
    const WorkingSet& ws, const std::vector<FractionalLabelMatrix>& labels,
    const CovarianceVariable& z0, const HyperParams& hp,
    const SolverConfig& cfg, SolverState* diag, int outer, int elm_iter) {
  const Matrix ytilde = stack_labels(ws, labels);
  CovarianceVariable z = z0;
  MultitaskGram gram = build_kernel(ws, z, hp);
  const bool structured = structured_dual_applies(ws, hp, cfg);
  Matrix alpha;
  double value = 0.0;
  double prev_primal = kInf;

  for (int it = 0; it < cfg.max_alt; ++it) {
    alpha = structured ? solve_duals_structured(ws, gram, z, hp, ytilde)
                       : solve_duals(gram, ytilde);
    value = dual_objective_value(gram, alpha, ytilde);
    const double primal =
        eval_primal_objective(ws, alpha, z, labels, hp, cfg.cov_epsilon);
    if (diag) {
      if (primal > prev_primal + 1e-8 * (1.0 + std::abs(prev_primal)))
        diag->report.alternation_monotone = false;
      diag->trace.push_back({outer, elm_iter, it, primal, value});
    }
    if (std::abs(prev_primal - primal) <= cfg.alt_tol * (1.0 + std::abs(primal)))
      break;
    prev_primal = primal;
    if (cfg.fixed_covariance) continue;
    CovarianceVariable z_next = update_covariance(ws, alpha, z, hp, cfg);
    if (diag) check_covariance(z_next, &diag->report);
    if ((z_next.mat - z.mat).cwiseAbs().maxCoeff() < 1e-15) continue;
    z = std::move(z_next);
    gram = build_kernel(ws, z, hp);
  }
  return {std::move(alpha), std::move(z), value};
}

namespace {

struct FlatPools {
  std::vector<int> starts;  // per task, into the flattened weight vector
  int total = 0;
};

FlatPools flatten_layout(const std::vector<ConstraintPool>& pools) {
  FlatPools f;
  for (const auto& p : pools) {
    f.starts.push_back(f.total);
    f.total += p.size();
  }
  return f;
}

Vector flatten_weights(const std::vector<ConstraintPool>& pools,
                       const FlatPools& layout) {
  Vector mu(layout.total);
  for (std::size_t i = 0; i < pools.size(); ++i) {
    const auto& w = pools[i].weights();
    for (std::size_t k = 0; k < w.size(); ++k)
      mu(layout.starts[i] + static_cast<int>(k)) = w[k];
  }
  return mu;
}

void store_weights(std::vector<ConstraintPool>& pools, const FlatPools& layout,
                   const Vector& mu) {
  for (std::size_t i = 0; i < pools.size(); ++i) {
    std::vector<double> w(static_cast<std::size_t>(pools[i].size()));
    double sum = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      w[k] = std::clamp(mu(layout.starts[i] + static_cast<int>(k)), 0.0, 1.0);
      sum += w[k];
    }
    for (auto& v : w) v /= sum;
    pools[i].set_weights(w);
  }
}

// Gradient of the saddle value in the pool weights: entry (i,k) is
// sum_{c,j} alpha(j,c) ybar_k(j,c) over task i.
Vector pool_gradient(const SolverState& st, const WorkingSet& ws,
                     const Matrix& alpha, const FlatPools& layout) {
  Vector g(layout.total);
  for (std::size_t i = 0; i < st.pools.size(); ++i) {
    const Matrix block = task_block(ws, alpha, static_cast<int>(i));
    for (int k = 0; k < st.pools[i].size(); ++k) {
      g(layout.starts[i] + k) =
          constraint_value(block, st.pools[i].constraint(k));
    }
  }
  return g;
}

}  // namespace

double run_elm(SolverState& st, const WorkingSet& ws, const HyperParams& hp,
               const SolverConfig& cfg, int outer) {
  const FlatPools layout = flatten_layout(st.pools);
  const int m = ws.tasks;
  const int P = layout.total;

  // Simplex equalities: per task, the pool weights sum to one.
  Matrix a_eq = Matrix::Zero(m, P);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < st.pools[static_cast<std::size_t>(i)].size(); ++k)
      a_eq(i, layout.starts[static_cast<std::size_t>(i)] + k) = 1.0;
  }
  const Vector b_eq = Vector::Ones(m);

  Vector mu = flatten_weights(st.pools, layout);
  std::vector<Vector> cut_grads;
  std::vector<double> cut_offsets;

  double ub = kInf, lb = -kInf;
  Matrix best_alpha;
  CovarianceVariable best_z;
  Vector best_mu, best_grad;
  st.report.elm_gaps.clear();

  CovarianceVariable z_warm = st.model.covariance;
  double prev_gap = kInf;

  for (int t = 0; t < cfg.max_elm; ++t) {
    store_weights(st.pools, layout, mu);
    AlternationResult alt = inner_alternation(ws, pool_labels(st.pools),
                                              z_warm, hp, cfg, &st, outer, t);
    z_warm = alt.covariance;
    const Vector grad = pool_gradient(st, ws, alt.alpha, layout);
    cut_grads.push_back(grad);
    cut_offsets.push_back(alt.value - grad.dot(mu));

    if (alt.value < ub) {
      ub = alt.value;
      best_alpha = alt.alpha;
      best_z = alt.covariance;
      best_mu = mu;
      best_grad = grad;
    }

    // Lower bound: min z over the simplex product with z >= each cut.
    {
      const int T = static_cast<int>(cut_grads.size());
      Matrix lp_eq = Matrix::Zero(m, P + 2);
      lp_eq.leftCols(P) = a_eq;
      Matrix lp_le = Matrix::Zero(T, P + 2);
      Vector lp_rhs(T);
      for (int r = 0; r < T; ++r) {
        lp_le.row(r).head(P) = cut_grads[static_cast<std::size_t>(r)];
        lp_le(r, P) = -1.0;
        lp_le(r, P + 1) = 1.0;
        lp_rhs(r) = -cut_offsets[static_cast<std::size_t>(r)];
      }
      Vector lp_cost = Vector::Zero(P + 2);
      lp_cost(P) = 1.0;
      lp_cost(P + 1) = -1.0;
      const LpResult res = solve_lp(lp_eq, b_eq, lp_le, lp_rhs, lp_cost);
      if (res.status != LpStatus::Optimal)
        throw NumericalError("run_elm: lower-bound LP failed");
      if (res.value > lb) lb = res.value;
      mu = res.x.head(P);  // LP argmin: level-feasible start and fallback
    }
    const double gap = std::max(ub - lb, 0.0);
    if (gap > prev_gap + 1e-7 * (1.0 + std::abs(gap)))
      st.report.elm_gap_monotone = false;
    prev_gap = std::min(prev_gap, gap);
    st.report.elm_gaps.push_back(gap);

    if (gap <= cfg.eps_elm * (1.0 + std::abs(ub))) break;
    if (t == cfg.max_elm - 1) {
      st.report.elm_hit_cap = true;
      break;
    }

    // Project the best weights onto the level set.
    const int T = static_cast<int>(cut_grads.size());
    Matrix qp_in = Matrix::Zero(T + P, P);
    Vector qp_rhs(T + P);
    auto fill_cuts = [&](double level) {
      for (int r = 0; r < T; ++r) {
        qp_in.row(r) = cut_grads[static_cast<std::size_t>(r)].transpose();
        qp_rhs(r) = level - cut_offsets[static_cast<std::size_t>(r)];
      }
      for (int j = 0; j < P; ++j) {
        qp_in(T + j, j) = -1.0;
        qp_rhs(T + j) = 0.0;
      }
    };
    fill_cuts(lb + cfg.level_tau * (ub - lb));
    std::optional<Vector> proj =
        project_active_set(best_mu, a_eq, b_eq, qp_in, qp_rhs, mu);
    if (!proj) {
      ++st.report.qp_fallbacks;
      fill_cuts(ub);  // raise the level to the upper bound and retry
      proj = project_active_set(best_mu, a_eq, b_eq, qp_in, qp_rhs, mu);
    }
    if (proj) mu = *proj;
    // else keep the LP argmin already stored in mu
  }

  store_weights(st.pools, layout, best_mu);
  st.model.alpha = best_alpha;
  st.model.covariance = best_z;
  for (int i = 0; i < m; ++i) {
    double lo = kInf;
    for (int k = 0; k < st.pools[static_cast<std::size_t>(i)].size(); ++k)
      lo = std::min(lo,
                    best_grad(layout.starts[static_cast<std::size_t>(i)] + k));
    st.theta(i) = lo;
  }
  return ub;
}

std::vector<std::vector<int>> extract_labels(const WorkingSet& ws,
                                             const ModelState& model,
                                             const HyperParams& hp) {
  const MultitaskGram gram = build_kernel(ws, model.covariance, hp);
  const Matrix f = gram.raw() * model.alpha;
  std::vector<std::vector<int>> labels(static_cast<std::size_t>(ws.tasks));
  for (int i = 0; i < ws.tasks; ++i) {
    auto& out = labels[static_cast<std::size_t>(i)];
    out.resize(static_cast<std::size_t>(ws.rows(i)));
    for (int j = 0; j < ws.rows(i); ++j) {
      const int p = ws.offsets[static_cast<std::size_t>(i)] + j;
      int best = 0;
      for (int c = 1; c < hp.num_classes; ++c) {
        if (f(p, c) > f(p, best)) best = c;  // ties keep the lowest class
      }
      out[static_cast<std::size_t>(j)] = best;
    }
  }
  return labels;
}

ClusteringOutcome solve(const WorkingSet& ws, const HyperParams& hp,
                        const BalanceSpec& balance, const SolverConfig& cfg) {
  SolverState st = initialize(ws, hp, balance, cfg);
  double prev_sub = kInf;

  for (int outer = 1; outer <= cfg.max_outer; ++outer) {
    st.report.outer_iters = outer;
    const double sub = run_elm(st, ws, hp, cfg, outer);
    if (sub > prev_sub + 1e-6 * (1.0 + std::abs(prev_sub)))
      st.report.cpa_monotone = false;
    prev_sub = sub;
    st.report.subproblem_values.push_back(sub);

    std::vector<IndicatorMatrix> found;
    std::vector<bool> novel;
    double violation = 0.0;
    bool any_novel = false;
    for (int i = 0; i < ws.tasks; ++i) {
      const Matrix block = task_block(ws, st.model.alpha, i);
      IndicatorMatrix y = most_violated(
          block, st.pools[static_cast<std::size_t>(i)].bounds(), i);
      const double v = constraint_value(block, y);
      violation += std::max(0.0, st.theta(i) - v);
      const bool is_new = !st.pools[static_cast<std::size_t>(i)].contains(y);
      any_novel = any_novel || is_new;
      found.push_back(std::move(y));
      novel.push_back(is_new);
    }

    if (!any_novel) {
      st.report.converged = true;
      st.report.stopped_on_duplicate = true;
      break;
    }
    if (violation <= cfg.eps_cpa * st.theta.cwiseAbs().sum() + 1e-12) {
      st.report.converged = true;
      st.report.stopped_on_violation = true;
      break;
    }
    if (outer == cfg.max_outer) break;
    for (int i = 0; i < ws.tasks; ++i) {
      if (novel[static_cast<std::size_t>(i)])
        st.pools[static_cast<std::size_t>(i)].add(
            found[static_cast<std::size_t>(i)]);
    }
  }

  ClusteringOutcome out;
  out.labels = extract_labels(ws, st.model, hp);
  out.covariance = st.model.covariance;
  out.trace = std::move(st.trace);
  out.report = st.report;
  out.final_objective =
      eval_primal_objective(ws, st.model.alpha, st.model.covariance,
                            pool_labels(st.pools), hp, cfg.cov_epsilon);
  return out;
}

ClusteringOutcome solve(const TaskDataset& data, const HyperParams& hp,
                        const BalanceSpec& balance, const SolverConfig& cfg) {
  const WorkingSet ws = make_working_set(data, hp, cfg.kpca_rank_cap);
  return solve(ws, hp, balance, cfg);
}

}  // namespace mtclust
