#ifndef MTCLUST_SOLVER_HPP
#define MTCLUST_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "mtclust/balance.hpp"
#include "mtclust/labeling.hpp"
#include "mtclust/objective.hpp"
#include "mtclust/types.hpp"

namespace mtclust {

struct SolverConfig {
  double eps_cpa = 1e-3;   // relative stop on the outer violation improvement
  double eps_elm = 1e-3;   // relative level-method gap tolerance
  double level_tau = 0.9;  // level parameter in (0,1)
  int max_outer = 50;
  int max_elm = 100;
  int max_alt = 50;
  double alt_tol = 1e-6;      // relative primal change stop for alternation
  double cov_epsilon = 1e-8;  // ridge before the matrix square root
  std::uint64_t init_label_seed = 1;
  int kmeans_restarts = 10;
  int kpca_rank_cap = 100;
  /// Above this stacked size the dual solve switches from the dense shared
  /// Cholesky to an equivalent structured factorization (per-task blocks
  /// for feature learning, diagonal-plus-low-rank for linear relationship
  /// learning).
  int dense_dual_threshold = 600;
  /// When set, the covariance stays fixed at this matrix (single-task path).
  std::optional<Matrix> fixed_covariance;

  void validate() const;
};

struct TracePoint {
  int outer = 0;
  int elm_iter = 0;
  int alt_iter = 0;
  double primal = 0.0;
  double dual = 0.0;
};

struct SolverReport {
  bool converged = false;
  bool stopped_on_duplicate = false;
  bool stopped_on_violation = false;
  int outer_iters = 0;
  bool elm_hit_cap = false;
  int qp_fallbacks = 0;
  // Monotonicity witnesses, checked with small numerical slack.
  bool alternation_monotone = true;
  bool elm_gap_monotone = true;
  bool cpa_monotone = true;
  bool covariance_contract_ok = true;
  std::vector<double> subproblem_values;  // one per outer iteration
  std::vector<double> elm_gaps;           // gap sequence of the last run_elm
};

struct SolverState {
  std::vector<ConstraintPool> pools;
  ModelState model;
  Vector theta;  // per-task envelope scalars at the last subproblem solve
  std::vector<TracePoint> trace;
  SolverReport report;
};

struct ClusteringOutcome {
  std::vector<std::vector<int>> labels;  // per task
  CovarianceVariable covariance;
  std::vector<TracePoint> trace;
  SolverReport report;
  double final_objective = 0.0;  // relaxed primal at the returned model
};

/// Pools seeded from balance-projected k-means, uniform covariance, zero
/// duals.
SolverState initialize(const WorkingSet& ws, const HyperParams& hp,
                       const BalanceSpec& balance, const SolverConfig& cfg);

/// Per-class duals a_c = K~^{-1} y_c via one shared Cholesky factorization.
Matrix solve_duals(const MultitaskGram& gram, const Matrix& ytilde);

/// Closed-form covariance update Z = (S + eps I)^{1/2} / tr(...), with
/// S = sum_c W_c W_c' (feature learning) or sum_c W_c' W_c (relationship
/// learning, computed in kernel form).
CovarianceVariable update_covariance(const WorkingSet& ws, const Matrix& alpha,
                                     const CovarianceVariable& prev,
                                     const HyperParams& hp,
                                     const SolverConfig& cfg);

struct AlternationResult {
  Matrix alpha;
  CovarianceVariable covariance;
  double value = 0.0;  // saddle (dual) value at the fixed weights
};

/// Alternates dual solves and covariance updates at fixed pool weights
/// until the relative primal change falls below alt_tol.
AlternationResult inner_alternation(
    const WorkingSet& ws, const std::vector<FractionalLabelMatrix>& labels,
    const CovarianceVariable& z0, const HyperParams& hp,
    const SolverConfig& cfg, SolverState* diag = nullptr, int outer = 0,
    int elm_iter = 0);

/// Extended level method over the pool weights: saddle point of the
/// reduced subproblem for the current pools. Returns the subproblem value
/// and leaves the best (alpha, Z, mu, theta) in the state.
double run_elm(SolverState& st, const WorkingSet& ws, const HyperParams& hp,
               const SolverConfig& cfg, int outer);

/// Hard labels through the decision rule f_c(x) = sum_p alpha(p,c)
/// K_mt(x_p, x) (kernel without the Lambda/2 ridge); ties take the lowest
/// class.
std::vector<std::vector<int>> extract_labels(const WorkingSet& ws,
                                             const ModelState& model,
                                             const HyperParams& hp);

/// Full cutting-plane solve.
ClusteringOutcome solve(const WorkingSet& ws, const HyperParams& hp,
                        const BalanceSpec& balance, const SolverConfig& cfg);
ClusteringOutcome solve(const TaskDataset& data, const HyperParams& hp,
                        const BalanceSpec& balance, const SolverConfig& cfg);

}  // namespace mtclust

#endif  // MTCLUST_SOLVER_HPP
