#ifndef MTCLUST_OBJECTIVE_HPP
#define MTCLUST_OBJECTIVE_HPP

#include <optional>
#include <vector>

#include "mtclust/kernels.hpp"
#include "mtclust/types.hpp"

namespace mtclust {

/// Per-run view of the data in the space the chosen objective operates on:
/// raw features, or KPCA-mapped rows for feature learning with a nonlinear
/// kernel, plus the cached base Gram matrix for relationship learning.
struct WorkingSet {
  ObjectiveKind objective = ObjectiveKind::FeatureLearning;
  std::vector<Matrix> features;  // per task, effective space
  Matrix base;                   // base Gram (relationship learning only)
  std::vector<int> task_index;
  std::vector<int> offsets;      // size m+1, task-major
  int total = 0;
  int dim = 0;   // effective feature dimension
  int tasks = 0;
  std::optional<FeatureMap> feature_map;

  int rows(int task) const {
    return offsets[static_cast<std::size_t>(task) + 1] -
           offsets[static_cast<std::size_t>(task)];
  }
  /// Size of the covariance variable: d for D, m for Omega.
  int cov_size() const {
    return objective == ObjectiveKind::FeatureLearning ? dim : tasks;
  }
  CovKind cov_kind() const {
    return objective == ObjectiveKind::FeatureLearning ? CovKind::FeatureCov
                                                       : CovKind::TaskCov;
  }
};

/// Builds the working set; `rank_cap` bounds the KPCA rank when feature
/// learning runs on a nonlinear kernel.
WorkingSet make_working_set(const TaskDataset& data, const HyperParams& hp,
                            int rank_cap = 100);

/// The multitask kernel for the working set at covariance Z.
MultitaskGram build_kernel(const WorkingSet& ws, const CovarianceVariable& z,
                           const HyperParams& hp);

/// Pseudo-inverse of a PSD matrix through its eigendecomposition with an
/// epsilon ridge on the eigenvalues.
Matrix pinv_epsilon(const Matrix& cov, double epsilon);

/// Explicit weight matrices W_c (d x m, one per class) recovered from the
/// duals. Requires explicit features (always available for feature
/// learning; linear kernel only for relationship learning).
std::vector<Matrix> recover_weights(const WorkingSet& ws, const Matrix& alpha,
                                    const CovarianceVariable& z,
                                    const HyperParams& hp);

/// Relaxed primal objective at the model implied by (alpha, Z) and the
/// fractional labels. Inverse covariances use pinv_epsilon.
double eval_primal_objective(const WorkingSet& ws, const Matrix& alpha,
                             const CovarianceVariable& z,
                             const std::vector<FractionalLabelMatrix>& labels,
                             const HyperParams& hp, double cov_epsilon = 1e-8);

/// Convenience overload building the working set from the dataset.
double eval_primal_objective(const ModelState& state,
                             const std::vector<FractionalLabelMatrix>& labels,
                             const TaskDataset& data, const HyperParams& hp,
                             double cov_epsilon = 1e-8);

/// Dual value sum_c (y_c' a_c - a_c' K~ a_c / 2).
double dual_objective_value(const MultitaskGram& gram, const Matrix& alpha,
                            const Matrix& ytilde);

/// Stacks per-task fractional label matrices into one N x C matrix.
Matrix stack_labels(const WorkingSet& ws,
                    const std::vector<FractionalLabelMatrix>& labels);

}  // namespace mtclust

#endif  // MTCLUST_OBJECTIVE_HPP
