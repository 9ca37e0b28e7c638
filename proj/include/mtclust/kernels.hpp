#ifndef MTCLUST_KERNELS_HPP
#define MTCLUST_KERNELS_HPP

#include <vector>

#include "mtclust/types.hpp"

namespace mtclust {

/// Explicit feature matrix recovered from a truncated eigendecomposition
/// of a base Gram matrix; row p is the mapped observation p.
struct FeatureMap {
  Matrix phi;               // N x r
  Vector eigenvalues;       // kept eigenvalues, descending
  double truncation_error;  // sum of dropped eigenvalues
};

/// Regularized multitask kernel K~ = K + Lambda/2 together with the data
/// that produced it. Only the diagonal differs between K and K~.
struct MultitaskGram {
  Matrix tilde;          // N x N, K + diag(lambda)/2
  Vector lambda_diag;    // per-observation n_i
  ObjectiveKind objective = ObjectiveKind::FeatureLearning;
  Matrix covariance_snapshot;

  /// The kernel without the Lambda/2 ridge (used by the decision rule).
  Matrix raw() const {
    Matrix k = tilde;
    k.diagonal() -= 0.5 * lambda_diag;
    return k;
  }
};

/// Base Gram matrix over the stacked observation order.
Matrix base_gram(const TaskDataset& data, const BaseKernelSpec& spec);
Matrix base_gram(const Matrix& stacked_features, const BaseKernelSpec& spec);

/// Mean pairwise Euclidean distance over the pooled data (the width unit A).
double default_rbf_width(const TaskDataset& data);

/// Truncated eigendecomposition of a PSD Gram matrix; keeps eigenvalues
/// above 1e-10, at most `rank_cap` of them.
FeatureMap factorize_gram(const Matrix& gram, int rank_cap);

/// M(D) = D (lambda1 D + lambda2 I)^-1 via eigendecomposition of D with
/// eigenvalues clamped at zero.
Matrix shrinkage_transform(const Matrix& cov, double lambda1, double lambda2);

/// Feature-learning kernel (same-task blocks x^T M(D) y, zero across
/// tasks) plus Lambda/2. `features` holds one matrix per task.
MultitaskGram multitask_gram_feature(const std::vector<Matrix>& features,
                                     const CovarianceVariable& d,
                                     const HyperParams& hp);

/// Relationship-learning kernel R(Omega)_{i_p i_q} * base(p,q) plus
/// Lambda/2.
MultitaskGram multitask_gram_relationship(const Matrix& gram_base,
                                          const CovarianceVariable& omega,
                                          const std::vector<int>& task_index,
                                          const HyperParams& hp);

}  // namespace mtclust

#endif  // MTCLUST_KERNELS_HPP
