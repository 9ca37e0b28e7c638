#ifndef MTCLUST_TYPES_HPP
#define MTCLUST_TYPES_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "mtclust/errors.hpp"

namespace mtclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ObjectiveKind { FeatureLearning, RelationshipLearning };
enum class KernelKind { Linear, Rbf };
enum class CovKind { FeatureCov, TaskCov };

/// Base kernel choice; for RBF, k(x,y) = exp(-|x-y|^2 / (2 w^2)).
struct BaseKernelSpec {
  KernelKind kind = KernelKind::Linear;
  double width = 1.0;  // RBF only

  static BaseKernelSpec linear() { return {KernelKind::Linear, 1.0}; }
  static BaseKernelSpec rbf(double w) {
    if (!(w > 0.0)) throw ArgumentError("RBF width must be positive");
    return {KernelKind::Rbf, w};
  }
};

/// One clustering task: n_i observations of dimension d, optional truth
/// labels used for evaluation only.
struct ObservationBlock {
  int task_id = 0;
  Matrix features;                         // n_i x d
  std::optional<std::vector<int>> truth;   // class indices in [0, C)
};

/// The full multitask input. Blocks share a common feature dimension and
/// are immutable after construction.
class TaskDataset {
 public:
  TaskDataset() = default;

  explicit TaskDataset(std::vector<ObservationBlock> blocks)
      : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw ArgumentError("TaskDataset: no tasks");
    dim_ = static_cast<int>(blocks_[0].features.cols());
    if (dim_ < 1) throw ArgumentError("TaskDataset: feature dimension < 1");
    offsets_.assign(1, 0);
    offsets_.reserve(blocks_.size() + 1);
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      auto& b = blocks_[i];
      b.task_id = static_cast<int>(i);
      if (b.features.cols() != dim_) {
        throw ArgumentError("TaskDataset: task " + std::to_string(i) +
                            " has dimension " +
                            std::to_string(b.features.cols()) + ", expected " +
                            std::to_string(dim_));
      }
      if (b.features.rows() < 1) {
        throw ArgumentError("TaskDataset: task " + std::to_string(i) +
                            " is empty");
      }
      if (b.truth && static_cast<Eigen::Index>(b.truth->size()) !=
                         b.features.rows()) {
        throw ArgumentError("TaskDataset: task " + std::to_string(i) +
                            " truth label count mismatch");
      }
      offsets_.push_back(offsets_.back() +
                         static_cast<int>(b.features.rows()));
    }
  }

  int num_tasks() const { return static_cast<int>(blocks_.size()); }
  int dim() const { return dim_; }
  int rows(int task) const {
    return static_cast<int>(blocks_[static_cast<std::size_t>(task)]
                                .features.rows());
  }
  int total_rows() const { return offsets_.back(); }
  /// Stacked index of the first observation of `task` (task-major order).
  int offset(int task) const {
    return offsets_[static_cast<std::size_t>(task)];
  }
  const ObservationBlock& task(int i) const {
    return blocks_[static_cast<std::size_t>(i)];
  }
  const std::vector<ObservationBlock>& tasks() const { return blocks_; }

  /// Task id owning stacked observation index p.
  int task_of(int p) const {
    int i = 0;
    while (offsets_[static_cast<std::size_t>(i) + 1] <= p) ++i;
    return i;
  }

  bool has_truth() const {
    for (const auto& b : blocks_)
      if (!b.truth) return false;
    return true;
  }

  /// All features stacked task-major into one N x d matrix.
  Matrix stacked() const {
    Matrix out(total_rows(), dim_);
    for (const auto& b : blocks_) {
      out.middleRows(offsets_[static_cast<std::size_t>(b.task_id)],
                     b.features.rows()) = b.features;
    }
    return out;
  }

  /// Per-observation task ids over the stacked order.
  std::vector<int> task_index() const {
    std::vector<int> idx(static_cast<std::size_t>(total_rows()));
    for (const auto& b : blocks_) {
      for (Eigen::Index j = 0; j < b.features.rows(); ++j)
        idx[static_cast<std::size_t>(offset(b.task_id) + j)] = b.task_id;
    }
    return idx;
  }

  /// Verify truth labels (when present) lie in [0, C).
  void check_truth_range(int num_classes) const {
    for (const auto& b : blocks_) {
      if (b.truth) {
        for (int y : *b.truth) {
          if (y < 0 || y >= num_classes)
            throw ArgumentError("TaskDataset: truth label out of range in "
                                "task " + std::to_string(b.task_id));
        }
      }
    }
  }

  /// Truth range plus the clustering requirement n_i >= C.
  void check_compatible(int num_classes) const {
    check_truth_range(num_classes);
    for (const auto& b : blocks_) {
      if (b.features.rows() < num_classes) {
        throw ArgumentError("TaskDataset: task " +
                            std::to_string(b.task_id) + " has fewer rows (" +
                            std::to_string(b.features.rows()) +
                            ") than classes (" +
                            std::to_string(num_classes) + ")");
      }
    }
  }

 private:
  std::vector<ObservationBlock> blocks_;
  std::vector<int> offsets_{0};
  int dim_ = 0;
};

/// Regularization weights and problem shape shared by both objectives.
struct HyperParams {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  ObjectiveKind objective = ObjectiveKind::RelationshipLearning;
  BaseKernelSpec kernel = BaseKernelSpec::linear();
  int num_classes = 2;

  void validate() const {
    if (!(lambda1 > 0.0)) throw ArgumentError("lambda1 must be positive");
    if (!(lambda2 > 0.0)) throw ArgumentError("lambda2 must be positive");
    if (num_classes < 2) throw ArgumentError("num_classes must be >= 2");
    if (kernel.kind == KernelKind::Rbf && !(kernel.width > 0.0))
      throw ArgumentError("RBF width must be positive");
  }
};

/// Symmetric PSD matrix with unit trace: the feature covariance D (d x d)
/// or the task covariance Omega (m x m).
struct CovarianceVariable {
  CovKind kind = CovKind::TaskCov;
  Matrix mat;

  static CovarianceVariable identity(CovKind kind, int n) {
    CovarianceVariable z;
    z.kind = kind;
    z.mat = Matrix::Identity(n, n) / static_cast<double>(n);
    return z;
  }

  int size() const { return static_cast<int>(mat.rows()); }

  /// symmetric within 1e-12, min eigenvalue >= -1e-9, trace 1 within 1e-9.
  bool satisfies_contract(std::string* why = nullptr) const {
    if (mat.rows() != mat.cols()) {
      if (why) *why = "not square";
      return false;
    }
    const double asym = (mat - mat.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12) {
      if (why) *why = "asymmetry " + std::to_string(asym);
      return false;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat,
                                             Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-9) {
      if (why) *why = "min eigenvalue " + std::to_string(min_eig);
      return false;
    }
    const double tr = mat.trace();
    if (std::abs(tr - 1.0) > 1e-9) {
      if (why) *why = "trace " + std::to_string(tr);
      return false;
    }
    return true;
  }
};

/// Legal indicator matrix for one task: each row is the code of one class.
struct IndicatorMatrix {
  int task_id = 0;
  Matrix values;  // n_i x C
};

/// Convex combination of pool constraints: rows sum to 0, entries in
/// [-1/(C-1), 1].
struct FractionalLabelMatrix {
  int task_id = 0;
  Matrix values;  // n_i x C
};

/// Duals and covariance of the uniform saddle problem. alpha is stored as
/// one N x C matrix (column c is the class-c dual stacked task-major).
struct ModelState {
  Matrix alpha;
  CovarianceVariable covariance;
};

}  // namespace mtclust

#endif  // MTCLUST_TYPES_HPP
