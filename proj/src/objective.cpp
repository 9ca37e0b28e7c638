#include "mtclust/objective.hpp"

#include <cmath>
#include <string>

namespace mtclust {

WorkingSet make_working_set(const TaskDataset& data, const HyperParams& hp,
                            int rank_cap) {
  hp.validate();
  data.check_truth_range(hp.num_classes);
  WorkingSet ws;
  ws.objective = hp.objective;
  ws.tasks = data.num_tasks();
  ws.total = data.total_rows();
  ws.task_index = data.task_index();
  ws.offsets.resize(static_cast<std::size_t>(ws.tasks) + 1);
  for (int i = 0; i <= ws.tasks; ++i)
    ws.offsets[static_cast<std::size_t>(i)] =
        i < ws.tasks ? data.offset(i) : data.total_rows();

  const bool needs_map = hp.objective == ObjectiveKind::FeatureLearning &&
                         hp.kernel.kind != KernelKind::Linear;
  if (needs_map) {
    FeatureMap fm = factorize_gram(base_gram(data, hp.kernel), rank_cap);
    ws.dim = static_cast<int>(fm.phi.cols());
    for (int i = 0; i < ws.tasks; ++i)
      ws.features.push_back(fm.phi.middleRows(data.offset(i), data.rows(i)));
    ws.feature_map = std::move(fm);
  } else {
    ws.dim = data.dim();
    for (int i = 0; i < ws.tasks; ++i)
      ws.features.push_back(data.task(i).features);
  }
  if (hp.objective == ObjectiveKind::RelationshipLearning)
    ws.base = base_gram(data, hp.kernel);
  return ws;
}

MultitaskGram build_kernel(const WorkingSet& ws, const CovarianceVariable& z,
                           const HyperParams& hp) {
  if (ws.objective == ObjectiveKind::FeatureLearning)
    return multitask_gram_feature(ws.features, z, hp);
  return multitask_gram_relationship(ws.base, z, ws.task_index, hp);
}

Matrix pinv_epsilon(const Matrix& cov, double epsilon) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  if (es.info() != Eigen::Success)
    throw NumericalError("pinv_epsilon: eigendecomposition failed");
  Vector inv = es.eigenvalues().cwiseMax(0.0);
  for (Eigen::Index i = 0; i < inv.size(); ++i)
    inv(i) = 1.0 / (inv(i) + epsilon);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

// Column i is the alpha-weighted feature sum of task i (the x e_i^T blocks).
Matrix weighted_feature_sums(const WorkingSet& ws, const Vector& alpha_c) {
  Matrix b = Matrix::Zero(ws.dim, ws.tasks);
  for (int i = 0; i < ws.tasks; ++i) {
    b.col(i) = ws.features[static_cast<std::size_t>(i)].transpose() *
               alpha_c.segment(ws.offsets[static_cast<std::size_t>(i)],
                               ws.rows(i));
  }
  return b;
}

// Task-block Gram contraction G_c = A_c' K A_c (m x m) for one class.
Matrix gram_contraction(const WorkingSet& ws, const Vector& alpha_c) {
  Matrix t(ws.tasks, ws.base.cols());
  for (int i = 0; i < ws.tasks; ++i) {
    t.row(i) = alpha_c.segment(ws.offsets[static_cast<std::size_t>(i)],
                               ws.rows(i))
                   .transpose() *
               ws.base.middleRows(ws.offsets[static_cast<std::size_t>(i)],
                                  ws.rows(i));
  }
  Matrix g(ws.tasks, ws.tasks);
  for (int i = 0; i < ws.tasks; ++i) {
    for (int k = 0; k < ws.tasks; ++k) {
      g(i, k) = t.row(i)
                    .segment(ws.offsets[static_cast<std::size_t>(k)],
                             ws.rows(k))
                    .dot(alpha_c.segment(
                        ws.offsets[static_cast<std::size_t>(k)], ws.rows(k)));
    }
  }
  return 0.5 * (g + g.transpose());
}

void check_alpha(const WorkingSet& ws, const Matrix& alpha,
                 const HyperParams& hp) {
  if (alpha.rows() != ws.total || alpha.cols() != hp.num_classes)
    throw ArgumentError("objective: alpha must be N x C");
  if (!alpha.allFinite())
    throw ArgumentError("objective: alpha has non-finite entries");
}

}  // namespace

std::vector<Matrix> recover_weights(const WorkingSet& ws, const Matrix& alpha,
                                    const CovarianceVariable& z,
                                    const HyperParams& hp) {
  check_alpha(ws, alpha, hp);
  std::vector<Matrix> ws_out;
  if (ws.objective == ObjectiveKind::FeatureLearning) {
    if (z.mat.rows() != ws.dim)
      throw ArgumentError("recover_weights: covariance size mismatch");
    const Matrix m = shrinkage_transform(z.mat, hp.lambda1, hp.lambda2);
    for (int c = 0; c < hp.num_classes; ++c)
      ws_out.push_back(m * weighted_feature_sums(ws, alpha.col(c)));
  } else {
    if (hp.kernel.kind != KernelKind::Linear)
      throw StateError(
          "recover_weights: explicit weights need a linear kernel for "
          "relationship learning");
    if (z.mat.rows() != ws.tasks)
      throw ArgumentError("recover_weights: covariance size mismatch");
    const Matrix r = shrinkage_transform(z.mat, hp.lambda1, hp.lambda2);
    for (int c = 0; c < hp.num_classes; ++c)
      ws_out.push_back(weighted_feature_sums(ws, alpha.col(c)) * r);
  }
  return ws_out;
}

Matrix stack_labels(const WorkingSet& ws,
                    const std::vector<FractionalLabelMatrix>& labels) {
  if (static_cast<int>(labels.size()) != ws.tasks)
    throw ArgumentError("stack_labels: need one label matrix per task");
  const Eigen::Index c = labels[0].values.cols();
  Matrix y(ws.total, c);
  for (int i = 0; i < ws.tasks; ++i) {
    const auto& l = labels[static_cast<std::size_t>(i)];
    if (l.values.rows() != ws.rows(i) || l.values.cols() != c)
      throw ArgumentError("stack_labels: label matrix shape mismatch at task " +
                          std::to_string(i));
    y.middleRows(ws.offsets[static_cast<std::size_t>(i)], ws.rows(i)) =
        l.values;
  }
  return y;
}

double eval_primal_objective(const WorkingSet& ws, const Matrix& alpha,
                             const CovarianceVariable& z,
                             const std::vector<FractionalLabelMatrix>& labels,
                             const HyperParams& hp, double cov_epsilon) {
  check_alpha(ws, alpha, hp);
  const Matrix y = stack_labels(ws, labels);
  double value = 0.0;

  if (ws.objective == ObjectiveKind::FeatureLearning) {
    const Matrix dinv = pinv_epsilon(z.mat, cov_epsilon);
    const std::vector<Matrix> w = recover_weights(ws, alpha, z, hp);
    for (int c = 0; c < hp.num_classes; ++c) {
      const Matrix& wc = w[static_cast<std::size_t>(c)];
      value += 0.5 * hp.lambda1 * wc.squaredNorm();
      value += 0.5 * hp.lambda2 * (wc.transpose() * dinv * wc).trace();
      for (int i = 0; i < ws.tasks; ++i) {
        const Vector pred =
            ws.features[static_cast<std::size_t>(i)] * wc.col(i);
        const Vector resid =
            y.col(c).segment(ws.offsets[static_cast<std::size_t>(i)],
                             ws.rows(i)) -
            pred;
        value += resid.squaredNorm() / static_cast<double>(ws.rows(i));
      }
    }
    return value;
  }

  // Relationship learning in kernel form: W_c = Phi' A_c R, so every term
  // reduces to the m x m contraction G_c = A_c' K A_c.
  const Matrix r = shrinkage_transform(z.mat, hp.lambda1, hp.lambda2);
  const Matrix oinv = pinv_epsilon(z.mat, cov_epsilon);
  for (int c = 0; c < hp.num_classes; ++c) {
    const Matrix g = gram_contraction(ws, alpha.col(c));
    const Matrix rgr = r * g * r;
    value += 0.5 * hp.lambda1 * rgr.trace();
    value += 0.5 * hp.lambda2 * (oinv * rgr).trace();
    // Predictions f(p) = (R A_c' K)_{i_p, p}.
    Matrix t(ws.tasks, ws.total);
    for (int i = 0; i < ws.tasks; ++i) {
      t.row(i) = alpha.col(c)
                     .segment(ws.offsets[static_cast<std::size_t>(i)],
                              ws.rows(i))
                     .transpose() *
                 ws.base.middleRows(ws.offsets[static_cast<std::size_t>(i)],
                                    ws.rows(i));
    }
    const Matrix f = r * t;
    for (int i = 0; i < ws.tasks; ++i) {
      for (int j = 0; j < ws.rows(i); ++j) {
        const int p = ws.offsets[static_cast<std::size_t>(i)] + j;
        const double resid = y(p, c) - f(i, p);
        value += resid * resid / static_cast<double>(ws.rows(i));
      }
    }
  }
  return value;
}

double eval_primal_objective(const ModelState& state,
                             const std::vector<FractionalLabelMatrix>& labels,
                             const TaskDataset& data, const HyperParams& hp,
                             double cov_epsilon) {
  const WorkingSet ws = make_working_set(data, hp);
  return eval_primal_objective(ws, state.alpha, state.covariance, labels, hp,
                               cov_epsilon);
}

double dual_objective_value(const MultitaskGram& gram, const Matrix& alpha,
                            const Matrix& ytilde) {
  if (alpha.rows() != gram.tilde.rows() || alpha.rows() != ytilde.rows() ||
      alpha.cols() != ytilde.cols())
    throw ArgumentError("dual_objective_value: shape mismatch");
  double v = 0.0;
  for (Eigen::Index c = 0; c < alpha.cols(); ++c) {
    v += ytilde.col(c).dot(alpha.col(c)) -
         0.5 * alpha.col(c).dot(gram.tilde * alpha.col(c));
  }
  return v;
}

}  // namespace mtclust
