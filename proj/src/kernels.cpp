#include "mtclust/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mtclust {

Matrix base_gram(const Matrix& x, const BaseKernelSpec& spec) {
  const Eigen::Index n = x.rows();
  if (n < 1) throw ArgumentError("base_gram: empty data");
  if (spec.kind == KernelKind::Linear) return x * x.transpose();
  if (!(spec.width > 0.0)) throw ArgumentError("base_gram: RBF width <= 0");
  const Vector sq = x.rowwise().squaredNorm();
  Matrix d2 = (-2.0 * x * x.transpose());
  d2.colwise() += sq;
  d2.rowwise() += sq.transpose();
  const double inv = 1.0 / (2.0 * spec.width * spec.width);
  Matrix g = (-d2.cwiseMax(0.0) * inv).array().exp();
  // Exact symmetry; the distance expansion can leave 1e-16 asymmetries.
  g = 0.5 * (g + g.transpose()).eval();
  return g;
}

Matrix base_gram(const TaskDataset& data, const BaseKernelSpec& spec) {
  return base_gram(data.stacked(), spec);
}

double default_rbf_width(const TaskDataset& data) {
  const Matrix x = data.stacked();
  const Eigen::Index n = x.rows();
  if (n < 2) throw ArgumentError("default_rbf_width: need at least 2 points");
  double sum = 0.0;
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = p + 1; q < n; ++q)
      sum += (x.row(p) - x.row(q)).norm();
  }
  return sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

FeatureMap factorize_gram(const Matrix& gram, int rank_cap) {
  if (gram.rows() != gram.cols())
    throw ArgumentError("factorize_gram: matrix not square");
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw ArgumentError("factorize_gram: matrix not symmetric");
  if (rank_cap < 1) throw ArgumentError("factorize_gram: rank_cap < 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.info() != Eigen::Success)
    throw NumericalError("factorize_gram: eigendecomposition failed");
  const Vector& evals = es.eigenvalues();  // ascending
  const double max_eig = std::max(evals.maxCoeff(), 0.0);
  if (evals.minCoeff() < -1e-6 * std::max(max_eig, 1.0))
    throw NumericalError("factorize_gram: matrix is not PSD (min eigenvalue " +
                         std::to_string(evals.minCoeff()) + ")");

  const Eigen::Index n = gram.rows();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = n - 1; i >= 0; --i) {  // descending
    if (evals(i) > 1e-10 && static_cast<int>(keep.size()) < rank_cap)
      keep.push_back(i);
  }
  FeatureMap fm;
  const Eigen::Index r = static_cast<Eigen::Index>(keep.size());
  fm.phi.resize(n, r);
  fm.eigenvalues.resize(r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const Eigen::Index i = keep[static_cast<std::size_t>(k)];
    fm.eigenvalues(k) = evals(i);
    fm.phi.col(k) = es.eigenvectors().col(i) * std::sqrt(evals(i));
  }
  double dropped = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    bool kept = std::find(keep.begin(), keep.end(), i) != keep.end();
    if (!kept) dropped += std::max(evals(i), 0.0);
  }
  fm.truncation_error = dropped;
  return fm;
}

Matrix shrinkage_transform(const Matrix& cov, double lambda1,
                           double lambda2) {
  if (!(lambda2 > 0.0))
    throw ArgumentError("shrinkage_transform: lambda2 must be positive");
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  if (es.info() != Eigen::Success)
    throw NumericalError("shrinkage_transform: eigendecomposition failed");
  Vector scaled = es.eigenvalues().cwiseMax(0.0);
  for (Eigen::Index i = 0; i < scaled.size(); ++i)
    scaled(i) = scaled(i) / (lambda1 * scaled(i) + lambda2);
  return es.eigenvectors() * scaled.asDiagonal() *
         es.eigenvectors().transpose();
}

namespace {

Vector lambda_diag_from(const std::vector<int>& rows_per_task) {
  int total = 0;
  for (int n : rows_per_task) total += n;
  Vector diag(total);
  int at = 0;
  for (int n : rows_per_task) {
    diag.segment(at, n).setConstant(static_cast<double>(n));
    at += n;
  }
  return diag;
}

}  // namespace

MultitaskGram multitask_gram_feature(const std::vector<Matrix>& features,
                                     const CovarianceVariable& d,
                                     const HyperParams& hp) {
  if (features.empty())
    throw ArgumentError("multitask_gram_feature: no tasks");
  const Eigen::Index dim = features[0].cols();
  if (d.mat.rows() != dim || d.mat.cols() != dim)
    throw ArgumentError("multitask_gram_feature: D is " +
                        std::to_string(d.mat.rows()) + "x" +
                        std::to_string(d.mat.cols()) + ", expected " +
                        std::to_string(dim) + "x" + std::to_string(dim));
  const Matrix m = shrinkage_transform(d.mat, hp.lambda1, hp.lambda2);

  std::vector<int> rows;
  int total = 0;
  for (const auto& x : features) {
    if (x.cols() != dim)
      throw ArgumentError("multitask_gram_feature: dimension mismatch");
    rows.push_back(static_cast<int>(x.rows()));
    total += static_cast<int>(x.rows());
  }
  MultitaskGram g;
  g.objective = ObjectiveKind::FeatureLearning;
  g.covariance_snapshot = d.mat;
  g.lambda_diag = lambda_diag_from(rows);
  g.tilde = Matrix::Zero(total, total);
  int at = 0;
  for (const auto& x : features) {
    const Eigen::Index n = x.rows();
    Matrix block = x * m * x.transpose();
    g.tilde.block(at, at, n, n) = 0.5 * (block + block.transpose());
    at += static_cast<int>(n);
  }
  g.tilde.diagonal() += 0.5 * g.lambda_diag;
  return g;
}

MultitaskGram multitask_gram_relationship(const Matrix& gram_base,
                                          const CovarianceVariable& omega,
                                          const std::vector<int>& task_index,
                                          const HyperParams& hp) {
  const Eigen::Index n = gram_base.rows();
  if (gram_base.cols() != n)
    throw ArgumentError("multitask_gram_relationship: gram not square");
  if (static_cast<Eigen::Index>(task_index.size()) != n)
    throw ArgumentError("multitask_gram_relationship: task index length");
  const int m = omega.size();
  std::vector<int> rows(static_cast<std::size_t>(m), 0);
  for (int t : task_index) {
    if (t < 0 || t >= m)
      throw ArgumentError("multitask_gram_relationship: task id out of range");
    ++rows[static_cast<std::size_t>(t)];
  }
  const Matrix r = shrinkage_transform(omega.mat, hp.lambda1, hp.lambda2);

  MultitaskGram g;
  g.objective = ObjectiveKind::RelationshipLearning;
  g.covariance_snapshot = omega.mat;
  g.lambda_diag.resize(n);
  g.tilde.resize(n, n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const int ip = task_index[static_cast<std::size_t>(p)];
    g.lambda_diag(p) =
        static_cast<double>(rows[static_cast<std::size_t>(ip)]);
    for (Eigen::Index q = 0; q <= p; ++q) {
      const double v =
          r(ip, task_index[static_cast<std::size_t>(q)]) * gram_base(p, q);
      g.tilde(p, q) = v;
      g.tilde(q, p) = v;
    }
  }
  g.tilde.diagonal() += 0.5 * g.lambda_diag;
  return g;
}

}  // namespace mtclust
