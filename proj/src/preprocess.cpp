#include "mtclust/preprocess.hpp"

#include <string>

namespace mtclust {

namespace {

TaskDataset rebuild(const TaskDataset& data,
                    const std::vector<Matrix>& features) {
  std::vector<ObservationBlock> blocks;
  for (int i = 0; i < data.num_tasks(); ++i) {
    ObservationBlock b;
    b.task_id = i;
    b.features = features[static_cast<std::size_t>(i)];
    b.truth = data.task(i).truth;
    blocks.push_back(std::move(b));
  }
  return TaskDataset(std::move(blocks));
}

}  // namespace

TaskDataset normalize01(const TaskDataset& data) {
  const Matrix pooled = data.stacked();
  const Vector lo = pooled.colwise().minCoeff();
  const Vector hi = pooled.colwise().maxCoeff();
  std::vector<Matrix> out;
  for (int i = 0; i < data.num_tasks(); ++i) {
    Matrix x = data.task(i).features;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const double range = hi(c) - lo(c);
      if (range > 0.0)
        x.col(c) = (x.col(c).array() - lo(c)) / range;
      else
        x.col(c).setZero();
    }
    out.push_back(std::move(x));
  }
  return rebuild(data, out);
}

TaskDataset pca_project(const TaskDataset& data, int target_dim) {
  if (target_dim < 1 || target_dim > data.dim())
    throw ArgumentError("pca_project: target_dim must be in [1, d], got " +
                        std::to_string(target_dim));
  Matrix pooled = data.stacked();
  const Vector mean = pooled.colwise().mean();
  pooled.rowwise() -= mean.transpose();
  const Matrix cov =
      pooled.transpose() * pooled / static_cast<double>(pooled.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  if (es.info() != Eigen::Success)
    throw NumericalError("pca_project: eigendecomposition failed");
  // Eigenvalues ascend; take the trailing target_dim directions.
  Matrix proj(data.dim(), target_dim);
  for (int k = 0; k < target_dim; ++k)
    proj.col(k) = es.eigenvectors().col(data.dim() - 1 - k);

  std::vector<Matrix> out;
  for (int i = 0; i < data.num_tasks(); ++i) {
    Matrix x = data.task(i).features;
    x.rowwise() -= mean.transpose();
    out.push_back(x * proj);
  }
  return rebuild(data, out);
}

TaskDataset append_bias_column(const TaskDataset& data) {
  std::vector<Matrix> out;
  for (int i = 0; i < data.num_tasks(); ++i) {
    const Matrix& x = data.task(i).features;
    Matrix y(x.rows(), x.cols() + 1);
    y.leftCols(x.cols()) = x;
    y.col(x.cols()).setOnes();
    out.push_back(std::move(y));
  }
  return rebuild(data, out);
}

}  // namespace mtclust
