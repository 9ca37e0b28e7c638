#include "mtclust/kmeans.hpp"

#include <cmath>
#include <limits>

#include "mtclust/errors.hpp"
#include "mtclust/rng.hpp"

namespace mtclust {

namespace {

Matrix plus_plus_init(const Matrix& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Matrix centers(k, x.cols());
  centers.row(0) = x.row(static_cast<Eigen::Index>(
      rng.below(static_cast<std::uint64_t>(n))));
  Vector d2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total <= 0.0) {
      pick = static_cast<Eigen::Index>(rng.below(
          static_cast<std::uint64_t>(n)));
    } else {
      double target = rng.uniform01() * total;
      for (Eigen::Index j = 0; j < n; ++j) {
        target -= d2(j);
        if (target <= 0.0) {
          pick = j;
          break;
        }
      }
    }
    centers.row(c) = x.row(pick);
    d2 = d2.cwiseMin(
        (x.rowwise() - centers.row(c)).rowwise().squaredNorm());
  }
  return centers;
}

KmeansResult lloyd(const Matrix& x, Matrix centers, int max_iter) {
  const Eigen::Index n = x.rows();
  const int k = static_cast<int>(centers.rows());
  KmeansResult res;
  res.labels.assign(static_cast<std::size_t>(n), 0);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = false;
    for (Eigen::Index j = 0; j < n; ++j) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (x.row(j) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (res.labels[static_cast<std::size_t>(j)] != best) {
        res.labels[static_cast<std::size_t>(j)] = best;
        changed = true;
      }
    }
    if (!changed && it > 0) break;
    for (int c = 0; c < k; ++c) {
      Vector mean = Vector::Zero(x.cols());
      int count = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (res.labels[static_cast<std::size_t>(j)] == c) {
          mean += x.row(j).transpose();
          ++count;
        }
      }
      // Empty clusters keep their previous center.
      if (count > 0) centers.row(c) = mean.transpose() / count;
    }
  }
  res.centers = centers;
  res.wcss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    res.wcss +=
        (x.row(j) -
         centers.row(res.labels[static_cast<std::size_t>(j)]))
            .squaredNorm();
  return res;
}

}  // namespace

KmeansResult kmeans(const Matrix& points, int k, int restarts,
                    std::uint64_t seed, int max_iter) {
  if (k < 1) throw ArgumentError("kmeans: k < 1");
  if (points.rows() < k) throw ArgumentError("kmeans: fewer points than k");
  if (restarts < 1) throw ArgumentError("kmeans: restarts < 1");
  Rng rng(seed);
  KmeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    KmeansResult cand =
        lloyd(points, plus_plus_init(points, k, rng), max_iter);
    if (cand.wcss < best.wcss) best = std::move(cand);
  }
  return best;
}

}  // namespace mtclust
