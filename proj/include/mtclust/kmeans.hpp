#ifndef MTCLUST_KMEANS_HPP
#define MTCLUST_KMEANS_HPP

#include <cstdint>
#include <vector>

#include "mtclust/types.hpp"

namespace mtclust {

struct KmeansResult {
  std::vector<int> labels;
  Matrix centers;  // k x d
  double wcss = 0.0;
};

/// Lloyd iterations from k-means++ starts; best of `restarts` by
/// within-cluster sum of squares. Deterministic for a given seed.
KmeansResult kmeans(const Matrix& points, int k, int restarts,
                    std::uint64_t seed, int max_iter = 100);

}  // namespace mtclust

#endif  // MTCLUST_KMEANS_HPP
