#ifndef MTCLUST_METRICS_HPP
#define MTCLUST_METRICS_HPP

#include <vector>

#include "mtclust/types.hpp"

namespace mtclust {

/// Normalized mutual information with geometric-mean normalization and
/// natural-log entropies. Defined as 1 when both labelings are constant
/// and equal as partitions, 0 when either entropy vanishes otherwise.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

struct NmiReport {
  std::vector<double> per_task;
  double macro_average = 0.0;
};

NmiReport nmi_report(const std::vector<std::vector<int>>& pred,
                     const std::vector<std::vector<int>>& truth);

}  // namespace mtclust

#endif  // MTCLUST_METRICS_HPP
