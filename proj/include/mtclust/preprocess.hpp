#ifndef MTCLUST_PREPROCESS_HPP
#define MTCLUST_PREPROCESS_HPP

#include "mtclust/types.hpp"

namespace mtclust {

/// Per-dimension [0,1] scaling with statistics pooled over all tasks;
/// constant dimensions map to 0.
TaskDataset normalize01(const TaskDataset& data);

/// PCA projection to `target_dim` dimensions: pooled mean-centering, top
/// principal directions of the pooled covariance.
TaskDataset pca_project(const TaskDataset& data, int target_dim);

/// Appends a constant-1 column to every task (bias emulation).
TaskDataset append_bias_column(const TaskDataset& data);

}  // namespace mtclust

#endif  // MTCLUST_PREPROCESS_HPP
