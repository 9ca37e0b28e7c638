#ifndef MTCLUST_SYNTHETIC_HPP
#define MTCLUST_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include "mtclust/types.hpp"

namespace mtclust {

/// Binary-class Gaussian generator: per task, class and dimension the mean
/// is drawn uniformly from [0,1] and the variance uniformly from [0.5, 5].
struct SyntheticSpec {
  int num_tasks = 3;
  int rows_per_task = 100;  // must be even; classes are balanced
  int dim = 3;
  std::uint64_t seed = 0;
};

TaskDataset generate_synthetic(const SyntheticSpec& spec);

/// Multitask problem sampled from a labeled source: two disjoint class
/// groups, `repeats` tasks per group, `count` observations per class drawn
/// without replacement within a task. Task ids are group-major.
struct GroupedTaskSpec {
  std::vector<int> group_a;
  std::vector<int> group_b;
  int count = 20;
  int repeats = 3;
  std::uint64_t seed = 0;
};

TaskDataset generate_grouped_tasks(const TaskDataset& source,
                                   const GroupedTaskSpec& spec);

/// Two groups of binary-class tasks whose class means are related within a
/// group: each group draws class means once, and every task in the group
/// jitters them. Groups are drawn independently.
struct RelatedGroupsSpec {
  int tasks_per_group = 3;
  int rows_per_task = 40;  // even, balanced classes
  int dim = 2;
  double mean_scale = 1.0;     // spread of the group-level class means
  double task_jitter = 0.15;   // task-level perturbation of the means
  double noise = 0.45;         // observation standard deviation
  std::uint64_t seed = 0;
};

TaskDataset generate_related_groups(const RelatedGroupsSpec& spec);

}  // namespace mtclust

#endif  // MTCLUST_SYNTHETIC_HPP
