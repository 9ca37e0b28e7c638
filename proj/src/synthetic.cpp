#include "mtclust/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "mtclust/rng.hpp"

namespace mtclust {

TaskDataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.num_tasks < 1 || spec.dim < 1)
    throw ArgumentError("generate_synthetic: bad shape");
  if (spec.rows_per_task < 2 || spec.rows_per_task % 2 != 0)
    throw ArgumentError(
        "generate_synthetic: rows_per_task must be even and >= 2");
  Rng rng(spec.seed);
  const int half = spec.rows_per_task / 2;
  std::vector<ObservationBlock> blocks;
  for (int i = 0; i < spec.num_tasks; ++i) {
    ObservationBlock b;
    b.task_id = i;
    b.features.resize(spec.rows_per_task, spec.dim);
    b.truth = std::vector<int>(static_cast<std::size_t>(spec.rows_per_task));
    for (int cls = 0; cls < 2; ++cls) {
      std::vector<double> mean(static_cast<std::size_t>(spec.dim));
      std::vector<double> sd(static_cast<std::size_t>(spec.dim));
      for (int k = 0; k < spec.dim; ++k) {
        mean[static_cast<std::size_t>(k)] = rng.uniform01();
        sd[static_cast<std::size_t>(k)] = std::sqrt(rng.uniform(0.5, 5.0));
      }
      for (int j = 0; j < half; ++j) {
        const int row = cls * half + j;
        (*b.truth)[static_cast<std::size_t>(row)] = cls;
        for (int k = 0; k < spec.dim; ++k) {
          b.features(row, k) = rng.normal(mean[static_cast<std::size_t>(k)],
                                          sd[static_cast<std::size_t>(k)]);
        }
      }
    }
    blocks.push_back(std::move(b));
  }
  return TaskDataset(std::move(blocks));
}

namespace {

std::vector<int> rows_of_class(const TaskDataset& source, int cls) {
  std::vector<int> rows;
  for (int i = 0; i < source.num_tasks(); ++i) {
    const auto& b = source.task(i);
    if (!b.truth)
      throw ArgumentError("generate_grouped_tasks: source lacks labels");
    for (std::size_t j = 0; j < b.truth->size(); ++j) {
      if ((*b.truth)[j] == cls)
        rows.push_back(source.offset(i) + static_cast<int>(j));
    }
  }
  return rows;
}

}  // namespace

TaskDataset generate_grouped_tasks(const TaskDataset& source,
                                   const GroupedTaskSpec& spec) {
  if (spec.group_a.empty() || spec.group_b.empty())
    throw ArgumentError("generate_grouped_tasks: empty group");
  if (spec.group_a.size() != spec.group_b.size())
    throw ArgumentError("generate_grouped_tasks: groups must share a size");
  std::set<int> seen(spec.group_a.begin(), spec.group_a.end());
  for (int c : spec.group_b) {
    if (!seen.insert(c).second)
      throw ArgumentError("generate_grouped_tasks: groups are not disjoint");
  }
  if (spec.count < 1 || spec.repeats < 1)
    throw ArgumentError("generate_grouped_tasks: bad count/repeats");

  const Matrix pooled = source.stacked();
  Rng rng(spec.seed);
  std::vector<ObservationBlock> blocks;
  for (const auto* group : {&spec.group_a, &spec.group_b}) {
    for (int rep = 0; rep < spec.repeats; ++rep) {
      ObservationBlock b;
      const int n = spec.count * static_cast<int>(group->size());
      b.features.resize(n, source.dim());
      b.truth = std::vector<int>(static_cast<std::size_t>(n));
      int row = 0;
      for (std::size_t g = 0; g < group->size(); ++g) {
        std::vector<int> pool = rows_of_class(source, (*group)[g]);
        if (static_cast<int>(pool.size()) < spec.count)
          throw ArgumentError(
              "generate_grouped_tasks: class " +
              std::to_string((*group)[g]) + " has only " +
              std::to_string(pool.size()) + " observations, need " +
              std::to_string(spec.count));
        rng.shuffle(pool);
        for (int t = 0; t < spec.count; ++t, ++row) {
          b.features.row(row) = pooled.row(pool[static_cast<std::size_t>(t)]);
          (*b.truth)[static_cast<std::size_t>(row)] = static_cast<int>(g);
        }
      }
      blocks.push_back(std::move(b));
    }
  }
  return TaskDataset(std::move(blocks));
}

TaskDataset generate_related_groups(const RelatedGroupsSpec& spec) {
  if (spec.tasks_per_group < 1 || spec.dim < 1)
    throw ArgumentError("generate_related_groups: bad shape");
  if (spec.rows_per_task < 2 || spec.rows_per_task % 2 != 0)
    throw ArgumentError(
        "generate_related_groups: rows_per_task must be even");
  Rng rng(spec.seed);
  const int half = spec.rows_per_task / 2;
  std::vector<ObservationBlock> blocks;
  for (int g = 0; g < 2; ++g) {
    Matrix group_means(2, spec.dim);
    for (int cls = 0; cls < 2; ++cls) {
      for (int k = 0; k < spec.dim; ++k)
        group_means(cls, k) = spec.mean_scale * rng.normal();
    }
    for (int t = 0; t < spec.tasks_per_group; ++t) {
      ObservationBlock b;
      b.features.resize(spec.rows_per_task, spec.dim);
      b.truth = std::vector<int>(static_cast<std::size_t>(spec.rows_per_task));
      for (int cls = 0; cls < 2; ++cls) {
        Vector mean(spec.dim);
        for (int k = 0; k < spec.dim; ++k)
          mean(k) = group_means(cls, k) + spec.task_jitter * rng.normal();
        for (int j = 0; j < half; ++j) {
          const int row = cls * half + j;
          (*b.truth)[static_cast<std::size_t>(row)] = cls;
          for (int k = 0; k < spec.dim; ++k)
            b.features(row, k) = mean(k) + spec.noise * rng.normal();
        }
      }
      blocks.push_back(std::move(b));
    }
  }
  return TaskDataset(std::move(blocks));
}

}  // namespace mtclust
