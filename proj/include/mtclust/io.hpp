#ifndef MTCLUST_IO_HPP
#define MTCLUST_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "mtclust/types.hpp"

namespace mtclust {

/// Loads a multitask dataset from a JSON manifest:
///   {"tasks": [{"file": "t0.csv", "has_labels": true}, ...]}
/// Each file is delimited numeric text, one observation per row; a flagged
/// final integer column holds truth labels. Relative paths resolve against
/// the manifest directory.
TaskDataset ingest(const std::filesystem::path& manifest_path);

/// Writes `content` atomically (temp file + rename in the same directory).
void atomic_write(const std::filesystem::path& path,
                  const std::string& content);

std::string labels_to_csv(const std::vector<int>& labels);
std::string matrix_to_csv(const Matrix& m);

}  // namespace mtclust

#endif  // MTCLUST_IO_HPP
