#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace commscape::catalog {

/// Published size of a SNAP network with ground-truth communities.
struct DatasetInfo {
  std::string_view name;
  std::int64_t nodes;
  std::int64_t edges;
  std::int64_t communities;
};

/// Published community counts: ground truth, found, and the stated error.
struct PublishedCount {
  std::string_view name;
  std::int64_t true_count;
  std::int64_t found_count;
  double error_pct;
};

std::span<const DatasetInfo> snap_datasets();
const DatasetInfo* find_dataset(std::string_view name);

std::span<const PublishedCount> published_counts();

/// Average error stated alongside the per-dataset table.
inline constexpr double kPublishedAverageErrorPct = 9.84;
/// Average error stated in the closing summary; disagrees with the table.
inline constexpr double kPublishedSummaryAverageErrorPct = 9.82;

}  // namespace commscape::catalog
