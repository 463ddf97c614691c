#pragma once

#include <span>
#include <vector>

#include "commscape/similarity.hpp"

namespace commscape::detail {

/// Min-max normalizes raw access values laid out node-by-column; entries
/// where the row node equals the column node are excluded and set to 0.
FeatureSpacingMatrix normalize(const Graph& g, std::span<const NodeIndex> columns,
                               std::vector<double> h);

}  // namespace commscape::detail
