#pragma once

#include <cstddef>
#include <cstdint>

#include "commscape/graph.hpp"

namespace commscape {

struct PlantedGraph {
  Graph graph;  // undirected (both arcs per edge)
  GroundTruthCommunities truth;
};

/// Planted-partition graph: `clusters` blocks of `size` consecutive node ids;
/// each unordered pair is joined with probability p_in inside a block and
/// p_out across blocks. Throws ArgumentError for clusters or size of 0 or
/// probabilities outside [0, 1].
PlantedGraph planted_partition(std::size_t clusters, std::size_t size, double p_in, double p_out,
                               std::uint64_t seed);

}  // namespace commscape
