#include "commscape/planted.hpp"

#include <random>

#include "commscape/error.hpp"
#include "rng.hpp"

namespace commscape {

PlantedGraph planted_partition(std::size_t clusters, std::size_t size, double p_in, double p_out,
                               std::uint64_t seed) {
  if (clusters == 0 || size == 0) throw ArgumentError("clusters and size must be >= 1");
  if (!(p_in >= 0.0 && p_in <= 1.0) || !(p_out >= 0.0 && p_out <= 1.0)) {
    throw ArgumentError("edge probabilities must lie in [0, 1]");
  }
  const std::size_t n = clusters * size;
  std::mt19937_64 rng(seed);
  std::vector<NodeId> nodes(n);
  std::vector<std::pair<NodeId, NodeId>> arcs;
  for (std::size_t u = 0; u < n; ++u) {
    nodes[u] = static_cast<NodeId>(u);
    for (std::size_t v = u + 1; v < n; ++v) {
      const double p = (u / size == v / size) ? p_in : p_out;
      if (detail::unit_uniform(rng) < p) {
        arcs.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
        arcs.emplace_back(static_cast<NodeId>(v), static_cast<NodeId>(u));
      }
    }
  }
  PlantedGraph out;
  out.graph = Graph::from_arcs(std::move(nodes), std::move(arcs));
  std::vector<std::int64_t> labels(n);
  for (std::size_t c = 0; c < clusters; ++c) {
    std::vector<NodeId> members;
    for (std::size_t i = 0; i < size; ++i) {
      members.push_back(static_cast<NodeId>(c * size + i));
      labels[c * size + i] = static_cast<std::int64_t>(c);
    }
    out.truth.communities.push_back(std::move(members));
  }
  out.graph.set_labels(std::move(labels));
  return out;
}

}  // namespace commscape
