// Serial reference path for walk counting and the full similarity matrix.
// These follow the queue formulation literally and are only used as oracles.

#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>

#include "commscape/error.hpp"
#include "commscape/similarity.hpp"
#include "similarity_internal.hpp"

namespace commscape::reference {
namespace {

// Visits walks from `source` in queue order until `visit` returns false.
void for_each_walk(const Graph& g, NodeIndex source, int p_max,
                   const std::function<bool(const std::vector<NodeIndex>&)>& visit) {
  std::deque<std::vector<NodeIndex>> queue;
  for (NodeIndex b : g.successors(source)) queue.push_back({source, b});
  while (!queue.empty()) {
    std::vector<NodeIndex> walk = std::move(queue.front());
    queue.pop_front();
    if (!visit(walk)) return;
    if (static_cast<int>(walk.size()) - 1 >= p_max) continue;
    for (NodeIndex b : g.successors(walk.back())) {
      auto extended = walk;
      extended.push_back(b);
      queue.push_back(std::move(extended));
    }
  }
}

}  // namespace

WalkInventory enumerate_walks(const Graph& g, NodeId source, int p_max) {
  if (p_max < 1) throw ArgumentError("walk length must be >= 1");
  const NodeIndex a = g.index_of(source);
  const std::size_t n = g.node_count();
  std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(p_max),
                                                 std::vector<std::uint64_t>(n, 0));
  for_each_walk(g, a, p_max, [&](const std::vector<NodeIndex>& walk) {
    ++counts[walk.size() - 2][walk.back()];
    return true;
  });

  WalkInventory inv;
  inv.source = a;
  inv.p_max = p_max;
  for (const auto& layer : counts) {
    inv.counts.emplace_back(layer.begin(), layer.end());
    inv.totals.push_back(static_cast<double>(std::accumulate(layer.begin(), layer.end(),
                                                             std::uint64_t{0})));
  }
  return inv;
}

std::vector<std::vector<NodeId>> list_walks(const Graph& g, NodeId source, int p_max,
                                            std::size_t limit) {
  if (p_max < 1) throw ArgumentError("walk length must be >= 1");
  std::vector<std::vector<NodeId>> out;
  if (limit == 0) return out;
  for_each_walk(g, g.index_of(source), p_max, [&](const std::vector<NodeIndex>& walk) {
    std::vector<NodeId> ids;
    ids.reserve(walk.size());
    for (NodeIndex v : walk) ids.push_back(g.id_of(v));
    out.push_back(std::move(ids));
    return out.size() < limit;
  });
  return out;
}

FeatureSpacingMatrix feature_spacing_matrix(const Graph& g, const WeightScheme& ws) {
  const std::size_t n = g.node_count();
  if (n < 2) throw ArgumentError("feature spacing needs at least 2 nodes");
  std::vector<double> h(n * n, 0.0);
  for (NodeIndex a = 0; a < n; ++a) {
    const WalkInventory inv = enumerate_walks(g, g.id_of(a), ws.p_max());
    for (NodeIndex b = 0; b < n; ++b) {
      if (b != a) h[a * n + b] = access_value(inv, b, ws);
    }
  }
  std::vector<NodeIndex> all(n);
  std::iota(all.begin(), all.end(), NodeIndex{0});
  return detail::normalize(g, all, std::move(h));
}

}  // namespace commscape::reference
