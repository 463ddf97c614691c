#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "commscape/graph.hpp"

namespace commscape::fixtures {

inline Graph triangle() {
  return Graph::from_arcs({}, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0}});
}

inline Graph path3() { return Graph::from_arcs({}, {{0, 1}, {1, 0}, {1, 2}, {2, 1}}); }

inline Graph two_triangles() {
  return Graph::from_arcs({}, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {0, 2}, {2, 0},
                               {3, 4}, {4, 3}, {4, 5}, {5, 4}, {3, 5}, {5, 3}});
}

/// Directed graph on ids 0..n-1 where each ordered pair is an arc with
/// probability `density`, plus a random spanning path so it is weakly connected.
inline Graph random_connected(std::size_t n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution arc(density);
  std::bernoulli_distribution flip(0.5);
  std::vector<NodeId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<NodeId>(i);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::pair<NodeId, NodeId>> arcs;
  for (std::size_t i = 1; i < n; ++i) {
    if (flip(rng)) arcs.emplace_back(order[i - 1], order[i]);
    else arcs.emplace_back(order[i], order[i - 1]);
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && arc(rng)) arcs.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
  }
  std::vector<NodeId> nodes(order);
  return Graph::from_arcs(std::move(nodes), std::move(arcs));
}

/// Every weakly connected directed graph on n nodes (n <= 4 keeps this small).
inline std::vector<Graph> all_connected_digraphs(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> slots;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b) slots.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
  }
  std::vector<NodeId> nodes(n);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = static_cast<NodeId>(i);
  std::vector<Graph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::vector<std::pair<NodeId, NodeId>> arcs;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (mask >> s & 1) arcs.push_back(slots[s]);
    }
    Graph g = Graph::from_arcs(nodes, std::move(arcs));
    if (weak_components(g).size() == 1) out.push_back(std::move(g));
  }
  return out;
}

/// Walk counts by plain recursion over adjacency, independent of the library
/// kernels: result[l-1][b] = number of length-l walks from `src` to b.
inline std::vector<std::vector<std::uint64_t>> brute_walk_counts(const Graph& g, NodeIndex src,
                                                                 int p_max) {
  std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(p_max),
                                                 std::vector<std::uint64_t>(g.node_count(), 0));
  std::function<void(NodeIndex, int)> walk = [&](NodeIndex v, int len) {
    if (len == p_max) return;
    for (NodeIndex w : g.successors(v)) {
      ++counts[static_cast<std::size_t>(len)][w];
      walk(w, len + 1);
    }
  };
  walk(src, 0);
  return counts;
}

/// H(src, b) from brute-force counts with weights `w`.
inline double brute_access(const Graph& g, NodeIndex src, NodeIndex b, const std::vector<double>& w) {
  const auto counts = brute_walk_counts(g, src, static_cast<int>(w.size()));
  double h = 0.0;
  for (std::size_t l = 0; l < w.size(); ++l) {
    std::uint64_t total = 0;
    for (auto c : counts[l]) total += c;
    if (total > 0) h += w[l] * static_cast<double>(counts[l][b]) / static_cast<double>(total);
  }
  return h;
}

}  // namespace commscape::fixtures
