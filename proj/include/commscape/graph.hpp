#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace commscape {

using NodeId = std::int64_t;
/// Dense 0-based position of a node inside one Graph.
using NodeIndex = std::uint32_t;

enum class EdgeMode { kDirected, kUndirected };

/// Immutable directed graph in CSR form.
///
/// External node ids are arbitrary non-negative integers; they are mapped to
/// dense indices in ascending id order, so sorting by index and sorting by id
/// agree. Successor lists are ascending and duplicate-free, and self-loops are
/// never stored (a node that only appears in a self-loop is still a node).
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an explicit node set and arc list. Arcs are
  /// deduplicated and self-loops dropped; every arc endpoint is added to the
  /// node set.
  static Graph from_arcs(std::vector<NodeId> nodes, std::vector<std::pair<NodeId, NodeId>> arcs);

  std::size_t node_count() const noexcept { return ids_.size(); }
  std::size_t arc_count() const noexcept { return targets_.size(); }

  std::span<const NodeId> node_ids() const noexcept { return ids_; }
  NodeId id_of(NodeIndex v) const { return ids_.at(v); }
  bool contains(NodeId id) const noexcept;
  /// Throws LookupError for unknown ids.
  NodeIndex index_of(NodeId id) const;

  /// Successors of dense index `v`, ascending.
  std::span<const NodeIndex> successors(NodeIndex v) const noexcept {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t out_degree(NodeIndex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  /// Optional ground-truth community id per dense index.
  const std::optional<std::vector<std::int64_t>>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<std::int64_t> labels);

  /// Subgraph induced by `members` (dense indices of this graph), keeping the
  /// original external ids.
  Graph induced(std::span<const NodeIndex> members) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<NodeId> ids_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeIndex> targets_;
  std::optional<std::vector<std::int64_t>> labels_;
};

struct GroundTruthCommunities {
  /// Each community is ascending and duplicate-free. Communities may overlap.
  std::vector<std::vector<NodeId>> communities;
  std::size_t count() const noexcept { return communities.size(); }
};

struct GraphStats {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t min_out_degree = 0;
  std::size_t max_out_degree = 0;
  double mean_out_degree = 0.0;
  std::size_t sink_count = 0;
};

/// Reads SNAP edge-list text. '#' lines and blank lines are skipped; every
/// other line must hold exactly two non-negative integers.
Graph load_edge_list(std::istream& in, EdgeMode mode);
Graph load_edge_list_text(const std::string& text, EdgeMode mode);

/// Reads SNAP community text: one community per non-empty line.
GroundTruthCommunities load_ground_truth(std::istream& in);
GroundTruthCommunities load_ground_truth_text(const std::string& text);

/// Writes every arc as "a<TAB>b". Isolated nodes are emitted as self-loop
/// lines so that reloading in directed mode reproduces the same Graph.
void write_edge_list(std::ostream& out, const Graph& g);

/// Sorted successor ids of node `a`; LookupError if `a` is not in the graph.
std::vector<NodeId> out_neighbors(const Graph& g, NodeId a);

GraphStats graph_stats(const Graph& g);

/// Weakly connected components as ascending dense-index lists, ordered by
/// their smallest member.
std::vector<std::vector<NodeIndex>> weak_components(const Graph& g);

}  // namespace commscape
