#include "commscape/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string_view>

#include "commscape/error.hpp"

namespace commscape {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

// Splits `line` on whitespace and parses every token as a non-negative id.
// Returns false for blank and '#' lines.
bool parse_id_line(std::string_view line, std::size_t line_no, std::vector<NodeId>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos < line.size() && is_space(line[pos])) ++pos;
  if (pos == line.size() || line[pos] == '#') return false;
  while (pos < line.size()) {
    std::size_t end = pos;
    while (end < line.size() && !is_space(line[end])) ++end;
    const std::string_view token = line.substr(pos, end - pos);
    NodeId value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw ParseError("expected an integer node id, got '" + std::string(token) + "'", line_no,
                       pos + 1);
    }
    if (value < 0) {
      throw ParseError("negative node id " + std::string(token), line_no, pos + 1);
    }
    out.push_back(value);
    pos = end;
    while (pos < line.size() && is_space(line[pos])) ++pos;
  }
  return true;
}

}  // namespace

Graph Graph::from_arcs(std::vector<NodeId> nodes, std::vector<std::pair<NodeId, NodeId>> arcs) {
  Graph g;
  for (const auto& [a, b] : arcs) {
    nodes.push_back(a);
    nodes.push_back(b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  g.ids_ = std::move(nodes);

  std::erase_if(arcs, [](const auto& arc) { return arc.first == arc.second; });
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  const std::size_t n = g.ids_.size();
  g.offsets_.assign(n + 1, 0);
  g.targets_.reserve(arcs.size());
  // Arcs are sorted by (source id, target id) and index order equals id
  // order, so one linear sweep fills CSR with ascending successor lists.
  std::size_t src = 0;
  for (const auto& [a, b] : arcs) {
    const NodeIndex ia = g.index_of(a);
    while (src < ia) g.offsets_[++src] = g.targets_.size();
    g.targets_.push_back(g.index_of(b));
  }
  while (src < n) g.offsets_[++src] = g.targets_.size();
  return g;
}

bool Graph::contains(NodeId id) const noexcept {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

NodeIndex Graph::index_of(NodeId id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) throw LookupError("unknown node id " + std::to_string(id));
  return static_cast<NodeIndex>(it - ids_.begin());
}

void Graph::set_labels(std::vector<std::int64_t> labels) {
  if (labels.size() != ids_.size()) throw ArgumentError("label count does not match node count");
  labels_ = std::move(labels);
}

Graph Graph::induced(std::span<const NodeIndex> members) const {
  std::vector<char> keep(node_count(), 0);
  for (NodeIndex v : members) keep.at(v) = 1;
  std::vector<NodeId> nodes;
  std::vector<std::pair<NodeId, NodeId>> arcs;
  for (NodeIndex v : members) {
    nodes.push_back(ids_[v]);
    for (NodeIndex w : successors(v)) {
      if (keep[w]) arcs.emplace_back(ids_[v], ids_[w]);
    }
  }
  Graph sub = from_arcs(std::move(nodes), std::move(arcs));
  if (labels_) {
    std::vector<std::int64_t> sub_labels(sub.node_count());
    for (NodeIndex v : members) sub_labels[sub.index_of(ids_[v])] = (*labels_)[v];
    sub.labels_ = std::move(sub_labels);
  }
  return sub;
}

Graph load_edge_list(std::istream& in, EdgeMode mode) {
  std::vector<NodeId> nodes;
  std::vector<std::pair<NodeId, NodeId>> arcs;
  std::vector<NodeId> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!parse_id_line(line, line_no, tokens)) continue;
    if (tokens.size() != 2) {
      throw ParseError("expected 2 node ids, found " + std::to_string(tokens.size()), line_no);
    }
    const NodeId a = tokens[0];
    const NodeId b = tokens[1];
    if (a == b) {
      nodes.push_back(a);
      continue;
    }
    arcs.emplace_back(a, b);
    if (mode == EdgeMode::kUndirected) arcs.emplace_back(b, a);
  }
  return Graph::from_arcs(std::move(nodes), std::move(arcs));
}

Graph load_edge_list_text(const std::string& text, EdgeMode mode) {
  std::istringstream in(text);
  return load_edge_list(in, mode);
}

GroundTruthCommunities load_ground_truth(std::istream& in) {
  GroundTruthCommunities truth;
  std::vector<NodeId> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!parse_id_line(line, line_no, tokens)) continue;
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    truth.communities.push_back(tokens);
  }
  return truth;
}

GroundTruthCommunities load_ground_truth_text(const std::string& text) {
  std::istringstream in(text);
  return load_ground_truth(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  std::vector<char> has_in(g.node_count(), 0);
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    for (NodeIndex w : g.successors(v)) has_in[w] = 1;
  }
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const auto succ = g.successors(v);
    if (succ.empty()) {
      // Isolated nodes need a placeholder line; pure sinks already appear as
      // some arc's target.
      if (!has_in[v]) out << g.id_of(v) << '\t' << g.id_of(v) << '\n';
      continue;
    }
    for (NodeIndex w : succ) out << g.id_of(v) << '\t' << g.id_of(w) << '\n';
  }
}

std::vector<NodeId> out_neighbors(const Graph& g, NodeId a) {
  const NodeIndex v = g.index_of(a);
  std::vector<NodeId> out;
  out.reserve(g.out_degree(v));
  for (NodeIndex w : g.successors(v)) out.push_back(g.id_of(w));
  return out;
}

GraphStats graph_stats(const Graph& g) {
  GraphStats s;
  s.n = g.node_count();
  s.m = g.arc_count();
  if (s.n == 0) return s;
  s.min_out_degree = g.out_degree(0);
  for (NodeIndex v = 0; v < s.n; ++v) {
    const std::size_t d = g.out_degree(v);
    s.min_out_degree = std::min(s.min_out_degree, d);
    s.max_out_degree = std::max(s.max_out_degree, d);
    if (d == 0) ++s.sink_count;
  }
  s.mean_out_degree = static_cast<double>(s.m) / static_cast<double>(s.n);
  return s;
}

std::vector<std::vector<NodeIndex>> weak_components(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<NodeIndex> parent(n);
  std::iota(parent.begin(), parent.end(), NodeIndex{0});
  auto find = [&](NodeIndex x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (NodeIndex v = 0; v < n; ++v) {
    for (NodeIndex w : g.successors(v)) {
      const NodeIndex rv = find(v);
      const NodeIndex rw = find(w);
      if (rv != rw) parent[std::max(rv, rw)] = std::min(rv, rw);
    }
  }
  std::vector<std::vector<NodeIndex>> components;
  std::vector<std::size_t> slot(n, SIZE_MAX);
  for (NodeIndex v = 0; v < n; ++v) {
    const NodeIndex r = find(v);
    if (slot[r] == SIZE_MAX) {
      slot[r] = components.size();
      components.emplace_back();
    }
    components[slot[r]].push_back(v);
  }
  return components;
}

}  // namespace commscape
