#include "commscape/community.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "commscape/error.hpp"
#include "commscape/io.hpp"
#include "json.hpp"
#include "rng.hpp"

namespace commscape {
namespace {

double round2(double x) { return std::round(x * 100.0) / 100.0; }

// Squared error of `rows` around their mean.
double cluster_sse(const PointSet& ps, std::span<const std::size_t> rows) {
  const std::size_t d = ps.dims();
  std::vector<double> mean(d, 0.0);
  for (std::size_t r : rows) {
    const auto x = ps.row(r);
    for (std::size_t c = 0; c < d; ++c) mean[c] += x[c];
  }
  for (double& m : mean) m /= static_cast<double>(rows.size());
  double sse = 0.0;
  for (std::size_t r : rows) {
    const auto x = ps.row(r);
    for (std::size_t c = 0; c < d; ++c) sse += (x[c] - mean[c]) * (x[c] - mean[c]);
  }
  return sse;
}

void append_component(Partition& out, const std::vector<NodeId>& ids, const std::vector<int>& labels) {
  const Partition part = Partition::from_labels(ids, labels);
  out.communities.insert(out.communities.end(), part.communities.begin(), part.communities.end());
}

}  // namespace

// Partition

Partition Partition::from_labels(std::span<const NodeId> ids, std::span<const int> labels) {
  if (ids.size() != labels.size()) throw ArgumentError("one label per node required");
  std::map<int, std::vector<NodeId>> groups;
  for (std::size_t i = 0; i < ids.size(); ++i) groups[labels[i]].push_back(ids[i]);
  Partition p;
  for (auto& [label, members] : groups) p.communities.push_back(std::move(members));
  p.canonicalize();
  return p;
}

void Partition::canonicalize() {
  for (auto& c : communities) std::sort(c.begin(), c.end());
  std::sort(communities.begin(), communities.end(), [](const auto& a, const auto& b) {
    if (a.empty() || b.empty()) return a.size() < b.size();
    return a.front() < b.front();
  });
}

std::string PartitionViolation::message() const {
  const std::string where = " (community " + std::to_string(community) + ")";
  switch (kind) {
    case Kind::kEmptyCommunity:
      return "empty community" + where;
    case Kind::kUnknownNode:
      return "node " + std::to_string(*node) + " is not in the graph" + where;
    case Kind::kOverlap:
      return "node " + std::to_string(*node) + " appears in more than one community" + where;
    case Kind::kUncovered:
      return "node " + std::to_string(*node) + " is not covered by any community";
  }
  return "unknown violation";
}

std::optional<PartitionViolation> validate_partition(const Partition& p, const Graph& g) {
  using Kind = PartitionViolation::Kind;
  std::vector<char> seen(g.node_count(), 0);
  for (std::size_t c = 0; c < p.communities.size(); ++c) {
    if (p.communities[c].empty()) return PartitionViolation{Kind::kEmptyCommunity, std::nullopt, c};
    for (NodeId id : p.communities[c]) {
      if (!g.contains(id)) return PartitionViolation{Kind::kUnknownNode, id, c};
      char& s = seen[g.index_of(id)];
      if (s) return PartitionViolation{Kind::kOverlap, id, c};
      s = 1;
    }
  }
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    if (!seen[v]) return PartitionViolation{Kind::kUncovered, g.id_of(v), 0};
  }
  return std::nullopt;
}

// Embedding

std::vector<NodeId> select_landmarks(const Graph& g, std::size_t count, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (count == 0) throw ArgumentError("landmark count must be >= 1");
  if (count >= n) return {g.node_ids().begin(), g.node_ids().end()};
  std::vector<NodeIndex> order(n);
  std::iota(order.begin(), order.end(), NodeIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
    return g.out_degree(a) > g.out_degree(b);
  });
  std::mt19937_64 rng(detail::mix_seed(seed, 0x1a4d));
  std::vector<NodeId> picks;
  picks.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const std::size_t lo = s * n / count;
    const std::size_t hi = (s + 1) * n / count;
    const auto offset = static_cast<std::size_t>(detail::unit_uniform(rng) * static_cast<double>(hi - lo));
    picks.push_back(g.id_of(order[lo + offset]));
  }
  std::sort(picks.begin(), picks.end());
  return picks;
}

PointSet embed_nodes(const Graph& g, const WeightScheme& ws, std::size_t landmark_count,
                     std::uint64_t seed, const SimilarityOptions& options) {
  const std::size_t n = g.node_count();
  if (n == 0) throw ArgumentError("cannot embed an empty graph");
  if (landmark_count == 0) throw ArgumentError("landmark count must be >= 1");
  std::vector<std::string> ids;
  ids.reserve(n);
  for (NodeId id : g.node_ids()) ids.push_back(std::to_string(id));
  if (n == 1) return PointSet(1, {0.0}, std::move(ids));

  const FeatureSpacingMatrix m =
      landmark_count >= n
          ? feature_spacing_matrix(g, ws, options)
          : feature_spacing_to_landmarks(g, ws, select_landmarks(g, landmark_count, seed), options);
  return PointSet(m.cols(), m.values, std::move(ids));
}

// Detection

WeightScheme resolve_weights(const DetectConfig& config, std::size_t n) {
  if (config.weights) {
    if (config.p_max && *config.p_max != static_cast<int>(config.weights->size())) {
      throw ArgumentError("p_max disagrees with the number of weights");
    }
    return WeightScheme(*config.weights);
  }
  const int p = config.p_max ? *config.p_max : capped_walk_length(n, kDefaultWalkLength);
  return default_weights(p);
}

bool accept_split(double parent_sse, double children_sse, std::size_t cluster_size,
                  std::size_t dims, std::size_t n_total, double lambda) {
  if (!(parent_sse > 0.0) || cluster_size < 2) return false;
  // Parent squared error measured in units of its own per-coordinate variance
  // is cluster_size * dims; the gain is the explained share of that.
  const double unit = parent_sse / (static_cast<double>(cluster_size) * static_cast<double>(dims));
  const double gain = (parent_sse - children_sse) / unit;
  const double penalty = lambda * static_cast<double>(dims) * std::log(static_cast<double>(n_total));
  return gain > penalty;
}

std::vector<int> bisect_points(const PointSet& points, const DetectConfig& config) {
  const std::size_t n = points.size();
  std::vector<int> labels(n, 0);
  struct Pending {
    std::vector<std::size_t> rows;
    int depth;
  };
  std::deque<Pending> queue;
  std::vector<std::vector<std::size_t>> done;
  {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    queue.push_back({std::move(all), 0});
  }
  std::uint64_t attempt = 0;
  while (!queue.empty()) {
    Pending cur = std::move(queue.front());
    queue.pop_front();
    if (cur.rows.size() < 2 || cur.depth >= config.max_depth) {
      done.push_back(std::move(cur.rows));
      continue;
    }
    const double parent_sse = cluster_sse(points, cur.rows);
    if (!(parent_sse > 0.0)) {
      done.push_back(std::move(cur.rows));
      continue;
    }
    const PointSet sub = points.subset(cur.rows);
    ClusterOptions opts;
    opts.k = 2;
    opts.seed = detail::mix_seed(config.seed, attempt++);
    opts.max_iter = config.max_iter;
    opts.width = config.width;
    const KMeansResult split = cluster_points(sub, opts);

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t i = 0; i < cur.rows.size(); ++i) {
      (split.assignment.labels[i] == 0 ? left : right).push_back(cur.rows[i]);
    }
    if (left.empty() || right.empty() ||
        !accept_split(parent_sse, split.assignment.objective, cur.rows.size(), points.dims(), n,
                      config.lambda)) {
      done.push_back(std::move(cur.rows));
      continue;
    }
    if (right.front() < left.front()) std::swap(left, right);
    queue.push_back({std::move(left), cur.depth + 1});
    queue.push_back({std::move(right), cur.depth + 1});
  }
  for (std::size_t c = 0; c < done.size(); ++c) {
    for (std::size_t r : done[c]) labels[r] = static_cast<int>(c);
  }
  return labels;
}

Partition detect_communities(const Graph& g, const DetectConfig& config) {
  const std::size_t n = g.node_count();
  if (n == 0) throw ArgumentError("cannot detect communities in an empty graph");
  if (config.landmarks == 0) throw ArgumentError("landmark count must be >= 1");
  if (!(config.lambda >= 0.0)) throw ArgumentError("lambda must be >= 0");
  const SimilarityOptions sim{config.symmetrize};
  std::vector<NodeId> all_ids(g.node_ids().begin(), g.node_ids().end());

  if (config.k) {
    const std::size_t k = *config.k;
    if (k < 1 || k > n) {
      throw ArgumentError("k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
    }
    std::vector<int> labels(n, 0);
    if (k == n) {
      std::iota(labels.begin(), labels.end(), 0);
    } else if (k > 1) {
      const PointSet points = embed_nodes(g, resolve_weights(config, n), config.landmarks, config.seed, sim);
      ClusterOptions opts;
      opts.k = k;
      opts.seed = config.seed;
      opts.max_iter = config.max_iter;
      opts.width = config.width;
      labels = cluster_points(points, opts).assignment.labels;
    }
    return Partition::from_labels(all_ids, labels);
  }

  Partition out;
  for (const auto& members : weak_components(g)) {
    std::vector<NodeId> ids;
    ids.reserve(members.size());
    for (NodeIndex v : members) ids.push_back(g.id_of(v));
    if (members.size() < 3) {
      // One or two connected nodes: a single community.
      append_component(out, ids, std::vector<int>(ids.size(), 0));
      continue;
    }
    const Graph sub = g.induced(members);
    const PointSet points =
        embed_nodes(sub, resolve_weights(config, sub.node_count()), config.landmarks, config.seed, sim);
    append_component(out, ids, bisect_points(points, config));
  }
  out.canonicalize();
  return out;
}

// Evaluation

double community_count_error(std::int64_t true_count, std::int64_t found_count) {
  if (true_count < 1) throw ArgumentError("true community count must be >= 1");
  if (found_count < 0) throw ArgumentError("found community count must be >= 0");
  const double diff = std::fabs(static_cast<double>(true_count - found_count));
  return round2(diff / static_cast<double>(true_count) * 100.0);
}

double average_error(std::span<const double> errors) {
  if (errors.empty()) throw ArgumentError("average of no errors");
  double sum = 0.0;
  for (double e : errors) sum += e;
  return round2(sum / static_cast<double>(errors.size()));
}

double cross_cluster_similarity(const Partition& p, const FeatureSpacingMatrix& sim, std::size_t x,
                                std::size_t y) {
  if (x >= p.k_found() || y >= p.k_found()) throw ArgumentError("community index out of range");
  if (sim.row_ids != sim.column_ids) throw ArgumentError("similarity matrix must be node-by-node");
  auto index = [&](NodeId id) {
    const auto it = std::lower_bound(sim.row_ids.begin(), sim.row_ids.end(), id);
    if (it == sim.row_ids.end() || *it != id) throw LookupError("node " + std::to_string(id) + " not in matrix");
    return static_cast<std::size_t>(it - sim.row_ids.begin());
  };
  double total = 0.0;
  for (NodeId u : p.communities[x]) {
    const std::size_t iu = index(u);
    for (NodeId v : p.communities[y]) {
      if (u == v) continue;
      total += sim.at(iu, index(v));
    }
  }
  return total;
}

std::vector<ManifestEntry> parse_manifest(const std::string& json_text, const std::string& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("manifest is not valid JSON: ") + e.what(), 0);
  }
  if (!doc.is_array()) throw ParseError("manifest must be a JSON array", 0);
  auto resolve = [&](const std::string& path) {
    if (base_dir.empty() || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(base_dir) / path).string();
  };
  static const std::set<std::string> known{"name", "edges", "communities", "directed", "p_max",
                                           "landmarks", "k", "lambda", "seed", "symmetrize",
                                           "max_depth"};
  std::vector<ManifestEntry> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "manifest entry " + std::to_string(i);
    if (!item.is_object()) throw ParseError(where + " is not an object", 0);
    for (const auto& [key, value] : item.items()) {
      if (!known.contains(key)) throw ParseError(where + ": unknown field '" + key + "'", 0);
    }
    try {
      ManifestEntry e;
      e.name = item.at("name").get<std::string>();
      e.edges = resolve(item.at("edges").get<std::string>());
      e.communities = resolve(item.at("communities").get<std::string>());
      e.directed = item.value("directed", false);
      if (item.contains("p_max") && !item["p_max"].is_null()) e.config.p_max = item["p_max"].get<int>();
      e.config.landmarks = item.value("landmarks", kDefaultLandmarks);
      if (item.contains("k") && !item["k"].is_null()) e.config.k = item["k"].get<std::size_t>();
      e.config.lambda = item.value("lambda", 1.0);
      e.config.seed = item.value("seed", std::uint64_t{0});
      e.config.symmetrize = item.value("symmetrize", false);
      e.config.max_depth = item.value("max_depth", e.config.max_depth);
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(where + ": " + ex.what(), 0);
    }
  }
  return out;
}

EvaluationReport evaluate_batch(std::span<const ManifestEntry> manifest) {
  if (manifest.empty()) throw ArgumentError("empty manifest");
  EvaluationReport report;
  report.rows.resize(manifest.size());

  auto run_one = [&](std::size_t i) {
    const ManifestEntry& entry = manifest[i];
    EvaluationRow& row = report.rows[i];
    row.name = entry.name;
    try {
      const Graph g = load_edge_list_text(io::read_file(entry.edges),
                                          entry.directed ? EdgeMode::kDirected : EdgeMode::kUndirected);
      const GroundTruthCommunities truth = load_ground_truth_text(io::read_file(entry.communities));
      row.nodes = g.node_count();
      row.arcs = g.arc_count();
      row.true_count = static_cast<std::int64_t>(truth.count());
      const Partition p = detect_communities(g, entry.config);
      row.found_count = static_cast<std::int64_t>(p.k_found());
      row.error_pct = community_count_error(row.true_count, row.found_count);
    } catch (const std::exception& e) {
      row.failure = e.what();
    }
  };

  if (manifest.size() > 1) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(manifest.size()); ++i) {
      run_one(static_cast<std::size_t>(i));
    }
  } else {
    run_one(0);
  }

  std::vector<double> errors;
  for (const auto& row : report.rows) {
    if (!row.failure) errors.push_back(row.error_pct);
  }
  if (!errors.empty()) report.average_error_pct = average_error(errors);
  return report;
}

}  // namespace commscape
