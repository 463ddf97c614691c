#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commscape/graph.hpp"
#include "commscape/kmeans.hpp"
#include "commscape/similarity.hpp"

namespace commscape {

/// Disjoint communities covering a node set. Communities are ascending and
/// ordered by their smallest member.
struct Partition {
  std::vector<std::vector<NodeId>> communities;

  std::size_t k_found() const noexcept { return communities.size(); }

  /// Groups `ids` by `labels`; labels with no member produce no community.
  static Partition from_labels(std::span<const NodeId> ids, std::span<const int> labels);
  /// Sorts members and communities into canonical order.
  void canonicalize();
};

struct PartitionViolation {
  enum class Kind { kEmptyCommunity, kUnknownNode, kOverlap, kUncovered };
  Kind kind;
  /// Offending node; unset for kEmptyCommunity.
  std::optional<NodeId> node;
  std::size_t community = 0;

  std::string message() const;
};

/// First violation of cover, disjointness or non-emptiness, if any.
std::optional<PartitionViolation> validate_partition(const Partition& p, const Graph& g);

/// Degree-stratified landmark choice: nodes ordered by descending out-degree
/// (ties by id) are cut into `count` equal strata and one node is drawn from
/// each. Sorted by id; every node when count >= n.
std::vector<NodeId> select_landmarks(const Graph& g, std::size_t count, std::uint64_t seed);

/// One row per node: its feature-spacing values against all nodes when
/// landmark_count >= n, otherwise against sampled landmarks.
PointSet embed_nodes(const Graph& g, const WeightScheme& ws, std::size_t landmark_count,
                     std::uint64_t seed, const SimilarityOptions& options = {});

inline constexpr std::size_t kDefaultLandmarks = 128;

struct DetectConfig {
  /// Walk length; unset means min(4, n - 2).
  std::optional<int> p_max;
  /// Explicit weights; unset means 2^-l.
  std::optional<std::vector<double>> weights;
  std::size_t landmarks = kDefaultLandmarks;
  /// Fixed community count; unset selects k by penalized bisection.
  std::optional<std::size_t> k;
  /// Penalty multiplier for every cluster added by a bisection.
  double lambda = 1.0;
  std::uint64_t seed = 0;
  /// Bisection depth limit.
  int max_depth = 16;
  bool symmetrize = false;
  int max_iter = kDefaultMaxIterations;
  std::optional<double> width;
};

/// Weight scheme for a graph of `n` nodes under `config`.
WeightScheme resolve_weights(const DetectConfig& config, std::size_t n);

/// Bisection split test: accept when the drop in squared error, measured in
/// units of the parent's per-coordinate variance, exceeds
/// lambda * dims * log(n_total).
bool accept_split(double parent_sse, double children_sse, std::size_t cluster_size,
                  std::size_t dims, std::size_t n_total, double lambda);

/// Recursive 2-means bisection of `points`; returns a label per point.
std::vector<int> bisect_points(const PointSet& points, const DetectConfig& config);

/// Embeds, clusters and returns a partition of every node of `g`.
/// Auto-k handles each weakly connected component separately; a fixed k
/// clusters the whole graph at once. Throws ArgumentError for an empty graph
/// or k outside [1, n].
Partition detect_communities(const Graph& g, const DetectConfig& config);

/// |true - found| / true * 100, rounded to 2 decimals.
double community_count_error(std::int64_t true_count, std::int64_t found_count);

/// Arithmetic mean rounded to 2 decimals. Throws ArgumentError when empty.
double average_error(std::span<const double> errors);

/// Sum of d(u, v) over ordered pairs u in community x, v in community y,
/// u != v. `sim` must be a full node-by-node matrix.
double cross_cluster_similarity(const Partition& p, const FeatureSpacingMatrix& sim,
                                std::size_t x, std::size_t y);

struct ManifestEntry {
  std::string name;
  std::string edges;
  std::string communities;
  bool directed = false;
  DetectConfig config;
};

/// Parses a JSON array of {name, edges, communities, directed, p_max,
/// landmarks, k, lambda, seed}. Relative paths resolve against `base_dir`.
std::vector<ManifestEntry> parse_manifest(const std::string& json_text,
                                          const std::string& base_dir = "");

struct EvaluationRow {
  std::string name;
  std::size_t nodes = 0;
  std::size_t arcs = 0;
  std::int64_t true_count = 0;
  std::int64_t found_count = 0;
  double error_pct = 0.0;
  /// Set when the dataset could not be processed; the row then carries no
  /// counts and is left out of the average.
  std::optional<std::string> failure;
};

struct EvaluationReport {
  std::vector<EvaluationRow> rows;
  /// Mean over successful rows; unset when none succeeded.
  std::optional<double> average_error_pct;
};

/// Runs detection for every entry. Throws ArgumentError for an empty
/// manifest; per-dataset failures are recorded in their rows.
EvaluationReport evaluate_batch(std::span<const ManifestEntry> manifest);

}  // namespace commscape
