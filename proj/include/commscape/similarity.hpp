#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "commscape/graph.hpp"

namespace commscape {

/// Per-length walk weights w_1 > w_2 > ... > w_p > 0.
class WeightScheme {
 public:
  /// Throws ArgumentError unless `weights` is non-empty, positive and
  /// strictly decreasing.
  explicit WeightScheme(std::vector<double> weights);

  int p_max() const noexcept { return static_cast<int>(weights_.size()); }
  std::span<const double> weights() const noexcept { return weights_; }
  /// Weight of walks of `length` (1-based).
  double weight(int length) const { return weights_.at(static_cast<std::size_t>(length - 1)); }
  /// Upper bound of any access value under this scheme.
  double total() const noexcept;

 private:
  std::vector<double> weights_;
};

/// w_l = 2^-l for l = 1..p_max.
WeightScheme default_weights(int p_max);

inline constexpr int kDefaultWalkLength = 4;

/// Caps a walk length at n - 2 (never below 1).
int capped_walk_length(std::size_t node_count, int requested);

/// Walk counts from one source, grouped by length and endpoint.
struct WalkInventory {
  NodeIndex source = 0;
  int p_max = 0;
  /// counts[l - 1][b]: number of walks of length l from source to b.
  std::vector<std::vector<double>> counts;
  /// totals[l - 1]: number of walks of length l leaving the source.
  std::vector<double> totals;

  double count(int length, NodeIndex target) const {
    return counts.at(static_cast<std::size_t>(length - 1)).at(target);
  }
  double total(int length) const { return totals.at(static_cast<std::size_t>(length - 1)); }
};

/// Walk counts by dynamic programming: layer l is the out-arc push of layer
/// l - 1. Throws ArgumentError if p_max < 1 or a walk total exceeds 2^53,
/// LookupError for an unknown source.
WalkInventory walk_count_dp(const Graph& g, NodeId source, int p_max);

/// P^p(source, b): share of the length-p walks leaving the source that end at
/// b. Zero when no length-p walk leaves the source.
double transition_probability(const WalkInventory& inv, NodeIndex b, int p);

/// H(source, b) = sum_l w_l * P^l(source, b) over l = 1..ws.p_max().
double access_value(const WalkInventory& inv, NodeIndex b, const WeightScheme& ws);

/// Min-max normalized access values. Rows are nodes, columns are either all
/// nodes or a landmark subset. Entries pairing a node with itself are 0 and
/// take no part in the min/max.
struct FeatureSpacingMatrix {
  std::vector<NodeId> row_ids;
  std::vector<NodeId> column_ids;
  std::vector<double> values;  // row-major
  double h_min = 0.0;
  double h_max = 0.0;
  /// Set when h_max == h_min; every entry is then 0.
  bool degenerate = false;

  std::size_t rows() const noexcept { return row_ids.size(); }
  std::size_t cols() const noexcept { return column_ids.size(); }
  double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols(), cols()};
  }
};

struct SimilarityOptions {
  /// Replace H(a, b) by the mean of H(a, b) and H(b, a) before normalizing.
  bool symmetrize = false;
};

/// Raw (unnormalized) access values for every node against `columns`.
/// Diagonal entries are 0. Rows are computed in parallel.
std::vector<double> access_matrix(const Graph& g, const WeightScheme& ws,
                                  std::span<const NodeIndex> columns,
                                  const SimilarityOptions& options = {});

/// Full node-by-node matrix. Throws ArgumentError when n < 2.
FeatureSpacingMatrix feature_spacing_matrix(const Graph& g, const WeightScheme& ws,
                                            const SimilarityOptions& options = {});

/// Node-by-landmark matrix, normalized over the computed entries only.
/// Throws ArgumentError for an empty landmark list, LookupError for unknown ids.
FeatureSpacingMatrix feature_spacing_to_landmarks(const Graph& g, const WeightScheme& ws,
                                                  std::span<const NodeId> landmarks,
                                                  const SimilarityOptions& options = {});

namespace reference {

/// Queue-driven walk enumeration: every arc out of the source seeds the
/// queue, and each dequeued walk shorter than p_max is extended by every
/// out-arc of its last node. No visited check, so vertices may repeat.
/// Exponential in p_max; kept as the oracle for walk_count_dp.
WalkInventory enumerate_walks(const Graph& g, NodeId source, int p_max);

/// Every walk of length 1..p_max from `source` as an id sequence, in queue
/// order. Stops after `limit` walks.
std::vector<std::vector<NodeId>> list_walks(const Graph& g, NodeId source, int p_max,
                                            std::size_t limit);

/// Serial full matrix assembled pair by pair from enumerate_walks.
FeatureSpacingMatrix feature_spacing_matrix(const Graph& g, const WeightScheme& ws);

}  // namespace reference

}  // namespace commscape
