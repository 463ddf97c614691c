#include "commscape/similarity.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "commscape/error.hpp"
#include "similarity_internal.hpp"

namespace commscape {
namespace {

constexpr double kExactIntegerLimit = 9007199254740992.0;  // 2^53

// Scratch buffers for one walk-count sweep, reused across sources.
struct RowScratch {
  std::vector<double> prev;
  std::vector<double> cur;
  std::vector<double> h;

  explicit RowScratch(std::size_t n) : prev(n, 0.0), cur(n, 0.0), h(n, 0.0) {}
};

// Fills scratch.h with H(source, t) for every node t. Returns false on a
// walk total above 2^53.
bool access_row(const Graph& g, NodeIndex source, const WeightScheme& ws, RowScratch& s) {
  std::fill(s.h.begin(), s.h.end(), 0.0);
  std::fill(s.prev.begin(), s.prev.end(), 0.0);
  s.prev[source] = 1.0;
  const std::size_t n = g.node_count();
  for (int length = 1; length <= ws.p_max(); ++length) {
    std::fill(s.cur.begin(), s.cur.end(), 0.0);
    for (NodeIndex v = 0; v < n; ++v) {
      const double walks = s.prev[v];
      if (walks == 0.0) continue;
      for (NodeIndex w : g.successors(v)) s.cur[w] += walks;
    }
    double total = 0.0;
    for (double c : s.cur) total += c;
    if (total > kExactIntegerLimit) return false;
    if (total > 0.0) {
      const double w = ws.weight(length);
      for (NodeIndex t = 0; t < n; ++t) {
        if (s.cur[t] != 0.0) s.h[t] += w * (s.cur[t] / total);
      }
    }
    std::swap(s.prev, s.cur);
  }
  return true;
}

void check_walk_length(int p_max) {
  if (p_max < 1) throw ArgumentError("walk length must be >= 1, got " + std::to_string(p_max));
}

}  // namespace

WeightScheme::WeightScheme(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ArgumentError("weight scheme needs at least one weight");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw ArgumentError("weights must be positive and finite");
    }
    if (i > 0 && !(weights_[i] < weights_[i - 1])) {
      throw ArgumentError("weights must be strictly decreasing");
    }
  }
}

double WeightScheme::total() const noexcept {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

WeightScheme default_weights(int p_max) {
  check_walk_length(p_max);
  std::vector<double> w(static_cast<std::size_t>(p_max));
  for (int l = 1; l <= p_max; ++l) w[static_cast<std::size_t>(l - 1)] = std::ldexp(1.0, -l);
  return WeightScheme(std::move(w));
}

int capped_walk_length(std::size_t node_count, int requested) {
  check_walk_length(requested);
  if (node_count < 2) return requested;
  const auto cap = static_cast<long long>(node_count) - 2;
  return static_cast<int>(std::max(1LL, std::min<long long>(requested, cap)));
}

WalkInventory walk_count_dp(const Graph& g, NodeId source, int p_max) {
  check_walk_length(p_max);
  const NodeIndex a = g.index_of(source);
  const std::size_t n = g.node_count();
  WalkInventory inv;
  inv.source = a;
  inv.p_max = p_max;
  inv.counts.assign(static_cast<std::size_t>(p_max), std::vector<double>(n, 0.0));
  inv.totals.assign(static_cast<std::size_t>(p_max), 0.0);

  std::vector<double> prev(n, 0.0);
  prev[a] = 1.0;
  for (int length = 1; length <= p_max; ++length) {
    auto& cur = inv.counts[static_cast<std::size_t>(length - 1)];
    for (NodeIndex v = 0; v < n; ++v) {
      if (prev[v] == 0.0) continue;
      for (NodeIndex w : g.successors(v)) cur[w] += prev[v];
    }
    double total = 0.0;
    for (double c : cur) total += c;
    if (total > kExactIntegerLimit) {
      throw ArgumentError("walk count of length " + std::to_string(length) +
                          " exceeds 2^53; lower the walk length");
    }
    inv.totals[static_cast<std::size_t>(length - 1)] = total;
    prev = cur;
  }
  return inv;
}

double transition_probability(const WalkInventory& inv, NodeIndex b, int p) {
  if (p < 1 || p > inv.p_max) {
    throw ArgumentError("walk length " + std::to_string(p) + " outside 1.." +
                        std::to_string(inv.p_max));
  }
  const double total = inv.total(p);
  if (total == 0.0) return 0.0;
  return inv.count(p, b) / total;
}

double access_value(const WalkInventory& inv, NodeIndex b, const WeightScheme& ws) {
  if (ws.p_max() > inv.p_max) {
    throw ArgumentError("inventory covers lengths up to " + std::to_string(inv.p_max) +
                        ", weights need " + std::to_string(ws.p_max()));
  }
  double h = 0.0;
  for (int length = 1; length <= ws.p_max(); ++length) {
    const double p = transition_probability(inv, b, length);
    if (p != 0.0) h += ws.weight(length) * p;
  }
  return h;
}

std::vector<double> access_matrix(const Graph& g, const WeightScheme& ws,
                                  std::span<const NodeIndex> columns,
                                  const SimilarityOptions& options) {
  const std::size_t n = g.node_count();
  const std::size_t cols = columns.size();
  std::vector<double> out(n * cols, 0.0);
  std::atomic<bool> overflow{false};

#pragma omp parallel
  {
    RowScratch scratch(n);
#pragma omp for schedule(dynamic, 16)
    for (std::ptrdiff_t a = 0; a < static_cast<std::ptrdiff_t>(n); ++a) {
      if (!access_row(g, static_cast<NodeIndex>(a), ws, scratch)) overflow = true;
      double* row = out.data() + static_cast<std::size_t>(a) * cols;
      for (std::size_t j = 0; j < cols; ++j) {
        row[j] = columns[j] == static_cast<NodeIndex>(a) ? 0.0 : scratch.h[columns[j]];
      }
    }
  }

  if (options.symmetrize && !overflow) {
    // Reverse direction H(column, a), one full row per column node.
    std::vector<double> back(cols * n, 0.0);
#pragma omp parallel
    {
      RowScratch scratch(n);
#pragma omp for schedule(dynamic, 16)
      for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(cols); ++j) {
        if (!access_row(g, columns[static_cast<std::size_t>(j)], ws, scratch)) overflow = true;
        std::copy(scratch.h.begin(), scratch.h.end(),
                  back.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(j) * n));
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (columns[j] == a) continue;
        double& v = out[a * cols + j];
        v = 0.5 * (v + back[j * n + a]);
      }
    }
  }

  if (overflow) throw ArgumentError("walk count exceeds 2^53; lower the walk length");
  return out;
}

namespace detail {

FeatureSpacingMatrix normalize(const Graph& g, std::span<const NodeIndex> columns,
                               std::vector<double> h) {
  FeatureSpacingMatrix m;
  const std::size_t n = g.node_count();
  const std::size_t cols = columns.size();
  m.row_ids.assign(g.node_ids().begin(), g.node_ids().end());
  m.column_ids.reserve(cols);
  for (NodeIndex c : columns) m.column_ids.push_back(g.id_of(c));

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (columns[j] == a) continue;
      lo = std::min(lo, h[a * cols + j]);
      hi = std::max(hi, h[a * cols + j]);
    }
  }
  if (!(hi > lo)) {
    m.h_min = std::isfinite(lo) ? lo : 0.0;
    m.h_max = std::isfinite(hi) ? hi : 0.0;
    m.degenerate = true;
    m.values.assign(n * cols, 0.0);
    return m;
  }
  m.h_min = lo;
  m.h_max = hi;
  const double range = hi - lo;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t j = 0; j < cols; ++j) {
      double& v = h[a * cols + j];
      v = columns[j] == a ? 0.0 : (v - lo) / range;
    }
  }
  m.values = std::move(h);
  return m;
}

}  // namespace detail

FeatureSpacingMatrix feature_spacing_matrix(const Graph& g, const WeightScheme& ws,
                                            const SimilarityOptions& options) {
  if (g.node_count() < 2) throw ArgumentError("feature spacing needs at least 2 nodes");
  std::vector<NodeIndex> all(g.node_count());
  std::iota(all.begin(), all.end(), NodeIndex{0});
  return detail::normalize(g, all, access_matrix(g, ws, all, options));
}

FeatureSpacingMatrix feature_spacing_to_landmarks(const Graph& g, const WeightScheme& ws,
                                                  std::span<const NodeId> landmarks,
                                                  const SimilarityOptions& options) {
  if (landmarks.empty()) throw ArgumentError("landmark set is empty");
  std::vector<NodeIndex> columns;
  columns.reserve(landmarks.size());
  for (NodeId id : landmarks) columns.push_back(g.index_of(id));
  return detail::normalize(g, columns, access_matrix(g, ws, columns, options));
}

}  // namespace commscape
