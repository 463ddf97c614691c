#include "commscape/kmeans.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "commscape/error.hpp"
#include "kmeans_internal.hpp"
#include "rng.hpp"

namespace commscape {
namespace {

using detail::nearest_center;
using detail::nearest_with_margin;
using detail::squared_distance;
using detail::unit_uniform;

void check_shapes(const PointSet& ps, const Centroids& c) {
  if (ps.dims() != c.dims) {
    throw ArgumentError("dimension mismatch: points have " + std::to_string(ps.dims()) +
                        ", centroids have " + std::to_string(c.dims));
  }
  if (c.k < 1) throw ArgumentError("need at least one centroid");
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(n));
}

// Mean update shared by both k-means variants. A cluster left empty takes
// the point farthest from its current center, drawn from clusters that keep
// at least one other member.
Centroids update_centroids(const PointSet& ps, std::vector<int> labels, const Centroids& old) {
  const std::size_t n = ps.size();
  const std::size_t k = old.k;
  const std::size_t d = ps.dims();
  std::vector<std::size_t> counts(k, 0);
  for (int l : labels) ++counts[static_cast<std::size_t>(l)];

  if (std::find(counts.begin(), counts.end(), 0) != counts.end()) {
    std::vector<double> far(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const auto iu = static_cast<std::size_t>(i);
      far[iu] = squared_distance(ps.row(iu), old.row(static_cast<std::size_t>(labels[iu])));
    }
    std::vector<char> moved(n, 0);
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] != 0) continue;
      std::size_t pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (moved[i] || counts[static_cast<std::size_t>(labels[i])] < 2) continue;
        if (pick == n || far[i] > far[pick]) pick = i;
      }
      if (pick == n) continue;
      --counts[static_cast<std::size_t>(labels[pick])];
      labels[pick] = static_cast<int>(j);
      counts[j] = 1;
      moved[pick] = 1;
    }
  }

  // Members grouped per cluster in ascending point order; each cluster is
  // summed by one worker, so results do not depend on the thread count.
  std::vector<std::size_t> start(k + 1, 0);
  for (std::size_t j = 0; j < k; ++j) start[j + 1] = start[j] + counts[j];
  std::vector<std::size_t> order(n);
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) order[fill[static_cast<std::size_t>(labels[i])]++] = i;
  }

  Centroids next = old;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t jj = 0; jj < static_cast<std::ptrdiff_t>(k); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    if (counts[j] == 0) continue;
    auto center = next.row(j);
    std::fill(center.begin(), center.end(), 0.0);
    for (std::size_t p = start[j]; p < start[j + 1]; ++p) {
      const auto x = ps.row(order[p]);
      for (std::size_t c = 0; c < d; ++c) center[c] += x[c];
    }
    const double inv = static_cast<double>(counts[j]);
    for (std::size_t c = 0; c < d; ++c) center[c] /= inv;
  }
  return next;
}

double max_deviation(const Centroids& a, const Centroids& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.k; ++j) worst = std::max(worst, squared_distance(a.row(j), b.row(j)));
  return std::sqrt(worst);
}

double bounding_box_diagonal(const PointSet& ps) {
  const std::size_t d = ps.dims();
  std::vector<double> lo(ps.row(0).begin(), ps.row(0).end());
  std::vector<double> hi = lo;
  for (std::size_t i = 1; i < ps.size(); ++i) {
    const auto x = ps.row(i);
    for (std::size_t c = 0; c < d; ++c) {
      lo[c] = std::min(lo[c], x[c]);
      hi[c] = std::max(hi[c], x[c]);
    }
  }
  double s = 0.0;
  for (std::size_t c = 0; c < d; ++c) s += (hi[c] - lo[c]) * (hi[c] - lo[c]);
  return std::sqrt(s);
}

void check_run(const PointSet& ps, const Centroids& init, int max_iter) {
  check_shapes(ps, init);
  if (init.k > ps.size()) throw ArgumentError("more centroids than points");
  if (max_iter < 1) throw ArgumentError("max_iter must be >= 1");
}

}  // namespace

PointSet::PointSet(std::size_t dims, std::vector<double> values, std::vector<std::string> ids)
    : dims_(dims), values_(std::move(values)), ids_(std::move(ids)) {
  if (dims_ == 0) throw ArgumentError("point dimension must be >= 1");
  if (values_.empty() || values_.size() % dims_ != 0) {
    throw ArgumentError("point values must form at least one complete row");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ArgumentError("point values must be finite");
  }
  if (ids_.empty()) {
    ids_.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) ids_.push_back(std::to_string(i));
  } else if (ids_.size() != size()) {
    throw ArgumentError("one id per point required");
  }
}

PointSet PointSet::subset(std::span<const std::size_t> rows) const {
  std::vector<double> values;
  std::vector<std::string> ids;
  values.reserve(rows.size() * dims_);
  for (std::size_t r : rows) {
    const auto x = row(r);
    values.insert(values.end(), x.begin(), x.end());
    ids.push_back(ids_.at(r));
  }
  return PointSet(dims_, std::move(values), std::move(ids));
}

Centroids::Centroids(std::size_t k_, std::size_t dims_, std::vector<double> centers_)
    : k(k_), dims(dims_), centers(std::move(centers_)) {
  if (k < 1 || dims < 1 || centers.size() != k * dims) {
    throw ArgumentError("centroid matrix must be k x d with k, d >= 1");
  }
  for (double v : centers) {
    if (!std::isfinite(v)) throw ArgumentError("centroid values must be finite");
  }
}

std::size_t KMeansResult::total_visits() const noexcept {
  std::size_t total = 0;
  for (const auto& it : trace) total += it.visited;
  return total;
}

Centroids seed_centroids(const PointSet& ps, std::size_t k, std::uint64_t seed) {
  const std::size_t n = ps.size();
  if (k < 1 || k > n) {
    throw ArgumentError("k must be in [1, " + std::to_string(n) + "], got " + std::to_string(k));
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  std::vector<char> taken(n, 0);
  chosen.push_back(uniform_index(rng, n));
  taken[chosen.back()] = 1;

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(ps.row(i), ps.row(chosen[0]));
  while (chosen.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = unit_uniform(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      // Every remaining point coincides with a center: draw an unused index.
      std::size_t skip = uniform_index(rng, n - chosen.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        if (skip-- == 0) {
          pick = i;
          break;
        }
      }
    }
    chosen.push_back(pick);
    taken[pick] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(ps.row(i), ps.row(pick)));
    }
  }

  std::vector<double> centers;
  centers.reserve(k * ps.dims());
  for (std::size_t i : chosen) centers.insert(centers.end(), ps.row(i).begin(), ps.row(i).end());
  return Centroids(k, ps.dims(), std::move(centers));
}

Assignment assign(const PointSet& ps, const Centroids& c) {
  check_shapes(ps, c);
  const std::size_t n = ps.size();
  Assignment a;
  a.labels.resize(n);
  std::vector<double> cost(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const auto best = nearest_center(ps.row(iu), c);
    a.labels[iu] = best.label;
    cost[iu] = best.squared;
  }
  for (double v : cost) a.objective += v;
  return a;
}

double margin(std::span<const double> point, const Centroids& c) {
  if (c.k < 2) throw ArgumentError("margin needs at least two centroids");
  if (point.size() != c.dims) throw ArgumentError("dimension mismatch");
  return nearest_with_margin(point, c).margin;
}

double kmeans_objective(const PointSet& ps, const Centroids& c, const Assignment& a) {
  check_shapes(ps, c);
  if (a.labels.size() != ps.size()) throw ArgumentError("one label per point required");
  double total = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const int l = a.labels[i];
    if (l < 0 || static_cast<std::size_t>(l) >= c.k) throw ArgumentError("label out of range");
    total += squared_distance(ps.row(i), c.row(static_cast<std::size_t>(l)));
  }
  return total;
}

KMeansResult lloyd_kmeans(const PointSet& ps, const Centroids& init, int max_iter) {
  check_run(ps, init, max_iter);
  KMeansResult r;
  r.centroids = init;
  Assignment current = assign(ps, init);
  while (r.iterations < max_iter) {
    Centroids next = update_centroids(ps, current.labels, r.centroids);
    const double deviation = max_deviation(next, r.centroids);
    r.centroids = std::move(next);
    ++r.iterations;
    Assignment fresh = assign(ps, r.centroids);
    r.trace.push_back({fresh.objective, deviation, ps.size(), 0});
    const bool stable = fresh.labels == current.labels;
    current = std::move(fresh);
    if (stable) break;
  }
  r.assignment = std::move(current);
  return r;
}

KMeansResult pruned_kmeans(const PointSet& ps, const Centroids& init, double width, int max_iter,
                           bool shadow_check) {
  if (!(width > 0.0) || !std::isfinite(width)) throw ArgumentError("width must be positive");
  if (init.k < 2) throw ArgumentError("pruned k-means needs k >= 2");
  check_run(ps, init, max_iter);

  const std::size_t n = ps.size();
  // Margins and deviations carry rounding error of a few ulps of the data
  // scale; the slack keeps the skip test conservative.
  const double slack = 1e-10 * bounding_box_diagonal(ps);

  KMeansResult r;
  r.centroids = init;
  std::vector<int> labels(n);
  IntervalIndex index(width, n);
  {
    std::vector<detail::NearestWithMargin> first(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      first[static_cast<std::size_t>(i)] =
          nearest_with_margin(ps.row(static_cast<std::size_t>(i)), init);
    }
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = first[i].label;
      index.place(i, first[i].margin);
    }
  }

  std::vector<detail::NearestWithMargin> fresh;
  while (r.iterations < max_iter) {
    Centroids next = update_centroids(ps, labels, r.centroids);
    const double deviation = max_deviation(next, r.centroids);
    r.centroids = std::move(next);
    ++r.iterations;

    index.shift(deviation, slack);
    const std::vector<std::size_t> revisit = index.take_expired();
    fresh.resize(revisit.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(revisit.size()); ++t) {
      const auto tu = static_cast<std::size_t>(t);
      fresh[tu] = nearest_with_margin(ps.row(revisit[tu]), r.centroids);
    }

    IterationStats stats;
    stats.deviation = deviation;
    stats.visited = revisit.size();
    if (shadow_check) {
      const Assignment full = assign(ps, r.centroids);
      std::vector<char> seen(n, 0);
      for (std::size_t p : revisit) seen[p] = 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (!seen[i] && full.labels[i] != labels[i]) ++stats.shadow_violations;
      }
    }

    bool changed = false;
    for (std::size_t t = 0; t < revisit.size(); ++t) {
      const std::size_t p = revisit[t];
      if (fresh[t].label != labels[p]) changed = true;
      labels[p] = fresh[t].label;
      index.place(p, fresh[t].margin);
    }
    Assignment current{labels, 0.0};
    stats.objective = kmeans_objective(ps, r.centroids, current);
    r.trace.push_back(stats);
    if (!changed) break;
  }
  r.assignment.labels = std::move(labels);
  r.assignment.objective = kmeans_objective(ps, r.centroids, r.assignment);
  return r;
}

double default_width(const PointSet& ps, std::size_t k) {
  if (k < 1) throw ArgumentError("k must be >= 1");
  const double diag = bounding_box_diagonal(ps);
  return diag > 0.0 ? diag / (16.0 * static_cast<double>(k)) : 1.0;
}

namespace {

KMeansResult cluster_once(const PointSet& ps, const ClusterOptions& options, std::uint64_t seed) {
  const Centroids init = seed_centroids(ps, options.k, seed);
  if (options.k == 1 || !options.prune) return lloyd_kmeans(ps, init, options.max_iter);
  const double width = options.width ? *options.width : default_width(ps, options.k);
  return pruned_kmeans(ps, init, width, options.max_iter);
}

}  // namespace

KMeansResult cluster_points(const PointSet& ps, const ClusterOptions& options) {
  if (options.restarts < 1) throw ArgumentError("restarts must be >= 1");
  KMeansResult best = cluster_once(ps, options, options.seed);
  for (int r = 1; r < options.restarts; ++r) {
    KMeansResult next = cluster_once(ps, options, detail::mix_seed(options.seed, static_cast<std::uint64_t>(r)));
    if (next.assignment.objective < best.assignment.objective) best = std::move(next);
  }
  return best;
}

// IntervalIndex

IntervalIndex::IntervalIndex(double width, std::size_t point_count)
    : width_(width), slot_of_point_(point_count, SIZE_MAX) {
  if (!(width > 0.0)) throw ArgumentError("interval width must be positive");
}

void IntervalIndex::place(std::size_t point, double margin) {
  const double e = std::max(0.0, margin);
  const auto bucket = static_cast<std::int64_t>(std::floor(e / width_));
  auto [it, inserted] = fresh_.try_emplace(bucket, 0);
  if (inserted) {
    std::size_t slot;
    if (!free_slots_.empty()) {
      slot = free_slots_.back();
      free_slots_.pop_back();
    } else {
      slot = intervals_.size();
      intervals_.emplace_back();
    }
    Interval& iv = intervals_[slot];
    iv.bucket = bucket;
    iv.tag = static_cast<double>(bucket) * width_;
    iv.members.clear();
    iv.live = true;
    it->second = slot;
  }
  intervals_[it->second].members.push_back(point);
  slot_of_point_.at(point) = it->second;
}

void IntervalIndex::shift(double deviation, double slack) {
  last_deviation_ = deviation;
  for (Interval& iv : intervals_) {
    if (iv.live) iv.tag -= 2.0 * deviation + slack;
  }
  fresh_.clear();
}

std::vector<std::size_t> IntervalIndex::take_expired() {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < intervals_.size(); ++s) {
    Interval& iv = intervals_[s];
    if (!iv.live || iv.tag > 0.0) continue;
    for (std::size_t p : iv.members) slot_of_point_[p] = SIZE_MAX;
    out.insert(out.end(), iv.members.begin(), iv.members.end());
    iv.members.clear();
    iv.live = false;
    free_slots_.push_back(s);
    for (auto it = fresh_.begin(); it != fresh_.end(); ++it) {
      if (it->second == s) {
        fresh_.erase(it);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t IntervalIndex::bucket_of(std::size_t point) const {
  const std::size_t s = slot_of_point_.at(point);
  if (s == SIZE_MAX) throw LookupError("point is not placed");
  return intervals_[s].bucket;
}

double IntervalIndex::tag_of(std::size_t point) const {
  const std::size_t s = slot_of_point_.at(point);
  if (s == SIZE_MAX) throw LookupError("point is not placed");
  return intervals_[s].tag;
}

std::size_t IntervalIndex::live_intervals() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(intervals_.begin(), intervals_.end(), [](const Interval& iv) { return iv.live; }));
}

}  // namespace commscape
