#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace commscape {

/// Row-major n x d matrix of finite reals with one opaque id per row.
class PointSet {
 public:
  PointSet() = default;
  /// Throws ArgumentError unless dims >= 1, at least one row, every value is
  /// finite and `ids` is empty or has one entry per row. Empty `ids` become
  /// "0", "1", ...
  PointSet(std::size_t dims, std::vector<double> values, std::vector<std::string> ids = {});

  std::size_t size() const noexcept { return dims_ == 0 ? 0 : values_.size() / dims_; }
  std::size_t dims() const noexcept { return dims_; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * dims_, dims_}; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  /// Points selected by `rows`, keeping their ids.
  PointSet subset(std::span<const std::size_t> rows) const;

 private:
  std::size_t dims_ = 0;
  std::vector<double> values_;
  std::vector<std::string> ids_;
};

/// k x d matrix of cluster centers.
struct Centroids {
  std::size_t k = 0;
  std::size_t dims = 0;
  std::vector<double> centers;  // row-major

  Centroids() = default;
  Centroids(std::size_t k, std::size_t dims, std::vector<double> centers);

  std::span<const double> row(std::size_t j) const { return {centers.data() + j * dims, dims}; }
  std::span<double> row(std::size_t j) { return {centers.data() + j * dims, dims}; }
  friend bool operator==(const Centroids&, const Centroids&) = default;
};

struct Assignment {
  std::vector<int> labels;
  /// Sum of squared distances from each point to its center.
  double objective = 0.0;
};

/// Buckets points by their margin into intervals of fixed width. Every
/// interval carries a tag, initially bucket * width, that is lowered by twice
/// the centroid deviation of each update. Points of intervals whose tag is
/// <= 0 are due for a revisit; revisited points are re-bucketed into fresh
/// intervals, so intervals with equal bucket but different age coexist.
class IntervalIndex {
 public:
  IntervalIndex(double width, std::size_t point_count);

  double width() const noexcept { return width_; }
  double last_deviation() const noexcept { return last_deviation_; }

  /// Places `point` with margin `e` >= 0 into bucket floor(e / width).
  void place(std::size_t point, double margin);
  /// Records deviation D and lowers every live tag by 2 * D + slack.
  void shift(double deviation, double slack = 0.0);
  /// Removes and returns, ascending, every point whose interval tag is <= 0.
  std::vector<std::size_t> take_expired();

  std::int64_t bucket_of(std::size_t point) const;
  double tag_of(std::size_t point) const;
  std::size_t live_intervals() const noexcept;

 private:
  struct Interval {
    std::int64_t bucket = 0;
    double tag = 0.0;
    std::vector<std::size_t> members;
    bool live = false;
  };

  double width_;
  double last_deviation_ = 0.0;
  std::vector<Interval> intervals_;
  std::vector<std::size_t> free_slots_;
  std::vector<std::size_t> slot_of_point_;
  /// Intervals created since the last shift, by bucket.
  std::unordered_map<std::int64_t, std::size_t> fresh_;
};

struct IterationStats {
  double objective = 0.0;
  /// Largest centroid displacement of this iteration's update.
  double deviation = 0.0;
  /// Points whose nearest center was recomputed.
  std::size_t visited = 0;
  /// Points skipped by the interval test whose label a full reassignment
  /// would have changed (only counted when shadow checking is on).
  std::size_t shadow_violations = 0;
};

struct KMeansResult {
  Centroids centroids;
  Assignment assignment;
  int iterations = 0;
  std::vector<IterationStats> trace;

  std::size_t total_visits() const noexcept;
};

/// k-means++ seeding driven by a 64-bit Mersenne twister. Throws ArgumentError
/// unless 1 <= k <= ps.size().
Centroids seed_centroids(const PointSet& ps, std::size_t k, std::uint64_t seed);

/// Nearest center by Euclidean distance, ties to the lowest index.
Assignment assign(const PointSet& ps, const Centroids& c);

/// Distance to the second-nearest center minus distance to the nearest.
/// Throws ArgumentError when c.k < 2.
double margin(std::span<const double> point, const Centroids& c);

double kmeans_objective(const PointSet& ps, const Centroids& c, const Assignment& a);

/// Alternating assignment and mean update until the labels stop changing or
/// `max_iter` updates have run. An emptied cluster is reseeded at the point
/// farthest from its current center.
KMeansResult lloyd_kmeans(const PointSet& ps, const Centroids& init, int max_iter);

/// Lloyd iteration that only re-examines points whose margin interval has
/// expired. Produces the same labels and centroids as lloyd_kmeans.
KMeansResult pruned_kmeans(const PointSet& ps, const Centroids& init, double width, int max_iter,
                           bool shadow_check = false);

/// Bounding-box diagonal / (16 k), or 1 for a zero-extent point set.
double default_width(const PointSet& ps, std::size_t k);

inline constexpr int kDefaultMaxIterations = 300;

struct ClusterOptions {
  std::size_t k = 2;
  std::uint64_t seed = 0;
  int max_iter = kDefaultMaxIterations;
  std::optional<double> width;
  bool prune = true;
  int restarts = 1;  // independent seedings; lowest objective wins, earliest on ties
};

/// Seeds and runs k-means: pruned for k >= 2 (unless disabled), Lloyd for k = 1.
/// Restart 0 uses `seed` itself.
KMeansResult cluster_points(const PointSet& ps, const ClusterOptions& options);

/// Point CSV: one row per point. The first line is a header when any of its
/// cells is not a number; a header column named "id" then holds the row ids.
/// Blank lines are skipped. Throws ParseError with location for ragged rows
/// or bad numbers, and for input without points.
PointSet load_points(std::istream& in);
PointSet load_points_text(const std::string& text);

namespace reference {

/// Single-threaded assignment used to check the parallel kernel.
Assignment assign(const PointSet& ps, const Centroids& c);

}  // namespace reference

}  // namespace commscape
