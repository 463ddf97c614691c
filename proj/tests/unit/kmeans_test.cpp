#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "commscape/error.hpp"
#include "commscape/kmeans.hpp"
#include "commscape/parallel.hpp"

using namespace commscape;

namespace {

PointSet unit_square() { return PointSet(2, {0, 0, 0, 1, 1, 0, 1, 1}); }

PointSet random_blobs(std::size_t n, std::size_t d, std::size_t blobs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> center(-10.0, 10.0);
  std::vector<double> centers(blobs * d);
  for (double& c : centers) c = center(rng);
  std::vector<double> values;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = i % blobs;
    for (std::size_t j = 0; j < d; ++j) values.push_back(centers[b * d + j] + noise(rng));
  }
  return PointSet(d, std::move(values));
}

double brute_objective(const PointSet& ps, const std::vector<int>& labels, std::size_t k) {
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> mean(ps.dims(), 0.0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (labels[i] != static_cast<int>(c)) continue;
      ++count;
      for (std::size_t j = 0; j < ps.dims(); ++j) mean[j] += ps.row(i)[j];
    }
    if (count == 0) return INFINITY;
    for (double& m : mean) m /= static_cast<double>(count);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (labels[i] != static_cast<int>(c)) continue;
      for (std::size_t j = 0; j < ps.dims(); ++j) {
        total += (ps.row(i)[j] - mean[j]) * (ps.row(i)[j] - mean[j]);
      }
    }
  }
  return total;
}

}  // namespace

TEST(PointSet, ValidatesShape) {
  EXPECT_THROW(PointSet(0, {1.0}), ArgumentError);
  EXPECT_THROW(PointSet(2, {}), ArgumentError);
  EXPECT_THROW(PointSet(2, {1.0, 2.0, 3.0}), ArgumentError);
  EXPECT_THROW(PointSet(1, {NAN}), ArgumentError);
  EXPECT_THROW(PointSet(1, {1.0, 2.0}, {"a"}), ArgumentError);
  const PointSet ps(1, {1.0, 2.0});
  EXPECT_EQ(ps.ids(), (std::vector<std::string>{"0", "1"}));
}

TEST(Assign, UnitSquareHandComputation) {
  const Centroids c(2, 2, {0.0, 0.5, 1.0, 0.5});
  const Assignment a = assign(unit_square(), c);
  EXPECT_EQ(a.labels, (std::vector<int>{0, 0, 1, 1}));
  EXPECT_DOUBLE_EQ(a.objective, 1.0);
  EXPECT_DOUBLE_EQ(kmeans_objective(unit_square(), c, a), 1.0);
}

TEST(Assign, PointOnCenterAndTies) {
  const PointSet ps(1, {4.0, 1.0});
  const Centroids c(3, 1, {0.0, 2.0, 4.0});
  const Assignment a = assign(ps, c);
  EXPECT_EQ(a.labels[0], 2);
  EXPECT_EQ(a.labels[1], 0);  // equidistant to 0 and 2
  EXPECT_DOUBLE_EQ(a.objective, 1.0);
}

TEST(Assign, DimensionMismatch) {
  EXPECT_THROW(assign(unit_square(), Centroids(1, 3, {0, 0, 0})), ArgumentError);
}

TEST(Assign, ParallelMatchesSerial) {
  const PointSet ps = random_blobs(3000, 5, 7, 1);
  const Centroids c = seed_centroids(ps, 7, 2);
  for (int threads : {1, 3, 8}) {
    parallel::set_thread_count(threads);
    const Assignment fast = assign(ps, c);
    const Assignment slow = reference::assign(ps, c);
    EXPECT_EQ(fast.labels, slow.labels);
    EXPECT_EQ(fast.objective, slow.objective);
  }
  parallel::set_thread_count(0);
}

TEST(Objective, HandValues) {
  const PointSet ps(1, {2.0});
  EXPECT_EQ(kmeans_objective(ps, Centroids(1, 1, {2.0}), {{0}, 0.0}), 0.0);
  EXPECT_EQ(kmeans_objective(ps, Centroids(1, 1, {0.0}), {{0}, 0.0}), 4.0);
  EXPECT_THROW(kmeans_objective(ps, Centroids(1, 1, {0.0}), {{1}, 0.0}), ArgumentError);
}

TEST(Margin, HandValues) {
  const std::vector<double> origin{0.0, 0.0};
  EXPECT_DOUBLE_EQ(margin(origin, Centroids(2, 2, {1.0, 0.0, 0.0, 3.0})), 2.0);
  EXPECT_DOUBLE_EQ(margin(origin, Centroids(2, 2, {0.0, 0.0, 5.0, 0.0})), 5.0);
  EXPECT_DOUBLE_EQ(margin(origin, Centroids(2, 2, {1.0, 0.0, -1.0, 0.0})), 0.0);
  EXPECT_THROW(margin(origin, Centroids(1, 2, {1.0, 0.0})), ArgumentError);
}

TEST(Seeding, DeterministicAndInRange) {
  const PointSet ps = random_blobs(50, 3, 4, 9);
  EXPECT_EQ(seed_centroids(ps, 4, 11), seed_centroids(ps, 4, 11));
  EXPECT_THROW(seed_centroids(ps, 0, 1), ArgumentError);
  EXPECT_THROW(seed_centroids(ps, 51, 1), ArgumentError);
  const Centroids two = seed_centroids(PointSet(1, {0.0, 1.0, 2.0}), 2, 5);
  EXPECT_NE(two.centers[0], two.centers[1]);
}

TEST(Seeding, FullKIsPermutationOfPoints) {
  const PointSet ps = random_blobs(12, 2, 3, 4);
  const Centroids c = seed_centroids(ps, 12, 3);
  std::vector<std::vector<double>> pts;
  std::vector<std::vector<double>> ctr;
  for (std::size_t i = 0; i < 12; ++i) {
    pts.emplace_back(ps.row(i).begin(), ps.row(i).end());
    ctr.emplace_back(c.row(i).begin(), c.row(i).end());
  }
  std::sort(pts.begin(), pts.end());
  std::sort(ctr.begin(), ctr.end());
  EXPECT_EQ(pts, ctr);
}

TEST(Lloyd, IdenticalPointsSingleCluster) {
  const PointSet ps(2, {3, 4, 3, 4, 3, 4});
  const auto r = lloyd_kmeans(ps, Centroids(1, 2, {0, 0}), 10);
  EXPECT_EQ(r.centroids.centers, (std::vector<double>{3, 4}));
  EXPECT_EQ(r.assignment.objective, 0.0);
  EXPECT_EQ(r.iterations, 1);
}

TEST(Lloyd, FullKFixpoint) {
  const PointSet ps(1, {0.0, 1.0, 5.0});
  const auto r = lloyd_kmeans(ps, Centroids(3, 1, {0.0, 1.0, 5.0}), 10);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.assignment.objective, 0.0);
}

TEST(Lloyd, TwoClumpsMatchExhaustiveOptimum) {
  const PointSet ps(2, {0.0, 0.0, 0.0, 1.0, 10.0, 0.0, 10.0, 1.5});
  double best = INFINITY;
  std::vector<int> best_labels;
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<int> labels{mask & 1, mask >> 1 & 1, mask >> 2 & 1, mask >> 3 & 1};
    const double obj = brute_objective(ps, labels, 2);
    if (obj < best) {
      best = obj;
      best_labels = labels;
    }
  }
  // Centroid 0 starts near the left clump.
  if (best_labels[0] != 0) for (int& l : best_labels) l = 1 - l;
  const auto r = lloyd_kmeans(ps, Centroids(2, 2, {1.0, 0.0, 8.0, 0.0}), 50);
  EXPECT_EQ(r.assignment.labels, best_labels);
  EXPECT_NEAR(r.assignment.objective, best, 1e-12);
  EXPECT_NEAR(best, 0.5 + 1.125, 1e-12);
}

TEST(Lloyd, ObjectiveNonIncreasing) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PointSet ps = random_blobs(200, 3, 5, seed);
    const auto r = lloyd_kmeans(ps, seed_centroids(ps, 6, seed), 100);
    double prev = assign(ps, seed_centroids(ps, 6, seed)).objective;
    for (const auto& it : r.trace) {
      EXPECT_LE(it.objective, prev * (1 + 1e-9) + 1e-12);
      prev = it.objective;
    }
  }
}

TEST(Lloyd, EmptyClusterIsReseeded) {
  const PointSet ps(1, {0.0, 1.0, 2.0, 10.0});
  const auto r = lloyd_kmeans(ps, Centroids(3, 1, {1.0, 100.0, 200.0}), 20);
  std::vector<int> sizes(3, 0);
  for (int l : r.assignment.labels) ++sizes[static_cast<std::size_t>(l)];
  for (int s : sizes) EXPECT_GT(s, 0);
}

TEST(Pruned, MatchesLloydOnRandomInstances) {
  int instances = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = 20 + rng() % 481;
    const std::size_t d = 1 + rng() % 8;
    const std::size_t k = 2 + rng() % 9;
    const PointSet ps = random_blobs(n, d, 1 + rng() % 10, seed * 7 + 1);
    const Centroids init = seed_centroids(ps, k, seed);
    const double width = default_width(ps, k) * std::ldexp(1.0, static_cast<int>(rng() % 7) - 3);
    const auto lloyd = lloyd_kmeans(ps, init, 300);
    const auto pruned = pruned_kmeans(ps, init, width, 300, true);
    ASSERT_EQ(pruned.assignment.labels, lloyd.assignment.labels) << "seed " << seed;
    ASSERT_EQ(pruned.iterations, lloyd.iterations);
    for (std::size_t i = 0; i < lloyd.centroids.centers.size(); ++i) {
      const double a = lloyd.centroids.centers[i];
      const double b = pruned.centroids.centers[i];
      EXPECT_LE(std::abs(a - b), 1e-9 * std::max(1.0, std::abs(a)));
    }
    for (const auto& it : pruned.trace) EXPECT_EQ(it.shadow_violations, 0u);
    ++instances;
  }
  EXPECT_GE(instances, 100);
}

TEST(Pruned, HugeWidthRevisitsEveryPoint) {
  const PointSet ps = random_blobs(100, 2, 3, 5);
  const Centroids init = seed_centroids(ps, 3, 5);
  const auto r = pruned_kmeans(ps, init, 1e6, 100);
  for (const auto& it : r.trace) EXPECT_EQ(it.visited, ps.size());
  EXPECT_EQ(r.assignment.labels, lloyd_kmeans(ps, init, 100).assignment.labels);
}

TEST(Pruned, ConvergedInputTerminates) {
  const PointSet ps = random_blobs(150, 2, 3, 8);
  const auto first = lloyd_kmeans(ps, seed_centroids(ps, 3, 8), 300);
  const auto again = pruned_kmeans(ps, first.centroids, default_width(ps, 3), 300);
  EXPECT_EQ(again.iterations, 1);
  EXPECT_EQ(again.trace.front().deviation, 0.0);
  EXPECT_EQ(again.assignment.labels, first.assignment.labels);
}

TEST(Pruned, SkipsPointsOnSeparatedData) {
  const PointSet ps = random_blobs(400, 2, 4, 13);
  const auto r = pruned_kmeans(ps, seed_centroids(ps, 4, 13), default_width(ps, 4), 300);
  EXPECT_LT(r.total_visits(), static_cast<std::size_t>(r.iterations) * ps.size());
}

TEST(Pruned, HalvingWidthNeverAddsVisits) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const PointSet ps = random_blobs(300, 3, 5, seed + 400);
    const Centroids init = seed_centroids(ps, 5, seed);
    const double w = default_width(ps, 5) * 4.0;
    std::size_t prev = SIZE_MAX;
    for (double width : {w, w / 2, w / 4, w / 8}) {
      const std::size_t visits = pruned_kmeans(ps, init, width, 300).total_visits();
      EXPECT_LE(visits, prev) << "seed " << seed << " width " << width;
      prev = visits;
    }
    ++checked;
  }
  EXPECT_EQ(checked, 30);
}

TEST(Pruned, RejectsBadArguments) {
  const PointSet ps = unit_square();
  EXPECT_THROW(pruned_kmeans(ps, Centroids(2, 2, {0, 0, 1, 1}), 0.0, 10), ArgumentError);
  EXPECT_THROW(pruned_kmeans(ps, Centroids(1, 2, {0, 0}), 1.0, 10), ArgumentError);
}

TEST(IntervalIndex, BucketsAndTags) {
  IntervalIndex idx(0.5, 3);
  idx.place(0, 0.2);
  idx.place(1, 1.3);
  idx.place(2, 1.1);
  EXPECT_EQ(idx.bucket_of(0), 0);
  EXPECT_EQ(idx.bucket_of(1), 2);
  EXPECT_EQ(idx.live_intervals(), 2u);
  idx.shift(0.1);
  EXPECT_DOUBLE_EQ(idx.tag_of(1), 1.0 - 0.2);
  EXPECT_DOUBLE_EQ(idx.last_deviation(), 0.1);
  EXPECT_EQ(idx.take_expired(), std::vector<std::size_t>{0});
  idx.shift(0.5);
  EXPECT_EQ(idx.take_expired(), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(idx.live_intervals(), 0u);
  EXPECT_THROW(idx.tag_of(1), LookupError);
}

TEST(ClusterPoints, DeterministicAcrossThreads) {
  const PointSet ps = random_blobs(2000, 4, 6, 21);
  ClusterOptions opt;
  opt.k = 6;
  opt.seed = 99;
  parallel::set_thread_count(1);
  const auto a = cluster_points(ps, opt);
  parallel::set_thread_count(6);
  const auto b = cluster_points(ps, opt);
  parallel::set_thread_count(0);
  EXPECT_EQ(a.assignment.labels, b.assignment.labels);
  EXPECT_EQ(a.centroids, b.centroids);
  EXPECT_EQ(a.assignment.objective, b.assignment.objective);
}

TEST(ClusterPoints, RestartsKeepTheBestObjective) {
  const PointSet ps = random_blobs(300, 3, 5, 4);
  ClusterOptions opt;
  opt.k = 5;
  opt.seed = 12;
  double prev = cluster_points(ps, opt).assignment.objective;
  for (int r = 2; r <= 8; ++r) {
    opt.restarts = r;
    const auto a = cluster_points(ps, opt);
    EXPECT_LE(a.assignment.objective, prev);
    EXPECT_EQ(a.assignment.labels, cluster_points(ps, opt).assignment.labels);
    prev = a.assignment.objective;
  }
  opt.restarts = 0;
  EXPECT_THROW(cluster_points(ps, opt), ArgumentError);
}

TEST(LoadPoints, HeaderIdsAndErrors) {
  const PointSet a = load_points_text("id,x,y\np,1,2\nq,3,4\n");
  EXPECT_EQ(a.size(), 2u);
  EXPECT_EQ(a.dims(), 2u);
  EXPECT_EQ(a.ids(), (std::vector<std::string>{"p", "q"}));
  const PointSet b = load_points_text("1.5\n2.5\n\n3\n");
  EXPECT_EQ(b.size(), 3u);
  EXPECT_EQ(b.ids()[2], "2");
  try {
    load_points_text("x,y\n1,2\n1,z\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 2u);
  }
  EXPECT_THROW(load_points_text("1,2\n3\n"), ParseError);
  EXPECT_THROW(load_points_text("id,x\n"), ParseError);
}
