#include <gtest/gtest.h>

#include <cmath>

#include "commscape/error.hpp"
#include "commscape/parallel.hpp"
#include "commscape/similarity.hpp"
#include "fixtures.hpp"

using namespace commscape;

namespace {

void expect_same_inventory(const WalkInventory& a, const WalkInventory& b) {
  ASSERT_EQ(a.p_max, b.p_max);
  ASSERT_EQ(a.totals, b.totals);
  ASSERT_EQ(a.counts, b.counts);
}

}  // namespace

TEST(Weights, DefaultHalving) {
  const WeightScheme two = default_weights(2);
  ASSERT_EQ(two.p_max(), 2);
  EXPECT_EQ(two.weight(1), 0.5);
  EXPECT_EQ(two.weight(2), 0.25);
  EXPECT_EQ(default_weights(1).weights().size(), 1u);
  const WeightScheme eight = default_weights(8);
  for (int l = 2; l <= 8; ++l) EXPECT_LT(eight.weight(l), eight.weight(l - 1));
  EXPECT_THROW(default_weights(0), ArgumentError);
}

TEST(Weights, RejectsNonDecreasingOrNonPositive) {
  EXPECT_THROW(WeightScheme({0.5, 0.5}), ArgumentError);
  EXPECT_THROW(WeightScheme({0.5, 0.6}), ArgumentError);
  EXPECT_THROW(WeightScheme({0.5, 0.0}), ArgumentError);
  EXPECT_THROW(WeightScheme({}), ArgumentError);
  EXPECT_NO_THROW(WeightScheme({3.0, 2.0, 1.0}));
}

TEST(Weights, WalkLengthCap) {
  EXPECT_EQ(capped_walk_length(3, 4), 1);
  EXPECT_EQ(capped_walk_length(6, 4), 4);
  EXPECT_EQ(capped_walk_length(5, 4), 3);
  EXPECT_EQ(capped_walk_length(2, 4), 1);
}

TEST(Walks, TriangleHandCounts) {
  const Graph g = fixtures::triangle();
  for (const WalkInventory& inv : {reference::enumerate_walks(g, 0, 2), walk_count_dp(g, 0, 2)}) {
    EXPECT_EQ(inv.total(1), 2.0);
    EXPECT_EQ(inv.total(2), 4.0);
    EXPECT_EQ(inv.count(2, 1), 1.0);
    EXPECT_EQ(inv.count(2, 0), 2.0);
  }
  const auto walks = reference::list_walks(g, 0, 2, 100);
  EXPECT_EQ(walks.size(), 6u);
  EXPECT_EQ(walks.front(), (std::vector<NodeId>{0, 1}));
}

TEST(Walks, IsolatedNodeAndSink) {
  const Graph iso = Graph::from_arcs({7}, {{0, 1}});
  const auto inv = walk_count_dp(iso, 7, 3);
  for (double t : inv.totals) EXPECT_EQ(t, 0.0);

  const Graph arc = Graph::from_arcs({}, {{0, 1}});
  for (const WalkInventory& w : {reference::enumerate_walks(arc, 0, 3), walk_count_dp(arc, 0, 3)}) {
    EXPECT_EQ(w.total(1), 1.0);
    EXPECT_EQ(w.total(2), 0.0);
    EXPECT_EQ(w.total(3), 0.0);
  }
  EXPECT_THROW(walk_count_dp(arc, 9, 2), LookupError);
  EXPECT_THROW(reference::enumerate_walks(arc, 9, 2), LookupError);
}

TEST(Walks, StarCenterReturnsThroughEveryLeaf) {
  for (int d = 1; d <= 6; ++d) {
    std::vector<std::pair<NodeId, NodeId>> arcs;
    for (int leaf = 1; leaf <= d; ++leaf) {
      arcs.emplace_back(0, leaf);
      arcs.emplace_back(leaf, 0);
    }
    const auto inv = walk_count_dp(Graph::from_arcs({}, arcs), 0, 2);
    EXPECT_EQ(inv.total(2), d);
    EXPECT_EQ(inv.count(2, 0), d);
  }
}

TEST(Walks, PathGraphLengthTwo) {
  EXPECT_EQ(walk_count_dp(fixtures::path3(), 0, 2).count(2, 2), 1.0);
}

TEST(Walks, DynamicProgramMatchesRecursionOnRandomGraphs) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 240; ++seed) {
    const std::size_t n = 2 + seed % 6;
    const Graph g = fixtures::random_connected(n, 0.1 + 0.05 * static_cast<double>(seed % 9), seed);
    const int p = 1 + static_cast<int>(seed % 4);
    for (NodeIndex a = 0; a < g.node_count(); ++a) {
      const auto dp = walk_count_dp(g, g.id_of(a), p);
      const auto en = reference::enumerate_walks(g, g.id_of(a), p);
      expect_same_inventory(dp, en);
      const auto brute = fixtures::brute_walk_counts(g, a, p);
      for (int l = 1; l <= p; ++l) {
        for (NodeIndex b = 0; b < g.node_count(); ++b) {
          ASSERT_EQ(dp.count(l, b), static_cast<double>(brute[l - 1][b]));
        }
      }
    }
    ++checked;
  }
  EXPECT_GE(checked, 200);
}

TEST(Walks, DynamicProgramMatchesEnumerationExhaustively) {
  for (std::size_t n : {2u, 3u, 4u}) {
    for (const Graph& g : fixtures::all_connected_digraphs(n)) {
      for (NodeIndex a = 0; a < g.node_count(); ++a) {
        expect_same_inventory(walk_count_dp(g, g.id_of(a), 4),
                              reference::enumerate_walks(g, g.id_of(a), 4));
      }
    }
  }
}

TEST(Transition, TriangleValues) {
  const auto inv = walk_count_dp(fixtures::triangle(), 0, 2);
  EXPECT_EQ(transition_probability(inv, 1, 1), 0.5);
  EXPECT_EQ(transition_probability(inv, 1, 2), 0.25);
  EXPECT_THROW(transition_probability(inv, 1, 0), ArgumentError);
  EXPECT_THROW(transition_probability(inv, 1, 3), ArgumentError);
}

TEST(Transition, SinkHasZeroProbability) {
  const Graph g = Graph::from_arcs({}, {{0, 1}});
  const auto inv = walk_count_dp(g, 1, 3);
  for (int p = 1; p <= 3; ++p) EXPECT_EQ(transition_probability(inv, 0, p), 0.0);
}

TEST(Transition, RowsAreStochastic) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Graph g = fixtures::random_connected(3 + seed % 5, 0.3, seed + 1000);
    for (NodeIndex a = 0; a < g.node_count(); ++a) {
      const auto inv = walk_count_dp(g, g.id_of(a), 4);
      for (int p = 1; p <= 4; ++p) {
        if (inv.total(p) == 0.0) continue;
        double sum = 0.0;
        for (NodeIndex b = 0; b < g.node_count(); ++b) sum += transition_probability(inv, b, p);
        EXPECT_NEAR(sum, 1.0, 1e-12);
      }
    }
  }
}

TEST(Access, TrianglePairValue) {
  const auto inv = walk_count_dp(fixtures::triangle(), 0, 2);
  EXPECT_NEAR(access_value(inv, 1, WeightScheme({0.5, 0.25})), 0.3125, 1e-12);
}

TEST(Access, PathGraphMatchesEnumeration) {
  const Graph g = fixtures::path3();
  const WeightScheme ws = default_weights(2);
  const auto h = [&](NodeIndex a, NodeIndex b) {
    return access_value(walk_count_dp(g, g.id_of(a), 2), b, ws);
  };
  EXPECT_NEAR(h(0, 1), 0.5, 1e-12);
  EXPECT_NEAR(h(0, 2), 0.125, 1e-12);
  EXPECT_NEAR(h(1, 0), 0.25, 1e-12);
  EXPECT_NEAR(h(1, 2), 0.25, 1e-12);
  for (NodeIndex a = 0; a < 3; ++a) {
    for (NodeIndex b = 0; b < 3; ++b) {
      EXPECT_NEAR(h(a, b), fixtures::brute_access(g, a, b, {0.5, 0.25}), 1e-15);
    }
  }
}

TEST(Access, BoundedAndMonotoneInLength) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = fixtures::random_connected(6, 0.25, seed + 77);
    for (NodeIndex a = 0; a < g.node_count(); ++a) {
      const auto inv = walk_count_dp(g, g.id_of(a), 5);
      for (NodeIndex b = 0; b < g.node_count(); ++b) {
        double prev = 0.0;
        for (int p = 1; p <= 5; ++p) {
          const WeightScheme ws = default_weights(p);
          const double h = access_value(inv, b, ws);
          EXPECT_GE(h, prev);
          EXPECT_LE(h, ws.total() + 1e-15);
          prev = h;
        }
      }
    }
  }
}

TEST(Access, UnreachablePairIsZero) {
  const Graph g = Graph::from_arcs({}, {{0, 1}, {1, 2}, {2, 3}});
  EXPECT_EQ(access_value(walk_count_dp(g, 0, 2), 3, default_weights(2)), 0.0);
  EXPECT_EQ(access_value(walk_count_dp(g, 3, 2), 0, default_weights(2)), 0.0);
}

TEST(FeatureSpacing, TriangleIsDegenerate) {
  const auto fs = feature_spacing_matrix(fixtures::triangle(), default_weights(2));
  EXPECT_TRUE(fs.degenerate);
  for (double v : fs.values) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(fs.h_min, 0.3125, 1e-12);
  EXPECT_NEAR(fs.h_max, 0.3125, 1e-12);
}

TEST(FeatureSpacing, PathGraphEndpoints) {
  const auto fs = feature_spacing_matrix(fixtures::path3(), default_weights(2));
  EXPECT_FALSE(fs.degenerate);
  EXPECT_EQ(fs.at(0, 2), 0.0);
  EXPECT_EQ(fs.at(2, 0), 0.0);
  EXPECT_EQ(fs.at(0, 1), 1.0);
  EXPECT_EQ(fs.at(2, 1), 1.0);
  EXPECT_NEAR(fs.at(1, 0), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(fs.at(1, 2), 1.0 / 3.0, 1e-12);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(fs.at(i, i), 0.0);
}

TEST(FeatureSpacing, NeedsTwoNodes) {
  EXPECT_THROW(feature_spacing_matrix(Graph::from_arcs({1}, {}), default_weights(1)), ArgumentError);
}

TEST(FeatureSpacing, NormalizationAttainsBothEnds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Graph g = fixtures::random_connected(4 + seed % 5, 0.2, seed + 500);
    const auto fs = feature_spacing_matrix(g, default_weights(capped_walk_length(g.node_count(), 4)));
    bool zero = false;
    bool one = false;
    for (std::size_t r = 0; r < fs.rows(); ++r) {
      for (std::size_t c = 0; c < fs.cols(); ++c) {
        const double v = fs.at(r, c);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        if (r == c) continue;
        zero |= v == 0.0;
        one |= v == 1.0;
      }
    }
    if (!fs.degenerate) {
      EXPECT_TRUE(zero);
      EXPECT_TRUE(one);
    }
  }
}

TEST(FeatureSpacing, MatchesBruteForceBeforeNormalization) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Graph g = fixtures::random_connected(3 + seed % 5, 0.3, seed + 9000);
    const std::vector<double> w{0.5, 0.25, 0.125};
    const WeightScheme ws(w);
    std::vector<NodeIndex> all(g.node_count());
    for (NodeIndex i = 0; i < g.node_count(); ++i) all[i] = i;
    const auto h = access_matrix(g, ws, all);
    for (NodeIndex a = 0; a < g.node_count(); ++a) {
      for (NodeIndex b = 0; b < g.node_count(); ++b) {
        const double expect = a == b ? 0.0 : fixtures::brute_access(g, a, b, w);
        EXPECT_NEAR(h[a * g.node_count() + b], expect, 1e-15);
      }
    }
  }
}

TEST(FeatureSpacing, ParallelMatchesSerialReference) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Graph g = fixtures::random_connected(5 + seed % 3, 0.3, seed + 31);
    const WeightScheme ws = default_weights(3);
    const auto fast = feature_spacing_matrix(g, ws);
    const auto slow = reference::feature_spacing_matrix(g, ws);
    ASSERT_EQ(fast.values.size(), slow.values.size());
    EXPECT_EQ(fast.degenerate, slow.degenerate);
    for (std::size_t i = 0; i < fast.values.size(); ++i) {
      EXPECT_NEAR(fast.values[i], slow.values[i], 1e-12);
    }
  }
}

TEST(FeatureSpacing, BitIdenticalAcrossThreadCounts) {
  const Graph g = fixtures::random_connected(60, 0.05, 4242);
  const WeightScheme ws = default_weights(4);
  parallel::set_thread_count(1);
  const auto one = feature_spacing_matrix(g, ws);
  parallel::set_thread_count(4);
  const auto four = feature_spacing_matrix(g, ws);
  parallel::set_thread_count(0);
  const auto again = feature_spacing_matrix(g, ws);
  EXPECT_EQ(one.values, four.values);
  EXPECT_EQ(one.values, again.values);
  EXPECT_EQ(one.h_min, four.h_min);
  EXPECT_EQ(one.h_max, four.h_max);
}

TEST(FeatureSpacing, LandmarksEqualToAllNodesMatchFullMatrix) {
  const Graph g = fixtures::random_connected(7, 0.3, 12);
  const WeightScheme ws = default_weights(3);
  const auto full = feature_spacing_matrix(g, ws);
  const std::vector<NodeId> all(g.node_ids().begin(), g.node_ids().end());
  const auto lm = feature_spacing_to_landmarks(g, ws, all);
  EXPECT_EQ(lm.values, full.values);
  EXPECT_EQ(lm.h_min, full.h_min);
  EXPECT_EQ(lm.h_max, full.h_max);
}

TEST(FeatureSpacing, SingleLandmarkWithEqualValuesIsDegenerate) {
  const Graph g = fixtures::triangle();
  const std::vector<NodeId> one{0};
  const auto lm = feature_spacing_to_landmarks(g, default_weights(2), one);
  EXPECT_EQ(lm.cols(), 1u);
  EXPECT_TRUE(lm.degenerate);
  for (double v : lm.values) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(feature_spacing_to_landmarks(g, default_weights(2), std::vector<NodeId>{}),
               ArgumentError);
  EXPECT_THROW(feature_spacing_to_landmarks(g, default_weights(2), std::vector<NodeId>{8}),
               LookupError);
}

TEST(FeatureSpacing, SymmetrizedMatrixIsSymmetric) {
  const Graph g = fixtures::random_connected(8, 0.2, 5);
  SimilarityOptions opts;
  opts.symmetrize = true;
  const auto fs = feature_spacing_matrix(g, default_weights(3), opts);
  for (std::size_t r = 0; r < fs.rows(); ++r) {
    for (std::size_t c = 0; c < fs.cols(); ++c) EXPECT_EQ(fs.at(r, c), fs.at(c, r));
  }
}
