#include <gtest/gtest.h>

#include <random>

#include "mep/error.hpp"
#include "mep/explorer.hpp"
#include "mep/train.hpp"
#include "oracles.hpp"

using namespace mep;

namespace {

ParamVector v2(double x, double y) {
  ParamVector p(2);
  p << x, y;
  return p;
}

LandscapeGraph nodes(std::size_t n) {
  LandscapeGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node(v2(static_cast<double>(i), 0), 0.0);
  return g;
}

AutoNebSchedule quick_schedule() {
  AutoNebSchedule s;
  for (int i = 0; i < 3; ++i) s.cycles.push_back({150, 0.05});
  for (int i = 0; i < 2; ++i) s.cycles.push_back({150, 0.005});
  return s;
}

std::vector<ParamVector> minima_of(const Landscape& f, const std::vector<GaussianWell>& wells) {
  std::vector<ParamVector> out;
  for (const auto& w : wells) out.push_back(train_minimum(f, v2(w.center[0], w.center[1]), TrainConfig{0.05, 0.9, 0.0, 2000, 0}));
  return out;
}

}  // namespace

TEST(Kruskal, Triangle) {
  auto g = nodes(3);
  const auto ab = g.add_edge(0, 1, 0.5);
  const auto bc = g.add_edge(1, 2, 0.3);
  const auto ca = g.add_edge(2, 0, 0.4);
  auto mst = kruskal_mst(g);
  std::sort(mst.begin(), mst.end());
  EXPECT_EQ(mst, (std::vector<std::size_t>{bc, ca}));
  (void)ab;
}

TEST(Kruskal, StarIsItsOwnTree) {
  auto g = nodes(5);
  for (std::size_t v = 1; v < 5; ++v) g.add_edge(0, v, 1.0 + static_cast<double>(v));
  EXPECT_EQ(kruskal_mst(g).size(), 4u);
}

TEST(Kruskal, TiesBreakByEdgeId) {
  auto g = nodes(3);
  const auto first = g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 1.0);
  const auto third = g.add_edge(0, 2, 1.0);
  const auto mst = kruskal_mst(g);
  EXPECT_NE(std::find(mst.begin(), mst.end(), first), mst.end());
  EXPECT_EQ(std::find(mst.begin(), mst.end(), third), mst.end());
}

TEST(Kruskal, DisconnectedGraphIsAnError) {
  auto g = nodes(4);
  g.add_edge(0, 1, 1.0);
  g.add_edge(2, 3, 1.0);
  try {
    kruskal_mst(g);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Disconnected);
    EXPECT_NE(std::string(e.what()).find("{0 1}"), std::string::npos);
  }
  EXPECT_THROW(ultrametric_bound(g, 0, 3), Error);
}

TEST(LandscapeGraph, KeepsBestEdgePerPair) {
  auto g = nodes(2);
  const auto first = g.add_edge(0, 1, 0.8);
  EXPECT_EQ(g.add_edge(1, 0, 0.9), first);
  const auto better = g.add_edge(0, 1, 0.6);
  EXPECT_NE(better, first);
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.edges()[0].saddle_loss, 0.6);
  EXPECT_EQ(kruskal_mst(g), std::vector<std::size_t>{better});
}

TEST(LandscapeGraph, SaddleBelowMinimumIsRejected) {
  LandscapeGraph g;
  g.add_node(v2(0, 0), 1.0);
  g.add_node(v2(1, 0), 0.5);
  EXPECT_THROW(g.add_edge(0, 1, 0.9), Error);
  EXPECT_NO_THROW(g.add_edge(0, 1, 1.0 - 1e-10));
  EXPECT_THROW(g.add_edge(0, 0, 2.0), Error);
}

TEST(UltrametricBound, Examples) {
  auto g = nodes(3);
  g.add_edge(0, 1, 0.5);
  g.add_edge(1, 2, 0.3);
  EXPECT_EQ(ultrametric_bound(g, 0, 2), 0.5);
  EXPECT_EQ(ultrametric_bound(g, 2, 1), 0.3);

  LandscapeGraph h;
  h.add_node(v2(0, 0), 0.25);
  h.add_node(v2(1, 0), 0.1);
  h.add_edge(0, 1, 0.7);
  EXPECT_EQ(ultrametric_bound(h, 0, 0), 0.25);
}

TEST(UltrametricBound, MatchesBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    auto g = nodes(n);
    std::vector<oracle::WeightedEdge> edges;
    // Random spanning tree first so the graph is connected, then extra edges.
    for (std::size_t v = 1; v < n; ++v) {
      const std::size_t u = rng() % v;
      const double weight = w(rng);
      g.add_edge(u, v, weight);
      edges.push_back({u, v, weight});
    }
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = u + 1; v < n; ++v) {
        if (!g.has_edge(u, v) && rng() % 2 == 0) {
          const double weight = w(rng);
          g.add_edge(u, v, weight);
          edges.push_back({u, v, weight});
        }
      }
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t c = a + 1; c < n; ++c) {
        EXPECT_EQ(ultrametric_bound(g, a, c), oracle::brute_force_minimax(n, edges, a, c));
      }
    }
  }
}

TEST(Explore, TwoMinimaNeedOneRun) {
  auto f = make_double_well();
  const auto r = explore({v2(-1, 1), v2(1, 1)}, *f, quick_schedule(), ExploreConfig{5, 0.1, 0});
  EXPECT_EQ(r.runs, 1u);
  EXPECT_EQ(r.graph.edges().size(), 1u);
  EXPECT_EQ(r.mst.size(), 1u);
  ASSERT_TRUE(r.graph.edges()[0].chain.has_value());
}

TEST(Explore, BudgetOfStarPhaseReturnsStar) {
  const std::vector<GaussianWell> wells{{{-2, 0}, 1.0, 0.7}, {{0, 1.8}, 1.1, 0.7}, {{2, 0}, 0.9, 0.7}, {{0, -1.8}, 1.2, 0.7}};
  auto f = make_gaussian_wells(wells, 4.2);
  const auto minima = minima_of(*f, wells);
  const auto r = explore(minima, *f, quick_schedule(), ExploreConfig{3, 0.0, 0});
  EXPECT_EQ(r.runs, 3u);
  ASSERT_EQ(r.graph.edges().size(), 3u);
  for (const auto& e : r.graph.edges()) EXPECT_EQ(e.u, 0u);
  EXPECT_EQ(r.history.size(), 1u);
  EXPECT_THROW(explore(minima, *f, quick_schedule(), ExploreConfig{2, 0.0, 0}), Error);
}

TEST(Explore, ThreeWellsMstNeverWorsens) {
  const std::vector<GaussianWell> wells{{{-2, 0}, 1.0, 0.8}, {{0, 1.5}, 1.2, 0.8}, {{2, 0}, 0.9, 0.8}};
  auto f = make_gaussian_wells(wells, 3.1);
  const auto r = explore(minima_of(*f, wells), *f, quick_schedule(), ExploreConfig{10, 0.0, 3});
  EXPECT_LE(r.runs, 10u);
  EXPECT_EQ(r.graph.edges().size(), 3u);
  for (std::size_t k = 1; k < r.history.size(); ++k) EXPECT_LE(r.history[k].mst_max_saddle, r.history[k - 1].mst_max_saddle);
  EXPECT_LE(r.history.back().mst_max_saddle, r.history.front().mst_max_saddle);
}

TEST(Explore, StopRatioEndsEarly) {
  const std::vector<GaussianWell> wells{{{-2, 0}, 1.0, 0.8}, {{0, 1.5}, 1.0, 0.8}, {{2, 0}, 1.0, 0.8}};
  auto f = make_gaussian_wells(wells, 3.0);
  const auto r = explore(minima_of(*f, wells), *f, quick_schedule(), ExploreConfig{10, 1.0, 0});
  EXPECT_EQ(r.runs, 2u);
}
