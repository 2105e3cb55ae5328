#include <gtest/gtest.h>

#include <algorithm>

#include "mep/autoneb.hpp"
#include "mep/error.hpp"

using namespace mep;

namespace {

ParamVector v1(double x) {
  ParamVector p(1);
  p << x;
  return p;
}

ParamVector v2(double x, double y) {
  ParamVector p(2);
  p << x, y;
  return p;
}

bool bit_equal(const ParamVector& a, const ParamVector& b) { return (a.array() == b.array()).all(); }

AutoNebSchedule scaled_schedule() {
  AutoNebSchedule s;
  for (int i = 0; i < 4; ++i) s.cycles.push_back({200, 0.05});
  for (int i = 0; i < 4; ++i) s.cycles.push_back({200, 0.005});
  return s;
}

/// Worked example: only segment 1 deviates from interpolation.
DenseProfile worked_example() {
  const PivotLosses pivots{1.0, 0.2, 0.0, 0.6, 2.0};
  std::vector<std::vector<double>> samples{{0.6}, {0.7}, {0.3}, {1.3}};
  return make_profile(pivots, samples, 1);
}

}  // namespace

TEST(StandardSchedule, FourteenCycles) {
  const auto s = AutoNebSchedule::standard();
  ASSERT_EQ(s.cycles.size(), 14u);
  std::size_t steps = 0;
  for (const auto& c : s.cycles) steps += c.steps;
  EXPECT_EQ(steps, 16000u);
  EXPECT_EQ(s.cycles[4].steps, 2000u);
  EXPECT_EQ(s.cycles[6].learning_rate, 0.01);
  EXPECT_EQ(s.cycles[13].learning_rate, 0.001);
  EXPECT_EQ(s.insert_threshold, 0.2);
  EXPECT_EQ(s.dense_count, 9u);
  EXPECT_EQ(s.momentum, 0.9);
  EXPECT_EQ(s.weight_decay, 1e-4);
}

TEST(EvaluateDense, LinearLandscapeHasNoResidual) {
  const Chain c({v2(0, 0), v2(1, 2), v2(-1, 3), v2(2, 2)});
  const auto p = evaluate_dense(c, *make_linear(v2(0.7, -1.3)), 9);
  ASSERT_EQ(p.segments(), 3u);
  for (const auto& seg : p.residual) {
    for (double r : seg) EXPECT_NEAR(r, 0.0, 1e-12);
  }
}

TEST(EvaluateDense, SingleMidpoint) {
  const auto p = evaluate_dense(Chain({v1(0), v1(2)}), *make_linear(v1(1)), 1);
  ASSERT_EQ(p.alphas.size(), 1u);
  EXPECT_EQ(p.alphas[0], 0.5);
  EXPECT_EQ(p.true_loss[0][0], 1.0);
  EXPECT_THROW(evaluate_dense(Chain({v1(0), v1(2)}), *make_linear(v1(1)), 0), Error);
}

TEST(EvaluateDense, BarrierBulgesAboveInterpolation) {
  auto f = make_double_well();
  for (std::size_t m : {1u, 4u, 9u}) {
    const auto p = evaluate_dense(Chain::straight(v2(-1, 1), v2(1, 1), 3), *f, m);
    // Middle segments touch x = 0 from either side.
    const std::size_t mid = m / 2;
    EXPECT_GT(p.true_loss[1][m - 1 - mid], p.guess[1][m - 1 - mid]);
    EXPECT_GT(p.true_loss[2][mid], p.guess[2][mid]);
  }
}

TEST(EvaluateDense, ResidualsRecomputeExactly) {
  auto f = make_random_gaussian_wells(2, 4);
  const auto p = evaluate_dense(Chain::straight(v2(-2, -1), v2(2, 1.5), 4), *f, 7);
  for (std::size_t s = 0; s < p.segments(); ++s) {
    for (std::size_t a = 0; a < p.alphas.size(); ++a) {
      EXPECT_EQ((p.true_loss[s][a] - p.guess[s][a]) / p.normalizer, p.residual[s][a]);
      const double alpha = p.alphas[a];
      EXPECT_EQ(p.guess[s][a], p.pivot_losses[s] * (1.0 - alpha) + p.pivot_losses[s + 1] * alpha);
    }
  }
}

TEST(InsertionCandidates, WorkedExample) {
  const auto profile = worked_example();
  const auto c = insertion_candidates(profile, profile.pivot_losses, 0.2, 4);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].segment, 1u);
  EXPECT_EQ(c[0].alpha, 0.5);
  EXPECT_NEAR(c[0].residual, 0.3, 1e-12);
}

TEST(InsertionCandidates, ThresholdAndCap) {
  const PivotLosses pivots{0.0, 1.0, 0.0};
  EXPECT_TRUE(insertion_candidates(make_profile(pivots, {{0.6}, {0.6}}, 1), pivots, 0.2, 4).empty());

  const auto two = make_profile(pivots, {{0.9}, {0.8}}, 1);
  const auto all = insertion_candidates(two, pivots, 0.2, 4);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].segment, 0u);
  EXPECT_EQ(all[1].segment, 1u);
  const auto capped = insertion_candidates(two, pivots, 0.2, 1);
  ASSERT_EQ(capped.size(), 1u);
  EXPECT_EQ(capped[0].segment, 0u);
}

TEST(InsertionCandidates, OnePerSegmentAtLargestResidual) {
  const PivotLosses pivots{0.0, 1.0};
  const auto p = make_profile(pivots, {{0.5, 1.2, 0.9}}, 3);
  const auto c = insertion_candidates(p, pivots, 0.2, 4);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].alpha, 0.5);
}

TEST(InsertionCandidates, FlatPathGuard) {
  const PivotLosses flat{2.0, 2.0, 2.0};
  const auto bump = make_profile(flat, {{2.0}, {2.5}}, 1);
  EXPECT_EQ(bump.normalizer, 2.0);
  const auto c = insertion_candidates(bump, flat, 0.2, 4);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].segment, 1u);

  const PivotLosses zeros{0.0, 0.0, 0.0};
  const auto quiet = make_profile(zeros, {{0.0}, {0.0}}, 1);
  EXPECT_EQ(quiet.normalizer, 1e-12);
  EXPECT_TRUE(insertion_candidates(quiet, zeros, 0.2, 4).empty());
}

TEST(InsertPivots, Splicing) {
  const Chain c({v1(0), v1(2)});
  EXPECT_EQ(insert_pivots(c, {}).size(), 2u);
  const auto mid = insert_pivots(c, {{0, 0.5, 1.0}});
  ASSERT_EQ(mid.size(), 3u);
  EXPECT_EQ(mid[1][0], 1.0);

  const Chain three({v1(0), v1(1), v1(3), v1(4)});
  const auto two = insert_pivots(three, {{2, 0.5, 0.4}, {0, 0.25, 0.3}});
  ASSERT_EQ(two.size(), 6u);
  const std::vector<double> expected{0, 0.25, 1, 3, 3.5, 4};
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(two[i][0], expected[i]);

  EXPECT_THROW(insert_pivots(three, {{1, 0.5, 0.4}, {1, 0.2, 0.3}}), Error);
  EXPECT_THROW(insert_pivots(three, {{3, 0.5, 0.4}}), Error);
}

TEST(AutoNeb, CoincidentEndpoints) {
  auto f = make_double_well();
  const auto r = auto_neb(v2(0.3, 0.2), v2(0.3, 0.2), *f, scaled_schedule());
  EXPECT_EQ(r.saddle.loss, f->loss(v2(0.3, 0.2)));
  for (const auto& p : r.chain.pivots()) EXPECT_TRUE(bit_equal(p, v2(0.3, 0.2)));
}

TEST(AutoNeb, DoubleWellSaddle) {
  auto f = make_double_well();
  const auto schedule = scaled_schedule();
  const ParamVector a = v2(-1, 1), b = v2(1, 1);
  const auto r = auto_neb(a, b, *f, schedule);
  EXPECT_GE(r.saddle.loss, 1.0);
  EXPECT_LE(r.saddle.loss, 1.02);
  EXPECT_TRUE(bit_equal(r.chain.front(), a));
  EXPECT_TRUE(bit_equal(r.chain.back(), b));

  double max_pivot = *std::max_element(r.profile.pivot_losses.begin(), r.profile.pivot_losses.end());
  EXPECT_GE(r.saddle.loss, max_pivot);

  ASSERT_EQ(r.cycles.size(), schedule.cycles.size());
  std::size_t previous = schedule.initial_pivots + 2;
  for (const auto& c : r.cycles) {
    EXPECT_EQ(c.pivots_before, previous);
    EXPECT_LE(c.inserted, schedule.insert_cap);
    previous = c.pivots_before + c.inserted;
  }
  EXPECT_EQ(r.chain.size(), previous);
  for (std::size_t k = 3; k < r.cycles.size(); ++k) EXPECT_LE(r.cycles[k].max_dense_loss, r.cycles[k - 1].max_dense_loss + 1e-12);
}

TEST(AutoNeb, InsertsPivotsOnCurvedPath) {
  auto f = make_random_gaussian_wells(12, 3);
  AutoNebSchedule s = scaled_schedule();
  s.initial_pivots = 1;
  const auto r = auto_neb(v2(-2, -2), v2(2, 2), *f, s);
  std::size_t inserted = 0;
  for (const auto& c : r.cycles) inserted += c.inserted;
  EXPECT_GT(inserted, 0u);
  EXPECT_EQ(r.chain.size(), 3u + inserted);
  EXPECT_EQ(r.saddle.loss, r.profile.max_loss());
}

TEST(AutoNeb, RejectsBadSchedule) {
  AutoNebSchedule s;
  EXPECT_THROW(auto_neb(v2(0, 0), v2(1, 1), *make_bowl(), s), Error);
  s = scaled_schedule();
  s.insert_threshold = 1.0;
  EXPECT_THROW(auto_neb(v2(0, 0), v2(1, 1), *make_bowl(), s), Error);
  EXPECT_THROW(auto_neb(v1(0), v2(1, 1), *make_bowl(), scaled_schedule()), Error);
}
