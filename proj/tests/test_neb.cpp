#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mep/error.hpp"
#include "mep/neb.hpp"
#include "oracles.hpp"

using namespace mep;

namespace {

ParamVector v2(double x, double y) {
  ParamVector p(2);
  p << x, y;
  return p;
}

bool bit_equal(const ParamVector& a, const ParamVector& b) { return (a.array() == b.array()).all(); }

/// Bowl that reports NaN once x exceeds a limit.
class Poisoned final : public Landscape {
 public:
  std::size_t dim() const override { return 2; }
  std::string name() const override { return "poisoned"; }

 protected:
  Evaluation compute(const ParamVector& p) const override {
    if (p[1] > 0.5) return {std::nan(""), ParamVector::Zero(2)};
    return {-p[1], v2(0, -1)};
  }
};

}  // namespace

TEST(ElasticBandEnergy, Examples) {
  const Chain c({v2(0, 0), v2(1, 0), v2(3, 0)});
  EXPECT_EQ(elastic_band_energy(c, {5, 2, 7}, 0.0), 2.0);

  ParamVector a(1), b(1), m(1);
  a << 0;
  m << 1;
  b << 2;
  EXPECT_EQ(elastic_band_energy(Chain({a, m, b}), {0, 3, 0}, 2.0), 5.0);

  const Chain flat({v2(1, 1), v2(1, 1), v2(1, 1), v2(1, 1)});
  EXPECT_EQ(elastic_band_energy(flat, {0, 0.25, 0.25, 0}, 3.0), 0.5);
}

TEST(LossForce, Examples) {
  EXPECT_TRUE(bit_equal(loss_force_perp(v2(1, 1), v2(1, 0)), v2(0, -1)));
  EXPECT_EQ(loss_force_perp(v2(3, 0), v2(1, 0)).norm(), 0.0);
  EXPECT_TRUE(bit_equal(loss_force_perp(v2(0, 2.5), v2(1, 0)), v2(0, -2.5)));
  EXPECT_THROW(loss_force_perp(v2(1, 1), v2(2, 0)), Error);
}

TEST(LossForce, OrthogonalToTangent) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 1);
  for (int k = 0; k < 500; ++k) {
    ParamVector grad(7), tau(7);
    for (int i = 0; i < 7; ++i) grad[i] = g(rng) * 100, tau[i] = g(rng);
    tau.normalize();
    const ParamVector f = loss_force_perp(grad, tau);
    EXPECT_LE(std::abs(f.dot(tau)), 1e-10 * f.norm());
  }
}

TEST(SpringForce, Examples) {
  const Chain c({v2(0, 0), v2(1, 0), v2(3, 0)});
  EXPECT_TRUE(bit_equal(spring_force_parallel(c, 1, 2.0, v2(1, 0)), v2(2, 0)));
  const Chain even({v2(0, 0), v2(1, 0), v2(2, 0)});
  EXPECT_EQ(spring_force_parallel(even, 1, 2.0, v2(1, 0)).norm(), 0.0);
  EXPECT_EQ(spring_force_parallel(c, 1, 0.0, v2(1, 0)).norm(), 0.0);
}

TEST(NebRelax, ZeroStepsLeavesChainUnchanged) {
  const Chain c({v2(-1, 1), v2(-0.2, 0.7), v2(0.9, 0.1), v2(1, 1)});
  NebConfig cfg;
  cfg.steps = 0;
  const auto r = neb_relax(c, *make_double_well(), cfg);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_TRUE(bit_equal(r.chain[i], c[i]));
  EXPECT_TRUE(r.max_interior_loss.empty());
}

TEST(NebRelax, GradientAlongChainDoesNotMoveIt) {
  const Chain c = Chain::straight(v2(0, 0), v2(4, 0), 3);
  NebConfig cfg;
  cfg.steps = 100;
  cfg.learning_rate = 0.1;
  cfg.weight_decay = 0.0;
  const auto r = neb_relax(c, *make_linear(v2(1.5, 0)), cfg);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LT((r.chain[i] - c[i]).norm(), 1e-9);
}

TEST(NebRelax, DoubleWellFollowsSteepestDescentPath) {
  auto f = make_double_well();
  const Chain init = Chain::straight(v2(-1, 1), v2(1, 1), 9);
  NebConfig cfg;
  cfg.steps = 2000;
  cfg.learning_rate = 0.01;

  double initial_max = 0;
  for (std::size_t i = 1; i + 1 < init.size(); ++i) initial_max = std::max(initial_max, f->loss(init[i]));

  std::size_t checked = 0;
  OptimizerState state;
  const auto r = neb_relax(init, *f, cfg, state, [&](const NebIteration& it) {
    for (std::size_t k = 0; k < it.tangents.size(); ++k) {
      EXPECT_LE(std::abs(it.loss_forces[k].dot(it.tangents[k])), 1e-10 * std::max(it.loss_forces[k].norm(), 1e-300));
      ++checked;
    }
  });
  EXPECT_EQ(checked, 2000u * 9u);
  EXPECT_TRUE(bit_equal(r.chain.front(), init.front()));
  EXPECT_TRUE(bit_equal(r.chain.back(), init.back()));
  ASSERT_EQ(r.max_interior_loss.size(), 2000u);

  double final_max = 0;
  for (std::size_t i = 1; i + 1 < r.chain.size(); ++i) final_max = std::max(final_max, f->loss(r.chain[i]));
  EXPECT_LE(final_max, 1.05);
  EXPECT_LE(final_max, initial_max);

  const auto branch = oracle::double_well_mep_branch();
  for (const auto& p : r.chain.pivots()) {
    const Eigen::Vector2d mirrored(std::abs(p[0]), p[1]);
    EXPECT_LT(oracle::distance_to_polyline(mirrored, branch), 0.05) << p.transpose();
  }
}

TEST(NebRelax, WorkerCountDoesNotChangeResult) {
  auto f = make_random_gaussian_wells(4, 5);
  const Chain init = Chain::straight(v2(-1.5, -1), v2(1.2, 1.4), 7);
  NebConfig cfg;
  cfg.steps = 300;
  cfg.learning_rate = 0.05;
  cfg.spring_constant = 0.5;
  const auto serial = neb_relax(init, *f, cfg);
  cfg.workers = 4;
  const auto threaded = neb_relax(init, *f, cfg);
  for (std::size_t i = 0; i < init.size(); ++i) EXPECT_TRUE(bit_equal(serial.chain[i], threaded.chain[i]));
  EXPECT_EQ(serial.max_interior_loss, threaded.max_interior_loss);
}

TEST(NebRelax, SpringForceIsParallel) {
  auto f = make_double_well();
  NebConfig cfg;
  cfg.steps = 50;
  cfg.learning_rate = 0.01;
  cfg.spring_constant = 1.0;
  OptimizerState state;
  neb_relax(Chain::straight(v2(-1, 1), v2(1, 1), 5), *f, cfg, state, [](const NebIteration& it) {
    for (std::size_t k = 0; k < it.tangents.size(); ++k) {
      const ParamVector& s = it.spring_forces[k];
      const ParamVector perp = s - s.dot(it.tangents[k]) * it.tangents[k];
      EXPECT_LE(perp.norm(), 1e-12 * std::max(1.0, s.norm()));
    }
  });
  EXPECT_EQ(state.velocity.size(), 5u);
}

TEST(NebRelax, NonFiniteLossReportsIteration) {
  const Chain c = Chain::straight(v2(0, 0), v2(2, 0), 3);
  NebConfig cfg;
  cfg.steps = 100;
  cfg.learning_rate = 0.1;
  cfg.momentum = 0.0;
  cfg.weight_decay = 0.0;
  try {
    neb_relax(c, Poisoned{}, cfg);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Divergence);
    ASSERT_TRUE(e.step().has_value());
    EXPECT_EQ(*e.step(), 6u);
  }
}

TEST(NebRelax, InvalidConfig) {
  const Chain c = Chain::straight(v2(0, 0), v2(2, 0), 3);
  NebConfig cfg;
  cfg.momentum = 1.0;
  EXPECT_THROW(neb_relax(c, *make_bowl(), cfg), Error);
  cfg = NebConfig{};
  cfg.learning_rate = 0.0;
  EXPECT_THROW(neb_relax(c, *make_bowl(), cfg), Error);
}
