#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vpfp/error.hpp"
#include "vpfp/parallel.hpp"
#include "vpfp/particles.hpp"

using namespace vpfp;

namespace {

PhaseField maxwellian_box(double drift = 0.0) {
  const auto xg = SpatialGrid::line(1.0, 16);
  const VelocityGrid vg(1, 8.0, 64);
  return PhaseField::sample(xg, vg, [&](const auto&, const auto& v) {
    return std::exp(-(v[0] - drift) * (v[0] - drift) / 2.0) / std::sqrt(2.0 * std::numbers::pi);
  });
}

ParticleFields still_fields() {
  const auto xg = SpatialGrid::line(1.0, 16);
  return {xg, std::vector<double>(16, 0.0), std::vector<double>(16, 0.0), {}};
}

}  // namespace

TEST(Particles, SoftenedForce) {
  EXPECT_DOUBLE_EQ(softened_force(0.0, 0.1), 0.0);
  EXPECT_NEAR(softened_force(10.0, 1e-3), 0.5, 1e-8);
  EXPECT_NEAR(softened_force(-10.0, 1e-3), -0.5, 1e-8);
}

TEST(Particles, InitMatchesMass) {
  const auto f = maxwellian_box(0.5);
  const auto e = init_ensemble(f, 20000, 9);
  EXPECT_EQ(e.X.size(), 20000u);
  EXPECT_NEAR(e.mass, f.mass(), 1e-12);
  double mean = 0.0;
  for (double v : e.V) mean += v / 20000.0;
  EXPECT_NEAR(mean, 0.5, 0.03);
}

TEST(Particles, EmptyDistribution) {
  auto f = maxwellian_box();
  std::fill(f.values.begin(), f.values.end(), 0.0);
  try {
    init_ensemble(f, 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyDistribution);
  }
}

TEST(Particles, ReproducibleFromSeed) {
  const auto f = maxwellian_box();
  auto a = init_ensemble(f, 2500, 77);
  auto b = init_ensemble(f, 2500, 77);
  auto c = init_ensemble(f, 2500, 78);
  const auto fl = still_fields();
  const InteractionKernel k{KernelMode::Mesh, 0.05};
  for (int n = 0; n < 5; ++n) a = em_step(a, fl, 1e-3, k), b = em_step(b, fl, 1e-3, k);
  EXPECT_EQ(a.X, b.X);
  EXPECT_EQ(a.V, b.V);
  EXPECT_NE(a.V, c.V);
}

TEST(Particles, WorkerCountInvariant) {
  const auto f = maxwellian_box();
  const auto fl = still_fields();
  const InteractionKernel k{KernelMode::DirectSum, 0.05};
  const int saved = worker_count();
  set_worker_count(1);
  auto a = em_step(init_ensemble(f, 3000, 5), fl, 1e-3, k);
  set_worker_count(3);
  auto b = em_step(init_ensemble(f, 3000, 5), fl, 1e-3, k);
  set_worker_count(saved);
  EXPECT_EQ(a.X, b.X);
  EXPECT_EQ(a.V, b.V);
}

TEST(Particles, ReflectingWallsKeepParticlesInside) {
  auto e = init_ensemble(maxwellian_box(3.0), 4000, 2);
  const auto fl = still_fields();
  for (int n = 0; n < 50; ++n) e = em_step(e, fl, 5e-3, {});
  for (double x : e.X) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
}

TEST(Particles, FrictionSignsDiffer) {
  ParticleFields fl = still_fields();
  fl.u.assign(16, 1.0);
  auto e = init_ensemble(maxwellian_box(), 4000, 3, ParticleWalls::Periodic);
  EmOptions kin{FrictionSign::KineticConsistent, true, false};
  EmOptions lit{FrictionSign::Reversed, true, false};
  auto a = e, b = e;
  for (int n = 0; n < 100; ++n) a = em_step(a, fl, 1e-2, {}, kin), b = em_step(b, fl, 1e-2, {}, lit);
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < e.count; ++i) ma += a.V[i] / e.count, mb += b.V[i] / e.count;
  EXPECT_NEAR(ma, 1.0 - std::pow(0.99, 100), 0.05);
  EXPECT_LT(mb, -0.5);
}

TEST(Particles, GridMismatch) {
  auto e = init_ensemble(maxwellian_box(), 100, 1);
  ParticleFields fl{SpatialGrid::line(2.0, 16), std::vector<double>(16, 0.0), std::vector<double>(16, 0.0), {}};
  EXPECT_THROW(em_step(e, fl, 1e-3, {}), Error);
}

TEST(Particles, ChaosMetricShrinksWithCount) {
  const auto f = maxwellian_box();
  const auto small = chaos_metric(init_ensemble(f, 1000, 4), f);
  const auto large = chaos_metric(init_ensemble(f, 100000, 4), f);
  EXPECT_LT(large.j_gap, small.j_gap);
  EXPECT_LT(large.l1, small.l1);
}
