#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vpfp/error.hpp"
#include "vpfp/kinetic.hpp"

using namespace vpfp;

namespace {

double maxwellian(double v, double drift = 0.0, double temp = 1.0) {
  return std::exp(-(v - drift) * (v - drift) / (2.0 * temp)) / std::sqrt(2.0 * std::numbers::pi * temp);
}

struct Box {
  SpatialGrid x = SpatialGrid::line(1.0, 32);
  VelocityGrid v{1, 8.0, 64};
};

}  // namespace

TEST(Kinetic, MomentsOfMaxwellian) {
  Box s;
  const auto f = PhaseField::sample(s.x, s.v, [](const auto&, const auto& v) { return maxwellian(v[0], 0.5); });
  const auto m = compute_moments(f);
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    EXPECT_NEAR(m.n[i], 1.0, 1e-10);
    EXPECT_NEAR(m.j[0][i], 0.5, 1e-10);
    EXPECT_NEAR(m.e2[i], 1.25, 1e-9);
  }
}

TEST(Kinetic, InflowValidation) {
  Box s;
  std::vector<std::vector<double>> vals(2, std::vector<double>(s.v.size(), 0.0));
  const std::size_t in = s.v.size() - 1;  // v > 0 enters through x = 0
  vals[0][0] = 1.0;
  EXPECT_THROW(InflowData::from_values(s.x, s.v, vals).validate(s.x, s.v), Error);
  vals[0][0] = 0.0;
  vals[0][in] = -1.0;
  EXPECT_THROW(InflowData::from_values(s.x, s.v, vals).validate(s.x, s.v), Error);
  vals[0][in] = NAN;
  EXPECT_THROW(InflowData::from_values(s.x, s.v, vals).validate(s.x, s.v), Error);
  auto ok = InflowData::from_function(s.x, s.v, [](const BoundaryFace& f, const auto& v) {
    return v[0] * f.normal[0] < 0.0 ? maxwellian(v[0]) : 0.0;
  });
  EXPECT_NO_THROW(ok.validate(s.x, s.v));
}

TEST(Kinetic, StepConservesMassWithTraces) {
  Box s;
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(0.5, 1.5);
  std::vector<double> amp(s.x.size());
  for (auto& a : amp) a = U(rng);
  const auto f = PhaseField::sample(s.x, s.v, [&](const auto& x, const auto& v) {
    return amp[static_cast<std::size_t>(x[0] * 32)] * maxwellian(v[0], 0.3);
  });
  const auto g = InflowData::from_function(s.x, s.v, [](const BoundaryFace& face, const auto& v) {
    return v[0] * face.normal[0] < 0.0 ? 0.4 * maxwellian(v[0]) : 0.0;
  });
  std::vector<double> u(32, 0.2), gp(32);
  for (int i = 0; i < 32; ++i) gp[i] = std::sin(2.0 * std::numbers::pi * s.x.center(0, i));
  const double dt = 0.5 * kinetic_cfl_limit(f);
  const auto r = vfp_step(f, u, gp, dt, g);
  const auto one = [](const std::array<double, 3>&) { return 1.0; };
  const double net = r.trace.outflow(s.x, s.v, one) - r.trace.inflow(s.x, s.v, one);
  EXPECT_NEAR(r.f.mass(), f.mass() - net, 1e-13);
}

TEST(Kinetic, PositivityPreserved) {
  Box s;
  const auto f = PhaseField::sample(s.x, s.v, [](const auto& x, const auto& v) {
    return x[0] < 0.5 && std::abs(v[0]) < 1.0 ? 1.0 : 0.0;
  });
  std::vector<double> u(32, 1.0), gp(32, 2.0);
  auto cur = f;
  const auto g = InflowData::zero(s.x, s.v);
  for (int n = 0; n < 20; ++n) cur = vfp_step(cur, u, gp, 0.9 * kinetic_cfl_limit(cur), g).f;
  for (double x : cur.values) EXPECT_GE(x, 0.0);
}

TEST(Kinetic, TimeStepTooLarge) {
  Box s;
  const auto f = PhaseField::sample(s.x, s.v, [](const auto&, const auto& v) { return maxwellian(v[0]); });
  std::vector<double> u(32, 0.0), gp(32, 0.0);
  try {
    vfp_step(f, u, gp, 10.0 * kinetic_cfl_limit(f), InflowData::zero(s.x, s.v));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TimeStepTooLarge);
  }
}

TEST(Kinetic, RelaxesTowardFluidVelocity) {
  Box s;
  auto f = PhaseField::sample(s.x, s.v, [](const auto&, const auto& v) { return maxwellian(v[0], -1.0); });
  KineticOptions o;
  o.periodic = true;
  std::vector<double> u(32, 0.5), gp(32, 0.0);
  for (int n = 0; n < 3200; ++n) f = vfp_step(f, u, gp, 0.0025, InflowData::zero(s.x, s.v), o).f;
  const auto m = compute_moments(f);
  EXPECT_NEAR(m.j[0][0] / m.n[0], 0.5, 1e-2);
}

TEST(Kinetic, MomentIdentityCoefficients) {
  EXPECT_EQ(moment_identity_coefficients(2, 3).relaxation, -2.0);
  EXPECT_EQ(moment_identity_coefficients(2, 3).diffusion, 6.0);
  EXPECT_EQ(moment_identity_coefficients(2, 1).diffusion, 2.0);
  EXPECT_EQ(moment_identity_coefficients(4, 1).relaxation, -4.0);
  EXPECT_EQ(moment_identity_coefficients(4, 1).diffusion, 12.0);
}

TEST(Kinetic, CutoffVelocity) {
  const std::vector<double> u{0.5, 2.0, 2.5, 4.0, -2.5};
  const auto c = cutoff_velocity(u, 2.0);
  EXPECT_EQ(c[0], 0.5);
  EXPECT_EQ(c[1], 2.0);
  EXPECT_NEAR(c[2], 2.5 * 0.5, 1e-15);
  EXPECT_EQ(c[3], 0.0);
  EXPECT_NEAR(c[4], -1.25, 1e-15);
}

TEST(Kinetic, PrepareInitialDataKeepsMass) {
  Box s;
  const auto f = PhaseField::sample(s.x, s.v, [](const auto&, const auto& v) { return maxwellian(v[0]); });
  const auto p = prepare_initial_data(f, 5);
  EXPECT_LT(p.relative_mass_change, 1e-6);
  ASSERT_EQ(p.moments.size(), 6u);
  EXPECT_NEAR(p.moments[2], 1.0, 1e-6);
}

TEST(Kinetic, LpBoundHoldsForPureRelaxation) {
  Box s;
  auto f = PhaseField::sample(s.x, s.v, [](const auto&, const auto& v) { return maxwellian(v[0], 1.0, 0.3); });
  std::vector<PhaseField> series{f};
  std::vector<double> u(32, 0.0), gp(32, 0.0);
  const auto g = InflowData::zero(s.x, s.v);
  for (int n = 0; n < 30; ++n) {
    f = vfp_step(f, u, gp, 0.5 * kinetic_cfl_limit(f), g).f;
    series.push_back(f);
  }
  for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
    for (const auto& m : lp_growth_check(series, g, p)) EXPECT_LE(m.norm, m.bound * (1.0 + 1e-3)) << "p = " << p;
  }
}
