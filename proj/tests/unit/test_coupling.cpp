#include <gtest/gtest.h>

#include <cmath>

#include "vpfp/coupling.hpp"
#include "vpfp/error.hpp"
#include "vpfp/scenario.hpp"

using namespace vpfp;

namespace {

Scenario base(const std::string& extra = "") {
  const std::string text =
      "[grid]\nnx = 32\nnv = 32\n[time]\nt_end = 0.05\n[initial]\nkinetic = maxwellian\nkinetic_density = 0.5\n"
      "density_perturbation = 0.2\nfluid = shear\nshear_amplitude = 0.2\n[boundary]\ninflow = maxwellian\n"
      "inflow_density = 0.5\n[field]\nbackground = uniform\nlevel = 0.5\n" +
      extra;
  return parse_scenario(Config::parse(text, "test.cfg"));
}

}  // namespace

TEST(Coupling, FixedPointConfigValidation) {
  FixedPointConfig c;
  c.theta = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c.theta = 0.5;
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Coupling, PicardConvergesAndResidualsDecrease) {
  const auto s = base();
  const auto pb = build_problem(s);
  const auto st = initial_state(s, pb);
  const double dt = scenario_dt(s, pb, st);
  auto cfg = s.fixed_point;
  cfg.tolerance = 1e-12;
  const auto r = picard_fixed_point(pb, st, dt, cfg);
  EXPECT_LE(r.record.iterations, 30);
  EXPECT_LE(r.residuals.back(), 1e-12);
  for (std::size_t k = 2; k < r.residuals.size(); ++k) EXPECT_LE(r.residuals[k], r.residuals[k - 1] * 1.0001);
}

TEST(Coupling, DecoupledConvergesInTwo) {
  auto s = base("");
  s.kinetic = "none";
  s.inflow = "none";
  const auto pb = build_problem(s);
  const auto st = initial_state(s, pb);
  const auto r = picard_fixed_point(pb, st, scenario_dt(s, pb, st), s.fixed_point);
  EXPECT_LE(r.record.iterations, 2);
}

TEST(Coupling, IterationBudgetRaisesNoConvergence) {
  const auto s = base();
  const auto pb = build_problem(s);
  const auto st = initial_state(s, pb);
  auto cfg = s.fixed_point;
  cfg.max_iterations = 1;
  cfg.tolerance = 1e-300;
  try {
    picard_fixed_point(pb, st, scenario_dt(s, pb, st), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
  }
}

TEST(Coupling, OversizedStepIsNoConvergence) {
  const auto s = base();
  const auto pb = build_problem(s);
  const auto st = initial_state(s, pb);
  try {
    picard_fixed_point(pb, st, 50.0 * coupled_cfl_limit(pb, st), s.fixed_point);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
  }
}

TEST(Coupling, DistanceIsRelativeSupWithFloor) {
  const std::vector<double> a{1.0, 0.0}, b{1.5, 0.0}, g{0.0}, h{0.25};
  EXPECT_DOUBLE_EQ(fixed_point_distance(a, g, b, g), 0.5 / 1.5);
  EXPECT_DOUBLE_EQ(fixed_point_distance(a, g, a, h), 0.25);
  const std::vector<double> big{10.0}, big2{11.0};
  EXPECT_DOUBLE_EQ(fixed_point_distance(big, g, big2, g), 1.0 / 11.0);
}

TEST(Coupling, ScheduleValidation) {
  std::vector<ContinuationPoint> ok{{10, 0.1, 0.1}, {100, 0.05, 0.1}};
  EXPECT_NO_THROW(validate_schedule(ok));
  std::vector<ContinuationPoint> bad{{10, 0.1, 0.1}, {5, 0.05, 0.1}};
  EXPECT_THROW(validate_schedule(bad), Error);
  std::vector<ContinuationPoint> bad2{{10, 0.1, 0.1}, {10, 0.2, 0.1}};
  EXPECT_THROW(validate_schedule(bad2), Error);
}

TEST(Coupling, SweepCollectsErrorsAndContinues) {
  const std::vector<ContinuationPoint> sched{{10, 0.02, 0.02}, {100, 0.02, 0.01}};
  int calls = 0;
  const auto rep = continuation_sweep(sched, [&](const ContinuationPoint& p) {
    ++calls;
    ContinuationRun r;
    r.point = p;
    if (p.cutoff == 10) {
      r.ok = false;
      r.error = "boom";
      return r;
    }
    r.ok = true;
    r.art_pressure = 1.0;
    return r;
  });
  EXPECT_EQ(calls, 2);
  EXPECT_EQ(rep.runs.size(), 2u);
  EXPECT_FALSE(rep.runs[0].ok);
  EXPECT_FALSE(rep.all_pass());
}

TEST(Coupling, AdvanceRejectsNonFiniteState) {
  const auto s = base();
  const auto pb = build_problem(s);
  auto st = initial_state(s, pb);
  st.fluid.u[3] = NAN;
  EXPECT_THROW(advance(pb, st, 1e-4, s.fixed_point), Error);
}
