#include <gtest/gtest.h>

#include <cmath>

#include "vpfp/diagnostics.hpp"
#include "vpfp/error.hpp"
#include "vpfp/scenario.hpp"
#include "vpfp/weak_form.hpp"

using namespace vpfp;

namespace {

struct Run {
  CoupledProblem pb;
  History hist;
};

Run simulate(const std::string& extra, int steps) {
  const std::string text =
      "[grid]\nnx = 32\nnv = 32\n[initial]\nkinetic = maxwellian\nkinetic_density = 0.5\n"
      "density_perturbation = 0.2\nfluid = shear\nshear_amplitude = 0.3\n[boundary]\ninflow = maxwellian\n"
      "inflow_density = 0.5\n[field]\nbackground = uniform\nlevel = 0.5\n" +
      extra;
  const auto s = parse_scenario(Config::parse(text, "diag.cfg"));
  Run r{build_problem(s), {}};
  auto st = initial_state(s, r.pb);
  const double dt = scenario_dt(s, r.pb, st);
  r.hist.push_back({st, {}});
  for (int n = 0; n < steps; ++n) {
    auto res = advance(r.pb, st, dt, s.fixed_point);
    st = res.state;
    r.hist.push_back({res.state, res.record});
  }
  return r;
}

}  // namespace

TEST(Diagnostics, LedgerRowZeroHasZeroMargin) {
  const auto r = simulate("", 5);
  const auto led = energy_ledger(r.pb, r.hist, LedgerLevel::Base);
  ASSERT_EQ(led.rows.size(), 6u);
  EXPECT_NEAR(led.rows[0].margin, 0.0, 1e-13);
  EXPECT_EQ(led.terms.size(), led.rows[0].values.size());
  EXPECT_THROW(led.index("nope"), Error);
}

TEST(Diagnostics, MarginDefinitionIsRhsMinusLhs) {
  const auto r = simulate("", 5);
  const auto led = energy_ledger(r.pb, r.hist, LedgerLevel::Base);
  for (const auto& row : led.rows) {
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t k = 0; k < led.terms.size(); ++k) {
      if (led.terms[k].side > 0) lhs += row.values[k];
      if (led.terms[k].side < 0) rhs += row.values[k];
    }
    EXPECT_NEAR(row.lhs, lhs, 1e-12);
    EXPECT_NEAR(row.rhs, rhs, 1e-12);
    EXPECT_DOUBLE_EQ(row.margin, row.rhs - row.lhs);
  }
}

TEST(Diagnostics, BuilderMatchesBatch) {
  const auto r = simulate("[params]\neps = 0.01\ndelta = 0.01\n", 6);
  const auto batch = energy_ledger(r.pb, r.hist, LedgerLevel::EpsDelta);
  EnergyLedgerBuilder b(r.pb, LedgerLevel::EpsDelta);
  for (const auto& s : r.hist) b.push(s);
  ASSERT_EQ(b.ledger().rows.size(), batch.rows.size());
  for (std::size_t k = 0; k < batch.rows.size(); ++k) EXPECT_EQ(b.ledger().rows[k].values, batch.rows[k].values);
  EXPECT_GT(batch.value(batch.rows.size() - 1, "art_pressure"), 0.0);
}

TEST(Diagnostics, MassBalanceDefectsTiny) {
  const auto r = simulate("", 8);
  for (const auto& m : mass_balance_report(r.pb, r.hist)) {
    EXPECT_LT(std::abs(m.kinetic_defect), 1e-12);
    EXPECT_LT(std::abs(m.fluid_defect), 1e-12);
  }
}

TEST(Diagnostics, MomentInterpolationExponents) {
  const auto r = simulate("", 0);
  const auto rep = moment_interpolation_report(r.hist[0].state.f, 5);
  EXPECT_DOUBLE_EQ(rep.p_max_n, 6.0);
  EXPECT_DOUBLE_EQ(rep.p_max_j, 3.0);
  EXPECT_GE(rep.m_value, rep.sup_f);
  EXPECT_FALSE(rep.entries.empty());
}

TEST(Diagnostics, MomentRow) {
  const auto r = simulate("", 0);
  const auto m = moment_row(r.hist[0].state);
  EXPECT_NEAR(m.mass, r.hist[0].state.f.mass(), 1e-15);
  EXPECT_GE(m.m2, 0.0);
}

TEST(WeakForm, FactorsAndSupports) {
  const auto b = bump(0.5, 0.25);
  EXPECT_EQ(b.f(0.8), 0.0);
  EXPECT_DOUBLE_EQ(b.f(0.5), 1.0);
  const double hgt = 1e-6;
  EXPECT_NEAR(b.d1(0.6), (b.f(0.6 + hgt) - b.f(0.6 - hgt)) / (2 * hgt), 1e-6);
  const auto t = time_taper(2.0);
  EXPECT_EQ(t.f(2.0), 0.0);
  const auto w = wall_profile(1.0, 0);
  EXPECT_EQ(w.f(1.0), 0.0);
  EXPECT_EQ(w.f(0.0), 1.0);
}

TEST(WeakForm, InvalidTestFunctionRejected) {
  const auto r = simulate("", 0);
  TestFunction tf{2, "bad_poisson", time_taper(1.0), wall_profile(1.0, 0), constant_factor()};
  try {
    check_test_function(r.pb, tf, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidTestFunction);
  }
}

TEST(WeakForm, BuilderMatchesBatch) {
  const auto r = simulate("", 6);
  const double T = r.hist.back().state.t;
  const auto tests = default_testset(r.pb, T);
  const auto batch = weak_form_residual(r.pb, r.hist, tests);
  WeakFormBuilder b(r.pb, tests, T);
  for (const auto& s : r.hist) b.push(s);
  const auto inc = b.report();
  ASSERT_EQ(inc.entries.size(), batch.entries.size());
  for (std::size_t k = 0; k < inc.entries.size(); ++k)
    EXPECT_NEAR(inc.entries[k].residual, batch.entries[k].residual, 1e-14);
}
