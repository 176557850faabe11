#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "vpfp/error.hpp"
#include "vpfp/scenario.hpp"

using namespace vpfp;

namespace {

const char* kBase =
    "[grid]\nnx = 32\nnv = 32\n[initial]\nkinetic = maxwellian\nfluid = uniform\n";

Scenario parse(const std::string& extra) { return parse_scenario(Config::parse(std::string(kBase) + extra, "s.cfg")); }

std::vector<std::string> failing(const Scenario& s) {
  std::vector<std::string> out;
  for (const auto& i : validate_scenario(s).items)
    if (!i.pass) out.push_back(i.hypothesis);
  return out;
}

}  // namespace

TEST(Scenario, DefaultMaxwellianPasses) {
  const auto s = parse("");
  const auto r = validate_scenario(s);
  EXPECT_TRUE(r.ok()) << r.text();
}

TEST(Scenario, GammaViolation) {
  EXPECT_EQ(failing(parse("[params]\ngamma = 1.4\n")), std::vector<std::string>{"γ > 3/2"});
}

TEST(Scenario, BetaViolationNamesBound) {
  const auto f = failing(parse("[params]\nbeta = 4\ngamma = 1.6\n"));
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0], "β > max(γ, 9/2)");
}

// One violation per hypothesis; each is reported alone.
TEST(Scenario, RejectsExactlyEachNegation) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"[params]\ngamma = 1.5\n", "γ > 3/2"},
      {"[params]\nmu1 = 0\n", "μ1 > 0"},
      {"[params]\nmu1 = 0.1\nmu2 = -0.1\n", "2μ1 + 3μ2 ≥ 0"},
      {"[params]\nbeta = 4.5\n", "β > max(γ, 9/2)"},
      {"[params]\nkappa0 = 4\n", "κ0 ≥ 5"},
      {"[boundary]\nu_left = 0.1\nu_right = 0.2\nrho_left = 0\n", "ρ̲_B > 0"},
      {"[initial]\nkinetic_density = -1\n", "f0 ≥ 0"},
      {"[initial]\nrho0 = 0\n", "∫ρ0 dx > 0"},
      {"[boundary]\ninflow = maxwellian\ninflow_density = -0.5\n", "g ≥ 0"},
      {"[initial]\nrho0 = 1e300\n", "finite energy"},
  };
  for (const auto& [extra, name] : cases) {
    const auto f = failing(parse(extra));
    ASSERT_EQ(f.size(), 1u) << extra;
    EXPECT_EQ(f[0], name) << extra;
  }
  // Boundary values of each hypothesis that must still pass.
  EXPECT_TRUE(failing(parse("[params]\nmu1 = 1.5\nmu2 = -1\n")).empty());
  EXPECT_TRUE(failing(parse("[params]\nkappa0 = 5\nbeta = 4.6\n")).empty());
}

TEST(Scenario, UnknownKeyIsParseError) {
  try {
    parse("[params]\ngama = 1.6\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(e.detail().find("gama"), std::string::npos);
    EXPECT_NE(e.detail().find("s.cfg:"), std::string::npos);
  }
}

TEST(Scenario, BadEnumValue) {
  EXPECT_THROW(parse("[boundary]\nramp = cubic\n"), Error);
}

TEST(Scenario, RefinedHalvesMesh) {
  auto s = parse("[time]\ndt = 0.001\n");
  const auto r = refined(s);
  EXPECT_EQ(r.nx, 2 * s.nx);
  EXPECT_EQ(r.nv, 2 * s.nv);
  EXPECT_DOUBLE_EQ(r.dt, 0.0005);
}

TEST(Scenario, DtLandsOnEndTime) {
  const auto s = parse("[time]\nt_end = 0.1\n");
  const auto pb = build_problem(s);
  const auto st = initial_state(s, pb);
  const double dt = scenario_dt(s, pb, st);
  const double steps = s.t_end / dt;
  EXPECT_NEAR(steps, std::round(steps), 1e-9);
  EXPECT_LE(dt, s.cfl * coupled_cfl_limit(pb, st) * (1 + 1e-12));
}

TEST(Scenario, InitialFluidMatchesWalls) {
  const auto s = parse_scenario(Config::parse(
      "[grid]\nnx = 32\nnv = 32\n[boundary]\nu_left = 0.1\nu_right = 0.3\n"
      "[initial]\nkinetic = maxwellian\nfluid = shear\nshear_amplitude = 0.2\n",
      "s.cfg"));
  const auto pb = build_problem(s);
  const auto st = initial_state(s, pb);
  EXPECT_NEAR(st.fluid.u.front(), pb.fluid_bc.u_inf.front(), 0.03);
  EXPECT_NEAR(st.fluid.u.back(), pb.fluid_bc.u_inf.back(), 0.03);
}
