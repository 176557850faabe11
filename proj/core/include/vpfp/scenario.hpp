#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vpfp/config.hpp"
#include "vpfp/coupling.hpp"
#include "vpfp/diagnostics.hpp"
#include "vpfp/particles.hpp"

namespace vpfp {

struct Scenario {
  std::string name = "scenario";
  Config config;
  std::uint64_t seed = 0;

  // [grid]
  double length = 1.0;
  int nx = 64;
  double vmax = 8.0;
  int nv = 64;
  bool periodic = false;

  // [time]
  double t_end = 1.0;
  double dt = 0.0;   // 0: cfl * stable step at t = 0
  double cfl = 0.5;
  int output_every = 1;
  int snapshot_every = 0;  // 0: first and last only

  // [params]
  FluidParams params;
  int m = 1;
  int kappa0 = 5;

  // [initial]
  std::string kinetic = "none";  // none | maxwellian | shifted_maxwellian | two_beam | file
  double kinetic_density = 1.0;
  double temperature = 1.0;
  double drift = 0.0;
  double beam_speed = 2.0;
  double density_perturbation = 0.0;
  int perturbation_mode = 1;
  std::string kinetic_file;
  std::string fluid = "uniform";  // uniform | shear | file
  double rho0 = 1.0;
  double u0 = 0.0;
  double shear_amplitude = 0.0;
  int shear_mode = 1;
  double rho_perturbation = 0.0;
  std::string fluid_file;

  // [boundary]
  double u_left = 0.0, u_right = 0.0;
  double rho_left = 1.0, rho_right = 1.0;
  double extension_layer = 0.25;
  Ramp ramp = Ramp::Smooth;
  std::string inflow = "none";  // none | maxwellian
  std::string inflow_sides = "both";
  double inflow_temperature = 1.0;
  double inflow_drift = 0.0;
  TimeProfile inflow_density{0.0};

  // [field]
  bool field = true;
  std::string background = "none";  // none | uniform | neutral | sine
  double background_level = 0.0;

  // [model]
  bool fluid_frozen = false;
  bool velocity_frozen = false;

  FixedPointConfig fixed_point;

  // [diagnostics]
  std::string ledger = "auto";  // auto | base | eps_delta
  bool weak_form = false;
  bool refinement = false;
  double margin_constant = kLedgerMarginConstant;

  // [particles]
  std::size_t particles = 0;
  double particle_dt = 0.0;  // 0: run dt
  KernelMode kernel = KernelMode::None;
  double softening = 0.05;
  FrictionSign friction_sign = FrictionSign::KineticConsistent;

  // [sweep]
  std::vector<ContinuationPoint> schedule;

  std::string config_hash() const;
};

// Reads every section; unknown keys are a ParseError naming line and key.
Scenario parse_scenario(const Config& config);
Scenario load_scenario(const std::string& path);

struct ValidationItem {
  std::string hypothesis;
  bool pass;
  std::string detail;
};
struct ValidationReport {
  std::vector<ValidationItem> items;
  bool ok() const;
  std::string text() const;
};
ValidationReport validate_scenario(const Scenario& s);

CoupledProblem build_problem(const Scenario& s);
PhaseField initial_kinetic(const Scenario& s, const SpatialGrid& xg, const VelocityGrid& vg);
FluidState initial_fluid(const Scenario& s, const SpatialGrid& xg);
// Initial state after the moment-preserving velocity cutoff of f0.
CoupledState initial_state(const Scenario& s, const CoupledProblem& problem);
// dt from the config or cfl * stable step of the initial state.
double scenario_dt(const Scenario& s, const CoupledProblem& problem, const CoupledState& state);

// One (h, dt) halving: nx and nv doubled, dt halved.
Scenario refined(const Scenario& s);
Scenario with_point(const Scenario& s, const ContinuationPoint& p);

}  // namespace vpfp
