#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vpfp/fluid.hpp"
#include "vpfp/kinetic.hpp"
#include "vpfp/poisson.hpp"

namespace vpfp {

// Static data of a coupled run: grids, parameters and boundary/source data.
struct CoupledProblem {
  SpatialGrid x;
  VelocityGrid v;
  FluidParams params;
  FluidBoundary fluid_bc;
  InflowData g;
  Background c;
  int m = 1;                  // order of the Poisson regularization
  bool periodic = false;      // periodic x for kinetic and fluid (test mode)
  bool field = true;          // false: Phi = 0 (frozen)
  bool fluid_frozen = false;  // true: rho, u kept at their initial values
  bool velocity_frozen = false;  // true: u kept, rho transported (pure transport)
  std::function<double(double)> g_scale;  // time factor of g (empty: 1)
  double kinetic_cfl = 1.0;
};

// Inflow data in effect at time t.
InflowData inflow_at(const CoupledProblem& problem, double t);
double inflow_scale(const CoupledProblem& problem, double t);

struct CoupledState {
  PhaseField f;
  Potential phi;
  FluidState fluid;
  double t = 0.0;
};

struct FixedPointConfig {
  double cutoff = 1e6;  // N in chi(|u| <= N)
  double theta = 0.8;
  double tolerance = 1e-8;
  int max_iterations = 200;
  void validate() const;
};

// Potential of the Poisson operator configured in `problem` for density n.
Potential solve_field(const CoupledProblem& problem, std::span<const double> n);
// Initial state with Phi consistent with f.
CoupledState make_state(const CoupledProblem& problem, PhaseField f, FluidState fluid, double t = 0.0);

struct TOutput {
  std::vector<double> u;         // u_new
  std::vector<double> grad_phi;  // grad Phi_new
  KineticStepResult kinetic;
  Potential phi;
  ContinuityResult continuity;
  MomentFields moments;          // of f_new
  std::vector<double> u_eff;
};

// One application of the map T: kinetic step with (u_eff, grad Phi*), Poisson
// for the new density, continuity, then momentum with drag j_new - n_new u_eff.
TOutput apply_T(const CoupledProblem& problem, std::span<const double> u_tilde, std::span<const double> grad_phi_star,
                const CoupledState& state, double dt, double cutoff);

// Everything the diagnostics need about one committed step.
struct StepRecord {
  KineticTrace kinetic_trace;
  FluidTrace fluid_trace;
  std::vector<double> face_flux;
  std::vector<double> u_eff;
  std::vector<double> grad_phi_star;
  int iterations = 0;
  double residual = 0.0;
  double velocity_edge_fraction = 0.0;
};

struct Snapshot {
  CoupledState state;
  StepRecord step;  // the step that produced this snapshot (empty for t = 0)
};
using History = std::vector<Snapshot>;

struct FixedPointResult {
  CoupledState state;
  StepRecord record;
  std::vector<double> residuals;
};

// Relative sup-norm with floor 1, max over the velocity and field blocks.
double fixed_point_distance(std::span<const double> u_a, std::span<const double> g_a, std::span<const double> u_b,
                            std::span<const double> g_b);

// Damped Picard iteration for one step. Residual r_1 = |T(x_0) - x_0| and
// r_k = |T(x_{k-1}) - T(x_{k-2})|; the last T output is committed. Sub-solver
// failures and exhausting the iteration budget raise NoConvergence.
FixedPointResult picard_fixed_point(const CoupledProblem& problem, const CoupledState& state, double dt,
                                    const FixedPointConfig& cfg);

// picard_fixed_point plus consistency checks on the committed state.
FixedPointResult advance(const CoupledProblem& problem, const CoupledState& state, double dt,
                         const FixedPointConfig& cfg);

// Largest dt allowed by all sub-solvers at this state.
double coupled_cfl_limit(const CoupledProblem& problem, const CoupledState& state);

struct ContinuationPoint {
  double cutoff;
  double eps;
  double delta;
};

struct ContinuationRun {
  ContinuationPoint point;
  bool ok = false;
  std::string error;
  double min_margin = 0.0;
  double art_pressure = 0.0;  // final-time delta int rho^beta / (beta - 1)
  double eps_terms = 0.0;     // sum of eps-weighted ledger terms at the final time
  double max_velocity = 0.0;
  std::string fingerprint;    // hash of the final state
};

struct ContinuationCheck {
  std::string name;
  double observed;
  double expected;
  bool pass;
};

struct ContinuationReport {
  std::vector<ContinuationRun> runs;
  std::vector<ContinuationCheck> checks;
  bool all_pass() const;
};

// Throws InvalidArgument unless N is nondecreasing and eps, delta nonincreasing.
void validate_schedule(std::span<const ContinuationPoint> schedule);
// Runs `run_one` per schedule entry (errors are collected, the sweep continues)
// and checks that terms weighted by delta and eps scale with their weight and
// that an inactive cutoff leaves the result unchanged.
ContinuationReport continuation_sweep(std::span<const ContinuationPoint> schedule,
                                      const std::function<ContinuationRun(const ContinuationPoint&)>& run_one,
                                      double proportional_tolerance = 0.1);

}  // namespace vpfp
