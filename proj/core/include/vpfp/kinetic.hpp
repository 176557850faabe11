#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "vpfp/grid.hpp"
#include "vpfp/stencil.hpp"

namespace vpfp {

// Phase-space number density f[x-cell, v-cell] >= 0 at time t.
// Storage is x-major: values[ix * v.size() + iv].
struct PhaseField {
  SpatialGrid x;
  VelocityGrid v;
  std::vector<double> values;
  double t = 0.0;

  PhaseField() = default;
  PhaseField(SpatialGrid xg, VelocityGrid vg, double time = 0.0);

  double& operator()(std::size_t ix, std::size_t iv) { return values[ix * v.size() + iv]; }
  double operator()(std::size_t ix, std::size_t iv) const { return values[ix * v.size() + iv]; }
  double phase_volume() const { return x.cell_volume() * v.cell_volume(); }
  double mass() const;
  // (sum f^p dx dv)^(1/p); p = infinity gives the max.
  double lp_norm(double p) const;

  // Samples fn(x, v) at cell centres.
  static PhaseField sample(const SpatialGrid& xg, const VelocityGrid& vg,
                           const std::function<double(const std::array<double, 3>&, const std::array<double, 3>&)>& fn,
                           double time = 0.0);
};

struct MomentFields {
  std::vector<double> n;   // int f dv
  VectorField j;           // int v f dv, one vector per velocity component
  std::vector<double> e2;  // int |v|^2 f dv
};

MomentFields compute_moments(const PhaseField& f);

// Inflow data g on Sigma^- = {(x, v) : x on a wall, v . nu(x) < 0}. Values are
// stored for every (boundary face, v-cell) pair; entries outside Sigma^- must be 0.
class InflowData {
 public:
  InflowData() = default;
  static InflowData zero(const SpatialGrid& xg, const VelocityGrid& vg);
  static InflowData from_function(const SpatialGrid& xg, const VelocityGrid& vg,
                                  const std::function<double(const BoundaryFace&, const std::array<double, 3>& v)>& fn);
  // Wraps caller-supplied values; validate() decides whether they are usable.
  static InflowData from_values(const SpatialGrid& xg, const VelocityGrid& vg,
                                std::vector<std::vector<double>> face_values);

  bool empty() const noexcept { return values_.empty(); }
  double value(std::size_t face, std::size_t iv) const { return values_.empty() ? 0.0 : values_[face][iv]; }
  const std::vector<std::vector<double>>& values() const noexcept { return values_; }
  InflowData scaled(double factor) const;

  // Throws InvalidInflow for negative, non-finite, or off-Sigma^- entries.
  void validate(const SpatialGrid& xg, const VelocityGrid& vg) const;
  // sup g  and  (int g^p |v.nu| dsigma dv)^(1/p) per unit time.
  double sup() const;
  double lp_rate(const SpatialGrid& xg, const VelocityGrid& vg, double p) const;

 private:
  std::vector<std::vector<double>> values_;
};

// Time integral over one step of the signed normal flux through each boundary
// face per v-cell: flux_dt[face][iv] = int (v . nu) f_face dt. Positive entries
// are outflow through Sigma^+ (interior upwind values), negative entries inflow
// through Sigma^- (values of g). Faces follow SpatialGrid::boundary_faces().
struct KineticTrace {
  std::vector<std::vector<double>> flux_dt;

  static KineticTrace zero(const SpatialGrid& xg, const VelocityGrid& vg);
  void add(const KineticTrace& other);
  // sum over Sigma^+ (resp. Sigma^-) of weight(v) |flux_dt| dv dsigma.
  double outflow(const SpatialGrid& xg, const VelocityGrid& vg,
                 const std::function<double(const std::array<double, 3>&)>& weight) const;
  double inflow(const SpatialGrid& xg, const VelocityGrid& vg,
                const std::function<double(const std::array<double, 3>&)>& weight) const;
};

struct KineticOptions {
  bool periodic = false;       // periodic x (test mode); no boundary traces
  double cfl_safety = 1.0;     // dt * max|v| / h_x <= cfl_safety
};

struct KineticStepResult {
  PhaseField f;
  KineticTrace trace;
  double velocity_edge_fraction = 0.0;  // mass share in the outermost v-cells
};

// One Strang step: half x-transport, implicit velocity Fokker-Planck with
// drift (u_eff - v - grad_phi), half x-transport. 1D-1V only.
KineticStepResult vfp_step(const PhaseField& f, std::span<const double> u_eff, std::span<const double> grad_phi,
                           double dt, const InflowData& g, const KineticOptions& options = {});

// Largest admissible step for the x-transport.
double kinetic_cfl_limit(const PhaseField& f, double cfl_safety = 1.0);

// gamma^+ f weighted by v.nu on Sigma^+: out[face][iv] = f(cell, iv) (v.nu) if v.nu > 0, else 0.
std::vector<std::vector<double>> outflow_trace(const PhaseField& f);
double outflow_trace_flux(const PhaseField& f, std::size_t face);

// Coefficients of the l-th moment identity in dimension d: d/dt M_l has
// -l M_l + l (l + d - 2) M_{l-2}.
struct MomentIdentityCoefficients {
  double relaxation;
  double diffusion;
};
MomentIdentityCoefficients moment_identity_coefficients(int l, int dim);

// int |v|^p f dx dv
double velocity_moment(const PhaseField& f, double p);

struct MomentHistoryEntry {
  double t = 0.0;
  PhaseField f;
  std::vector<double> u_eff;     // d components per cell, interleaved
  std::vector<double> grad_phi;  // d components per cell, interleaved
  KineticTrace trace;            // fluxes of the step leaving this entry
};

// Right-hand side of the l-th moment identity at one entry; boundary terms use
// the recorded trace divided by dt.
double moment_identity_rhs(const MomentHistoryEntry& entry, int l, double dt);

// |(M_l^{n+1} - M_l^n)/dt - RHS^n| for each step of the history.
std::vector<double> moment_identity_residual(std::span<const MomentHistoryEntry> history, int l);

struct LpMargin {
  double t;
  double bound;
  double norm;
  double margin;
};
// bound(t) = exp(d t / p') (||f0||_p + ||g||_{L^p((0,t) x Sigma^-)}).
std::vector<LpMargin> lp_growth_check(std::span<const PhaseField> series, const InflowData& g, double p);

// u_eff = u chi(|u|), chi = 1 on [0, N], 0 on [N+1, inf), linear between.
// `u` is interleaved with `dim` components per cell.
std::vector<double> cutoff_velocity(std::span<const double> u, double level, int dim = 1);

struct PreparedInitialData {
  PhaseField f;
  double relative_mass_change = 0.0;
  std::vector<double> moments;  // int |v|^k f for k = 0..kappa0
};
// Smooth radial cutoff in v (1 for |v| <= 0.9 V_max, 0 at |v| >= V_max).
PreparedInitialData prepare_initial_data(const PhaseField& f0, int kappa0, double max_loss_fraction = 1e-6);
double velocity_cutoff_profile(double speed, double vmax);

}  // namespace vpfp
