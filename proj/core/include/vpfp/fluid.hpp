#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "vpfp/grid.hpp"
#include "vpfp/kinetic.hpp"

namespace vpfp {

struct FluidParams {
  double gamma = 1.6;   // adiabatic exponent
  double mu1 = 0.1;     // shear viscosity
  double mu2 = 0.0;     // second viscosity
  double eps = 0.0;     // artificial viscosity / quartic regularization weight
  double delta = 0.0;   // artificial pressure weight
  double beta = 5.0;    // artificial pressure exponent

  // 2 mu1 + mu2 in one dimension: S(grad u) = (2 mu1 + mu2) u_x.
  double longitudinal_viscosity() const { return 2.0 * mu1 + mu2; }
  double pressure(double rho) const;
  double sound_speed(double rho) const;
};

// Cell-centred density and velocity (one dimension).
struct FluidState {
  std::vector<double> rho;
  std::vector<double> u;
};

using Tensor = std::array<std::array<double, 3>, 3>;

// S = mu1 (G + G^T) + mu2 tr(G) I on the leading dim x dim block.
Tensor stress(const Tensor& grad_u, const FluidParams& params, int dim);
double contract(const Tensor& a, const Tensor& b, int dim);

enum class Ramp { Linear, Smooth };
double ramp_value(Ramp ramp, double s);

struct Extension {
  std::vector<double> u_inf;  // dim components per cell, interleaved
  std::vector<double> div;    // discrete divergence per cell
  double layer = 0.0;         // layer width that satisfied div >= 0
  bool affine_fallback = false;
};

using BoundaryVelocity = std::function<std::array<double, 3>(const std::array<double, 3>& x)>;

// u_inf(x) = u_B(pi(x)) phi(dist(x, boundary) / h), pi the nearest-wall
// projection. If div u_inf < 0 somewhere in {dist < h}, h is halved until the
// condition holds or h drops below one cell. In one dimension the affine
// interpolant of the two wall values is tried last.
Extension build_extension(const SpatialGrid& grid, const BoundaryVelocity& u_boundary, double layer,
                          Ramp ramp = Ramp::Smooth);

// One-dimensional boundary data: wall velocities, inflow densities and the
// extension field. Side 0 is x = 0 (nu = -1), side 1 is x = L (nu = +1).
struct FluidBoundary {
  bool periodic = false;
  std::array<double, 2> u_wall{0.0, 0.0};
  std::array<double, 2> rho_wall{1.0, 1.0};  // rho_B, used on Gamma_in only
  std::vector<double> u_inf;

  double normal_velocity(int side) const { return side == 0 ? -u_wall[0] : u_wall[1]; }
  bool inflow(int side) const { return !periodic && normal_velocity(side) < 0.0; }
  bool outflow(int side) const { return !periodic && normal_velocity(side) > 0.0; }
  double min_inflow_density() const;
};

FluidBoundary make_fluid_boundary(const SpatialGrid& grid, double u_left, double u_right, double rho_left,
                                  double rho_right, double layer, Ramp ramp = Ramp::Smooth);
FluidBoundary make_periodic_boundary(const SpatialGrid& grid);

// Data recorded by the continuity step at each wall.
struct FluidTrace {
  std::array<double, 2> mass_flux_dt{0.0, 0.0};  // outward (-eps d_x rho + rho u).nu times dt
  std::array<double, 2> rho_trace{0.0, 0.0};     // adjacent cell density
};

struct ContinuityResult {
  std::vector<double> rho;
  std::vector<double> face_flux;  // x-directed advective mass flux at the nx+1 faces
  FluidTrace trace;
};

// Upwind advection plus implicit eps-diffusion; wall fluxes follow the
// regularized flux condition (rho_B u_B.nu on Gamma_in, rho u_B.nu elsewhere).
ContinuityResult continuity_step(const SpatialGrid& grid, std::span<const double> rho, std::span<const double> u,
                                 double dt, double eps, const FluidBoundary& bdry);

// Velocities at the nx+1 faces (walls carry u_B).
std::vector<double> face_velocity(std::span<const double> u, const FluidBoundary& bdry);
// (u_{i+1/2} - u_{i-1/2}) / h
std::vector<double> velocity_divergence(const SpatialGrid& grid, std::span<const double> u,
                                        const FluidBoundary& bdry);

// Semi-implicit momentum update. Drag j - n u_eff - n (u' - u_tilde) is implicit
// in u'; at a fixed point u' = u_tilde it equals j - n u_eff.
std::vector<double> momentum_step(const SpatialGrid& grid, const FluidState& state, const ContinuityResult& cont,
                                  const MomentFields& moments, std::span<const double> u_eff,
                                  std::span<const double> u_tilde, double dt, const FluidParams& params,
                                  const FluidBoundary& bdry);

// Largest dt allowed by the explicit fluid terms.
double fluid_cfl_limit(const SpatialGrid& grid, const FluidState& state, const FluidParams& params,
                       const FluidBoundary& bdry);

// int S(grad w) : grad w with w = u - u_inf, face gradients and Dirichlet ghosts
// (w = 0 on the walls), the same stencil as the implicit viscous operator.
double viscous_dissipation(const SpatialGrid& grid, std::span<const double> u, const FluidParams& params,
                           const FluidBoundary& bdry);
// Face gradients of w = u - u_inf (nx+1 values).
std::vector<double> relative_velocity_gradient(const SpatialGrid& grid, std::span<const double> u,
                                               const FluidBoundary& bdry);

struct DensityBoundsMargin {
  double t;
  double lower_bound;
  double upper_bound;
  double lower_margin;  // min rho - lower bound
  double upper_margin;  // upper bound - max rho
};
// rho_series[n] at times[n]; divu_sup[n] = ||div u||_inf used over [t_n, t_{n+1}].
std::vector<DensityBoundsMargin> density_bounds_check(std::span<const std::vector<double>> rho_series,
                                                      std::span<const double> times,
                                                      std::span<const double> divu_sup);

}  // namespace vpfp
