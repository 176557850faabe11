#include "vpfp/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vpfp/error.hpp"
#include "vpfp/linalg.hpp"
#include "vpfp/stencil.hpp"

namespace vpfp {

double FluidParams::pressure(double rho) const {
  double p = std::pow(rho, gamma);
  if (delta != 0.0) p += delta * std::pow(rho, beta);
  return p;
}

double FluidParams::sound_speed(double rho) const {
  double c2 = gamma * std::pow(rho, gamma - 1.0);
  if (delta != 0.0) c2 += delta * beta * std::pow(rho, beta - 1.0);
  return std::sqrt(std::max(0.0, c2));
}

Tensor stress(const Tensor& g, const FluidParams& params, int dim) {
  Tensor s{};
  double trace = 0.0;
  for (int a = 0; a < dim; ++a) trace += g[a][a];
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) s[a][b] = params.mu1 * (g[a][b] + g[b][a]) + (a == b ? params.mu2 * trace : 0.0);
  return s;
}

double contract(const Tensor& a, const Tensor& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) s += a[i][j] * b[i][j];
  return s;
}

double ramp_value(Ramp ramp, double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  return ramp == Ramp::Linear ? 1.0 - s : 0.5 * (1.0 + std::cos(std::numbers::pi * s));
}

// ---------------------------------------------------------------- extension

namespace {

struct WallHit {
  int axis;
  int side;
  double dist;
};

WallHit nearest_wall(const SpatialGrid& grid, const std::array<double, 3>& x) {
  WallHit best{0, 0, std::numeric_limits<double>::infinity()};
  for (int a = 0; a < grid.dim(); ++a) {
    const double lo = x[a];
    const double hi = grid.extent(a) - x[a];
    if (lo < best.dist) best = {a, 0, lo};
    if (hi < best.dist) best = {a, 1, hi};
  }
  return best;
}

double boundary_distance(const SpatialGrid& grid, const std::array<double, 3>& x) {
  return nearest_wall(grid, x).dist;
}

// Discrete divergence with wall ghosts from the boundary data itself.
std::vector<double> extension_divergence(const SpatialGrid& grid, const std::vector<double>& u_inf,
                                         const BoundaryVelocity& u_boundary) {
  const int d = grid.dim();
  std::vector<GhostedField> comps;
  comps.reserve(static_cast<std::size_t>(d));
  for (int c = 0; c < d; ++c) {
    std::vector<double> comp(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) comp[i] = u_inf[i * d + c];
    comps.emplace_back(grid, comp);
  }
  for (int c = 0; c < d; ++c) {
    for (const auto& face : grid.boundary_faces()) {
      if (face.axis != c) continue;  // div only reads normal ghosts
      const auto idx = grid.unflatten(face.cell);
      const double wall = u_boundary(face.center)[c];
      comps[c].set_ghost(c, face.side, idx, 2.0 * wall - u_inf[face.cell * d + c]);
    }
    comps[c].mark_filled(c);
    for (int a = 0; a < d; ++a)
      if (a != c) comps[c].fill(a, GhostRule::Neumann);
  }
  return div(comps);
}

bool layer_ok(const SpatialGrid& grid, const std::vector<double>& divu, double layer, std::size_t& worst,
              double& worst_value) {
  bool ok = true;
  worst_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (boundary_distance(grid, grid.cell_center(i)) >= layer) continue;
    if (divu[i] < worst_value) {
      worst_value = divu[i];
      worst = i;
    }
    if (divu[i] < -1e-12) ok = false;
  }
  return ok;
}

}  // namespace

Extension build_extension(const SpatialGrid& grid, const BoundaryVelocity& u_boundary, double layer, Ramp ramp) {
  if (!(layer > 0.0)) raise(ErrorCode::InvalidArgument, "extension layer width must be positive", "fluid");
  const int d = grid.dim();
  double hmin = std::numeric_limits<double>::infinity();
  for (int a = 0; a < d; ++a) hmin = std::min(hmin, grid.h(a));

  Extension ext;
  std::size_t worst = 0;
  double worst_value = 0.0;
  for (double h = layer; h >= hmin * (1.0 - 1e-12); h *= 0.5) {
    ext.u_inf.assign(grid.size() * static_cast<std::size_t>(d), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto x = grid.cell_center(i);
      const auto hit = nearest_wall(grid, x);
      auto p = x;
      p[hit.axis] = hit.side == 0 ? 0.0 : grid.extent(hit.axis);
      const auto ub = u_boundary(p);
      const double phi = ramp_value(ramp, hit.dist / h);
      for (int c = 0; c < d; ++c) ext.u_inf[i * d + c] = ub[c] * phi;
    }
    ext.div = extension_divergence(grid, ext.u_inf, u_boundary);
    if (layer_ok(grid, ext.div, h, worst, worst_value)) {
      ext.layer = h;
      return ext;
    }
  }
  if (d == 1) {
    const double l = grid.extent(0);
    const double ua = u_boundary({0.0, 0.0, 0.0})[0];
    const double ub = u_boundary({l, 0.0, 0.0})[0];
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double x = grid.center(0, static_cast<int>(i));
      ext.u_inf[i] = ua + (ub - ua) * x / l;
    }
    ext.div = extension_divergence(grid, ext.u_inf, u_boundary);
    if (layer_ok(grid, ext.div, layer, worst, worst_value)) {
      ext.layer = layer;
      ext.affine_fallback = true;
      return ext;
    }
  }
  raise(ErrorCode::ExtensionFailed,
        "div u_inf >= 0 in the boundary layer unachievable; worst cell " + std::to_string(worst) +
            " with div = " + std::to_string(worst_value),
        "fluid");
}

double FluidBoundary::min_inflow_density() const {
  double m = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 2; ++s)
    if (inflow(s)) m = std::min(m, rho_wall[s]);
  return m;
}

FluidBoundary make_fluid_boundary(const SpatialGrid& grid, double u_left, double u_right, double rho_left,
                                  double rho_right, double layer, Ramp ramp) {
  if (grid.dim() != 1) raise(ErrorCode::InvalidArgument, "fluid solver supports d = 1 only", "fluid");
  FluidBoundary b;
  b.u_wall = {u_left, u_right};
  b.rho_wall = {rho_left, rho_right};
  const double l = grid.extent(0);
  auto ub = [=](const std::array<double, 3>& x) -> std::array<double, 3> {
    return {x[0] < 0.5 * l ? u_left : u_right, 0.0, 0.0};
  };
  b.u_inf = build_extension(grid, ub, layer, ramp).u_inf;
  return b;
}

FluidBoundary make_periodic_boundary(const SpatialGrid& grid) {
  FluidBoundary b;
  b.periodic = true;
  b.u_inf.assign(grid.size(), 0.0);
  return b;
}

// ---------------------------------------------------------------- continuity

std::vector<double> face_velocity(std::span<const double> u, const FluidBoundary& bdry) {
  const std::size_t n = u.size();
  std::vector<double> uf(n + 1);
  for (std::size_t i = 1; i < n; ++i) uf[i] = 0.5 * (u[i - 1] + u[i]);
  if (bdry.periodic) {
    uf[0] = 0.5 * (u[n - 1] + u[0]);
    uf[n] = uf[0];
  } else {
    uf[0] = bdry.u_wall[0];
    uf[n] = bdry.u_wall[1];
  }
  return uf;
}

std::vector<double> velocity_divergence(const SpatialGrid& grid, std::span<const double> u,
                                        const FluidBoundary& bdry) {
  const auto uf = face_velocity(u, bdry);
  std::vector<double> d(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) d[i] = (uf[i + 1] - uf[i]) / grid.h(0);
  return d;
}

ContinuityResult continuity_step(const SpatialGrid& grid, std::span<const double> rho, std::span<const double> u,
                                 double dt, double eps, const FluidBoundary& bdry) {
  const std::size_t n = grid.size();
  if (rho.size() != n || u.size() != n) raise(ErrorCode::GridMismatch, "continuity_step: size mismatch", "fluid");
  if (!(eps >= 0.0)) raise(ErrorCode::InvalidArgument, "continuity_step: eps must be >= 0", "fluid");
  require_finite(rho, "continuity rho");
  require_finite(u, "continuity u");
  const double h = grid.h(0);
  const auto uf = face_velocity(u, bdry);
  double umax = 0.0;
  for (double v : uf) umax = std::max(umax, std::abs(v));
  if (dt * umax / h > 0.5 * (1.0 + 1e-12)) {
    raise(ErrorCode::TimeStepTooLarge, "continuity CFL dt |u| / h = " + std::to_string(dt * umax / h) + " > 0.5",
          "fluid");
  }

  ContinuityResult res;
  res.face_flux.assign(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) res.face_flux[i] = uf[i] * (uf[i] > 0.0 ? rho[i - 1] : rho[i]);
  if (bdry.periodic) {
    res.face_flux[0] = uf[0] * (uf[0] > 0.0 ? rho[n - 1] : rho[0]);
    res.face_flux[n] = res.face_flux[0];
  } else {
    for (int side = 0; side < 2; ++side) {
      const double un = bdry.normal_velocity(side);
      const double adjacent = side == 0 ? rho[0] : rho[n - 1];
      const double q = bdry.inflow(side) ? bdry.rho_wall[side] * un : adjacent * un;
      res.trace.mass_flux_dt[side] = q * dt;
      res.trace.rho_trace[side] = adjacent;
      res.face_flux[side == 0 ? 0 : n] = side == 0 ? -q : q;
    }
  }

  res.rho.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.rho[i] = rho[i] - dt / h * (res.face_flux[i + 1] - res.face_flux[i]);

  if (eps > 0.0) {
    // (I - dt eps Lap) rho' = rho*, zero diffusive flux through the walls.
    const double c = dt * eps / (h * h);
    std::vector<double> lower(n, -c), diag(n, 1.0 + 2.0 * c), upper(n, -c);
    if (bdry.periodic) {
      linalg::solve_cyclic_tridiagonal(lower, diag, upper, res.rho);
    } else {
      diag[0] = 1.0 + c;
      diag[n - 1] = 1.0 + c;
      if (n == 1) diag[0] = 1.0;
      linalg::solve_tridiagonal(lower, diag, upper, res.rho);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(res.rho[i] > 0.0)) {
      raise(ErrorCode::PositivityLost, "density " + std::to_string(res.rho[i]) + " at cell " + std::to_string(i),
            "fluid");
    }
  }
  return res;
}

// ---------------------------------------------------------------- momentum

namespace {

// Ghost values for u at both walls (Dirichlet u_B, or periodic wrap).
std::array<double, 2> velocity_ghosts(std::span<const double> u, const FluidBoundary& bdry) {
  const std::size_t n = u.size();
  if (bdry.periodic) return {u[n - 1], u[0]};
  return {2.0 * bdry.u_wall[0] - u[0], 2.0 * bdry.u_wall[1] - u[n - 1]};
}

}  // namespace

std::vector<double> relative_velocity_gradient(const SpatialGrid& grid, std::span<const double> u,
                                               const FluidBoundary& bdry) {
  const std::size_t n = u.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = u[i] - bdry.u_inf[i];
  // u_inf = u_B on the walls, so w vanishes there.
  const double glo = bdry.periodic ? w[n - 1] : -w[0];
  const double ghi = bdry.periodic ? w[0] : -w[n - 1];
  return face_gradient_1d(w, grid.h(0), glo, ghi);
}

double viscous_dissipation(const SpatialGrid& grid, std::span<const double> u, const FluidParams& params,
                           const FluidBoundary& bdry) {
  const auto g = relative_velocity_gradient(grid, u, bdry);
  const double kappa = params.longitudinal_viscosity();
  double s = 0.0;
  const std::size_t first = bdry.periodic ? 1 : 0;  // periodic: face 0 and face n coincide
  for (std::size_t f = first; f < g.size(); ++f) s += kappa * g[f] * g[f];
  return s * grid.h(0);
}

double fluid_cfl_limit(const SpatialGrid& grid, const FluidState& state, const FluidParams& params,
                       const FluidBoundary& bdry) {
  const double h = grid.h(0);
  double wave = 0.0;
  const auto uf = face_velocity(state.u, bdry);
  double umax = 0.0;
  for (double v : uf) umax = std::max(umax, std::abs(v));
  for (std::size_t i = 0; i < state.rho.size(); ++i) {
    wave = std::max(wave, std::abs(state.u[i]) + params.sound_speed(state.rho[i]));
  }
  double limit = std::min(h / std::max(wave, 1e-300), 0.5 * h / std::max(umax, 1e-300));
  if (params.eps > 0.0) {
    const auto g = relative_velocity_gradient(grid, state.u, bdry);
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, v * v);
    if (gmax > 0.0) limit = std::min(limit, 0.25 * h * h / (3.0 * params.eps * gmax));
  }
  return limit;
}

std::vector<double> momentum_step(const SpatialGrid& grid, const FluidState& state, const ContinuityResult& cont,
                                  const MomentFields& moments, std::span<const double> u_eff,
                                  std::span<const double> u_tilde, double dt, const FluidParams& params,
                                  const FluidBoundary& bdry) {
  const std::size_t n = grid.size();
  if (state.rho.size() != n || state.u.size() != n || cont.rho.size() != n || u_eff.size() != n ||
      u_tilde.size() != n || moments.n.size() != n) {
    raise(ErrorCode::GridMismatch, "momentum_step: size mismatch", "fluid");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(state.rho[i] > 0.0) || !(cont.rho[i] > 0.0)) {
      raise(ErrorCode::PositivityLost, "momentum_step: nonpositive density at cell " + std::to_string(i), "fluid");
    }
  }
  const double limit = fluid_cfl_limit(grid, state, params, bdry);
  if (dt > limit * (1.0 + 1e-12)) {
    raise(ErrorCode::TimeStepTooLarge,
          "fluid step dt = " + std::to_string(dt) + " exceeds explicit limit " + std::to_string(limit), "fluid");
  }
  const double h = grid.h(0);
  const auto& u = state.u;
  const auto& rho_new = cont.rho;
  const auto ghost_u = velocity_ghosts(u, bdry);
  const double* j = moments.j.empty() ? nullptr : moments.j[0].data();

  // Convective momentum flux with the continuity mass flux.
  std::vector<double> conv(n + 1);
  for (std::size_t f = 0; f <= n; ++f) {
    const double mf = cont.face_flux[f];
    double upw;
    if (f == 0) {
      upw = bdry.periodic ? (mf > 0.0 ? u[n - 1] : u[0]) : bdry.u_wall[0];
    } else if (f == n) {
      upw = bdry.periodic ? (mf > 0.0 ? u[n - 1] : u[0]) : bdry.u_wall[1];
    } else {
      upw = mf > 0.0 ? u[f - 1] : u[f];
    }
    conv[f] = mf * upw;
  }

  // Face pressures from the updated density.
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = params.pressure(rho_new[i]);
  std::vector<double> pf(n + 1);
  for (std::size_t f = 1; f < n; ++f) pf[f] = 0.5 * (p[f - 1] + p[f]);
  if (bdry.periodic) {
    pf[0] = 0.5 * (p[n - 1] + p[0]);
    pf[n] = pf[0];
  } else {
    pf[0] = p[0];
    pf[n] = p[n - 1];
  }

  // eps grad rho . grad u (centred, collocated) and eps div(|grad w|^2 grad w).
  std::vector<double> eps_force(n, 0.0);
  if (params.eps > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double rl = i == 0 ? (bdry.periodic ? state.rho[n - 1] : state.rho[0]) : state.rho[i - 1];
      const double rr = i + 1 == n ? (bdry.periodic ? state.rho[0] : state.rho[n - 1]) : state.rho[i + 1];
      const double ul = i == 0 ? ghost_u[0] : u[i - 1];
      const double ur = i + 1 == n ? ghost_u[1] : u[i + 1];
      eps_force[i] -= params.eps * ((rr - rl) / (2.0 * h)) * ((ur - ul) / (2.0 * h));
    }
    const auto gw = relative_velocity_gradient(grid, u, bdry);
    for (std::size_t i = 0; i < n; ++i) {
      const double qr = gw[i + 1] * gw[i + 1] * gw[i + 1];
      const double ql = gw[i] * gw[i] * gw[i];
      eps_force[i] += params.eps * (qr - ql) / h;
    }
  }

  // Implicit: (rho' + dt n) u' - dt kappa d_xx u' = rhs.
  const double kappa = params.longitudinal_viscosity();
  const double c = dt * kappa / (h * h);
  std::vector<double> lower(n, -c), diag(n), upper(n, -c), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double drag_explicit = (j ? j[i] : 0.0) - moments.n[i] * u_eff[i] + moments.n[i] * u_tilde[i];
    rhs[i] = state.rho[i] * u[i] - dt / h * (conv[i + 1] - conv[i]) - dt / h * (pf[i + 1] - pf[i]) +
             dt * eps_force[i] + dt * drag_explicit;
    diag[i] = rho_new[i] + dt * moments.n[i] + 2.0 * c;
  }
  if (bdry.periodic) {
    linalg::solve_cyclic_tridiagonal(lower, diag, upper, rhs);
  } else {
    // Dirichlet ghost 2 u_B - u' on both walls.
    diag[0] += c;
    rhs[0] += 2.0 * c * bdry.u_wall[0];
    diag[n - 1] += c;
    rhs[n - 1] += 2.0 * c * bdry.u_wall[1];
    linalg::solve_tridiagonal(lower, diag, upper, rhs);
  }
  for (double v : rhs) {
    if (!std::isfinite(v)) raise(ErrorCode::NonFiniteField, "momentum_step produced a non-finite velocity", "fluid");
  }
  return rhs;
}

// ---------------------------------------------------------------- diagnostics

std::vector<DensityBoundsMargin> density_bounds_check(std::span<const std::vector<double>> rho_series,
                                                      std::span<const double> times,
                                                      std::span<const double> divu_sup) {
  if (rho_series.size() < 2) raise(ErrorCode::InsufficientHistory, "density bounds need at least 2 snapshots");
  if (times.size() != rho_series.size() || divu_sup.size() + 1 < rho_series.size()) {
    raise(ErrorCode::InvalidArgument, "density_bounds_check: series not aligned in time");
  }
  const auto [mn0, mx0] = std::minmax_element(rho_series[0].begin(), rho_series[0].end());
  const double inf0 = *mn0, sup0 = *mx0;
  std::vector<DensityBoundsMargin> out;
  double integral = 0.0;
  for (std::size_t k = 0; k < rho_series.size(); ++k) {
    if (k > 0) integral += (times[k] - times[k - 1]) * divu_sup[k - 1];
    const auto [mn, mx] = std::minmax_element(rho_series[k].begin(), rho_series[k].end());
    const double lo = inf0 * std::exp(-integral);
    const double hi = sup0 * std::exp(integral);
    out.push_back({times[k], lo, hi, *mn - lo, hi - *mx});
  }
  return out;
}

}  // namespace vpfp
