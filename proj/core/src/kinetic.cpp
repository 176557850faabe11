#include "vpfp/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vpfp/error.hpp"
#include "vpfp/linalg.hpp"
#include "vpfp/parallel.hpp"

namespace vpfp {

PhaseField::PhaseField(SpatialGrid xg, VelocityGrid vg, double time)
    : x(std::move(xg)), v(std::move(vg)), values(x.size() * v.size(), 0.0), t(time) {
  if (x.dim() != v.dim()) raise(ErrorCode::InvalidArgument, "PhaseField: spatial and velocity dimensions differ");
}

double PhaseField::mass() const {
  double s = 0.0;
  for (double value : values) s += value;
  return s * phase_volume();
}

double PhaseField::lp_norm(double p) const {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double value : values) m = std::max(m, std::abs(value));
    return m;
  }
  double s = 0.0;
  for (double value : values) s += std::pow(std::abs(value), p);
  return std::pow(s * phase_volume(), 1.0 / p);
}

PhaseField PhaseField::sample(
    const SpatialGrid& xg, const VelocityGrid& vg,
    const std::function<double(const std::array<double, 3>&, const std::array<double, 3>&)>& fn, double time) {
  PhaseField f(xg, vg, time);
  for (std::size_t ix = 0; ix < xg.size(); ++ix) {
    const auto xc = xg.cell_center(ix);
    for (std::size_t iv = 0; iv < vg.size(); ++iv) f(ix, iv) = fn(xc, vg.velocity(iv));
  }
  return f;
}

MomentFields compute_moments(const PhaseField& f) {
  require_finite(f.values, "compute_moments");
  const std::size_t nx = f.x.size();
  const std::size_t nv = f.v.size();
  const int d = f.v.dim();
  const double w = f.v.cell_volume();
  MomentFields m;
  m.n.assign(nx, 0.0);
  m.e2.assign(nx, 0.0);
  m.j.assign(static_cast<std::size_t>(d), std::vector<double>(nx, 0.0));
  std::vector<std::array<double, 3>> vel(nv);
  std::vector<double> speed2(nv);
  for (std::size_t iv = 0; iv < nv; ++iv) {
    vel[iv] = f.v.velocity(iv);
    speed2[iv] = f.v.speed_squared(iv);
  }
  for (std::size_t ix = 0; ix < nx; ++ix) {
    double n = 0.0, e2 = 0.0;
    std::array<double, 3> j{0, 0, 0};
    for (std::size_t iv = 0; iv < nv; ++iv) {
      const double value = f(ix, iv);
      n += value;
      e2 += speed2[iv] * value;
      for (int a = 0; a < d; ++a) j[a] += vel[iv][a] * value;
    }
    m.n[ix] = n * w;
    m.e2[ix] = e2 * w;
    for (int a = 0; a < d; ++a) m.j[a][ix] = j[a] * w;
  }
  return m;
}

// ---------------------------------------------------------------- inflow data

namespace {
double normal_speed(const BoundaryFace& face, const std::array<double, 3>& v) {
  return face.normal[0] * v[0] + face.normal[1] * v[1] + face.normal[2] * v[2];
}
}  // namespace

InflowData InflowData::zero(const SpatialGrid& xg, const VelocityGrid& vg) {
  InflowData g;
  g.values_.assign(xg.boundary_faces().size(), std::vector<double>(vg.size(), 0.0));
  return g;
}

InflowData InflowData::from_function(
    const SpatialGrid& xg, const VelocityGrid& vg,
    const std::function<double(const BoundaryFace&, const std::array<double, 3>& v)>& fn) {
  InflowData g = zero(xg, vg);
  const auto& faces = xg.boundary_faces();
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    for (std::size_t iv = 0; iv < vg.size(); ++iv) {
      const auto v = vg.velocity(iv);
      if (normal_speed(faces[fi], v) < 0.0) g.values_[fi][iv] = fn(faces[fi], v);
    }
  }
  g.validate(xg, vg);
  return g;
}

InflowData InflowData::from_values(const SpatialGrid& xg, const VelocityGrid& vg,
                                   std::vector<std::vector<double>> face_values) {
  if (face_values.size() != xg.boundary_faces().size()) {
    raise(ErrorCode::GridMismatch, "InflowData: one value row per boundary face required");
  }
  for (const auto& row : face_values) {
    if (row.size() != vg.size()) raise(ErrorCode::GridMismatch, "InflowData: one value per v-cell required");
  }
  InflowData g;
  g.values_ = std::move(face_values);
  return g;
}

InflowData InflowData::scaled(double factor) const {
  InflowData g = *this;
  for (auto& row : g.values_)
    for (double& value : row) value *= factor;
  return g;
}

void InflowData::validate(const SpatialGrid& xg, const VelocityGrid& vg) const {
  if (values_.empty()) return;
  const auto& faces = xg.boundary_faces();
  if (values_.size() != faces.size()) raise(ErrorCode::InvalidInflow, "inflow data does not match the grid");
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    if (values_[fi].size() != vg.size()) raise(ErrorCode::InvalidInflow, "inflow data does not match the v-grid");
    for (std::size_t iv = 0; iv < vg.size(); ++iv) {
      const double value = values_[fi][iv];
      if (!std::isfinite(value) || value < 0.0) {
        raise(ErrorCode::InvalidInflow, "inflow g must be finite and >= 0 (face " + std::to_string(fi) +
                                            ", v-cell " + std::to_string(iv) + ")");
      }
      if (value != 0.0 && normal_speed(faces[fi], vg.velocity(iv)) >= 0.0) {
        raise(ErrorCode::InvalidInflow, "inflow g supported outside Sigma^- (face " + std::to_string(fi) + ")");
      }
    }
  }
}

double InflowData::sup() const {
  double m = 0.0;
  for (const auto& row : values_)
    for (double value : row) m = std::max(m, value);
  return m;
}

double InflowData::lp_rate(const SpatialGrid& xg, const VelocityGrid& vg, double p) const {
  if (values_.empty()) return 0.0;
  const auto& faces = xg.boundary_faces();
  double s = 0.0;
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    for (std::size_t iv = 0; iv < vg.size(); ++iv) {
      const double value = values_[fi][iv];
      if (value == 0.0) continue;
      s += std::pow(value, p) * std::abs(normal_speed(faces[fi], vg.velocity(iv))) * vg.cell_volume() *
           faces[fi].area;
    }
  }
  return s;
}

// ---------------------------------------------------------------- traces

KineticTrace KineticTrace::zero(const SpatialGrid& xg, const VelocityGrid& vg) {
  KineticTrace t;
  t.flux_dt.assign(xg.boundary_faces().size(), std::vector<double>(vg.size(), 0.0));
  return t;
}

void KineticTrace::add(const KineticTrace& other) {
  if (flux_dt.empty()) {
    flux_dt = other.flux_dt;
    return;
  }
  for (std::size_t f = 0; f < flux_dt.size(); ++f)
    for (std::size_t k = 0; k < flux_dt[f].size(); ++k) flux_dt[f][k] += other.flux_dt[f][k];
}

namespace {
double signed_trace_sum(const KineticTrace& tr, const SpatialGrid& xg, const VelocityGrid& vg,
                        const std::function<double(const std::array<double, 3>&)>& weight, bool outflow) {
  const auto& faces = xg.boundary_faces();
  double s = 0.0;
  for (std::size_t fi = 0; fi < tr.flux_dt.size(); ++fi) {
    for (std::size_t iv = 0; iv < tr.flux_dt[fi].size(); ++iv) {
      const double q = tr.flux_dt[fi][iv];
      if (outflow ? q > 0.0 : q < 0.0) s += weight(vg.velocity(iv)) * std::abs(q) * vg.cell_volume() * faces[fi].area;
    }
  }
  return s;
}
}  // namespace

double KineticTrace::outflow(const SpatialGrid& xg, const VelocityGrid& vg,
                             const std::function<double(const std::array<double, 3>&)>& weight) const {
  return signed_trace_sum(*this, xg, vg, weight, true);
}

double KineticTrace::inflow(const SpatialGrid& xg, const VelocityGrid& vg,
                            const std::function<double(const std::array<double, 3>&)>& weight) const {
  return signed_trace_sum(*this, xg, vg, weight, false);
}

// ---------------------------------------------------------------- stepping

double kinetic_cfl_limit(const PhaseField& f, double cfl_safety) {
  const double vmax_center = f.v.vmax() - 0.5 * f.v.h();
  double hmin = std::numeric_limits<double>::infinity();
  for (int a = 0; a < f.x.dim(); ++a) hmin = std::min(hmin, f.x.h(a));
  return cfl_safety * hmin / vmax_center;
}

namespace {

void require_1d(const PhaseField& f, const char* op) {
  if (f.x.dim() != 1 || f.v.dim() != 1) {
    raise(ErrorCode::InvalidArgument, std::string(op) + ": the grid solver supports d = 1 only", "kinetic");
  }
}

// Conservative first-order upwind transport in x over dt_s. Inflow ghost values
// from g on Sigma^-; Sigma^+ faces use the interior upwind value.
void transport_x(const PhaseField& in, PhaseField& out, double dt_s, const InflowData& g, bool periodic,
                 KineticTrace& trace) {
  const std::size_t nx = in.x.size();
  const std::size_t nv = in.v.size();
  const double lambda = dt_s / in.x.h(0);
  parallel_for(nv, [&](std::size_t b, std::size_t e) {
    std::vector<double> flux(nx + 1);
    for (std::size_t iv = b; iv < e; ++iv) {
      const double v = in.v.center(static_cast<int>(iv));
      for (std::size_t i = 1; i < nx; ++i) flux[i] = v * (v > 0.0 ? in(i - 1, iv) : in(i, iv));
      if (periodic) {
        flux[0] = v * (v > 0.0 ? in(nx - 1, iv) : in(0, iv));
        flux[nx] = flux[0];
      } else {
        // Left wall, nu = -1: v > 0 is Sigma^-; right wall, nu = +1: v < 0 is Sigma^-.
        flux[0] = v > 0.0 ? v * g.value(0, iv) : v * in(0, iv);
        flux[nx] = v < 0.0 ? v * g.value(1, iv) : v * in(nx - 1, iv);
        trace.flux_dt[0][iv] += -flux[0] * dt_s;
        trace.flux_dt[1][iv] += flux[nx] * dt_s;
      }
      for (std::size_t i = 0; i < nx; ++i) out(i, iv) = in(i, iv) - lambda * (flux[i + 1] - flux[i]);
    }
  });
}

// Implicit Fokker-Planck in v: d_t f = -d_v J, J = (w - v) f - d_v f with the
// exponentially fitted face flux J = (e^{-s} f_k - e^{s} f_{k+1}) / h,
// s = h (v_{k+1/2} - w) / 2, and J = 0 on the outer faces. The sampled
// Maxwellian centred at w is an exact discrete equilibrium.
void fokker_planck_v(PhaseField& f, std::span<const double> u_eff, std::span<const double> grad_phi, double dt) {
  const std::size_t nx = f.x.size();
  const std::size_t nv = f.v.size();
  const double hv = f.v.h();
  const double c = dt / (hv * hv);
  parallel_for(nx, [&](std::size_t b, std::size_t e) {
    std::vector<double> lower(nv, 0.0), diag(nv, 1.0), upper(nv, 0.0), rhs(nv);
    for (std::size_t ix = b; ix < e; ++ix) {
      const double w = u_eff[ix] - grad_phi[ix];
      std::fill(lower.begin(), lower.end(), 0.0);
      std::fill(diag.begin(), diag.end(), 1.0);
      std::fill(upper.begin(), upper.end(), 0.0);
      for (std::size_t k = 0; k + 1 < nv; ++k) {
        const double vface = -f.v.vmax() + static_cast<double>(k + 1) * hv;
        const double s = 0.5 * hv * (vface - w);
        const double em = std::exp(-s), ep = std::exp(s);
        // J_{k+1/2} leaves cell k and enters cell k+1.
        diag[k] += c * em;
        upper[k] -= c * ep;
        diag[k + 1] += c * ep;
        lower[k + 1] -= c * em;
      }
      for (std::size_t k = 0; k < nv; ++k) rhs[k] = f(ix, k);
      linalg::solve_tridiagonal(lower, diag, upper, rhs);
      for (std::size_t k = 0; k < nv; ++k) f(ix, k) = std::max(0.0, rhs[k]);
    }
  });
}

}  // namespace

KineticStepResult vfp_step(const PhaseField& f, std::span<const double> u_eff, std::span<const double> grad_phi,
                           double dt, const InflowData& g, const KineticOptions& options) {
  require_1d(f, "vfp_step");
  if (!(dt > 0.0)) raise(ErrorCode::InvalidArgument, "vfp_step: dt must be positive", "kinetic");
  if (u_eff.size() != f.x.size() || grad_phi.size() != f.x.size()) {
    raise(ErrorCode::GridMismatch, "vfp_step: u_eff and grad_phi need one value per spatial cell", "kinetic");
  }
  require_finite(f.values, "vfp_step f");
  require_finite(u_eff, "vfp_step u_eff");
  require_finite(grad_phi, "vfp_step grad_phi");
  const double limit = kinetic_cfl_limit(f, options.cfl_safety);
  if (dt > limit * (1.0 + 1e-12)) {
    raise(ErrorCode::TimeStepTooLarge,
          "dt = " + std::to_string(dt) + " exceeds the x-transport limit " + std::to_string(limit), "kinetic");
  }
  if (!options.periodic) g.validate(f.x, f.v);

  KineticStepResult result{PhaseField(f.x, f.v, f.t + dt), KineticTrace::zero(f.x, f.v), 0.0};
  PhaseField half(f.x, f.v, f.t);
  transport_x(f, half, 0.5 * dt, g, options.periodic, result.trace);
  fokker_planck_v(half, u_eff, grad_phi, dt);
  transport_x(half, result.f, 0.5 * dt, g, options.periodic, result.trace);

  const std::size_t nv = f.v.size();
  double edge = 0.0, total = 0.0;
  for (std::size_t ix = 0; ix < f.x.size(); ++ix) {
    for (std::size_t iv = 0; iv < nv; ++iv) {
      const double value = result.f(ix, iv);
      total += value;
      if (iv == 0 || iv + 1 == nv) edge += value;
    }
  }
  result.velocity_edge_fraction = total > 0.0 ? edge / total : 0.0;
  return result;
}

std::vector<std::vector<double>> outflow_trace(const PhaseField& f) {
  const auto& faces = f.x.boundary_faces();
  std::vector<std::vector<double>> out(faces.size(), std::vector<double>(f.v.size(), 0.0));
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    for (std::size_t iv = 0; iv < f.v.size(); ++iv) {
      const double vn = normal_speed(faces[fi], f.v.velocity(iv));
      if (vn > 0.0) out[fi][iv] = f(faces[fi].cell, iv) * vn;
    }
  }
  return out;
}

double outflow_trace_flux(const PhaseField& f, std::size_t face) {
  const auto tr = outflow_trace(f);
  double s = 0.0;
  for (double value : tr.at(face)) s += value;
  return s * f.v.cell_volume() * f.x.boundary_faces().at(face).area;
}

// ---------------------------------------------------------------- moments

MomentIdentityCoefficients moment_identity_coefficients(int l, int dim) {
  return {-static_cast<double>(l), static_cast<double>(l) * (l + dim - 2)};
}

double velocity_moment(const PhaseField& f, double p) {
  double s = 0.0;
  for (std::size_t iv = 0; iv < f.v.size(); ++iv) {
    const double w = p == 0.0 ? 1.0 : std::pow(f.v.speed_squared(iv), 0.5 * p);
    double col = 0.0;
    for (std::size_t ix = 0; ix < f.x.size(); ++ix) col += f(ix, iv);
    s += w * col;
  }
  return s * f.phase_volume();
}

double moment_identity_rhs(const MomentHistoryEntry& entry, int l, double dt) {
  const PhaseField& f = entry.f;
  const int d = f.v.dim();
  const auto coef = moment_identity_coefficients(l, d);
  const std::size_t nx = f.x.size();
  if (entry.u_eff.size() != nx * static_cast<std::size_t>(d) ||
      entry.grad_phi.size() != nx * static_cast<std::size_t>(d)) {
    raise(ErrorCode::GridMismatch, "moment identity: u_eff / grad_phi need d values per cell");
  }
  double drift = 0.0;
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t iv = 0; iv < f.v.size(); ++iv) {
      const auto v = f.v.velocity(iv);
      const double speed2 = f.v.speed_squared(iv);
      const double wl2 = l == 2 ? 1.0 : std::pow(speed2, 0.5 * (l - 2));
      double udot = 0.0;
      for (int a = 0; a < d; ++a) udot += (entry.u_eff[ix * d + a] - entry.grad_phi[ix * d + a]) * v[a];
      drift += udot * wl2 * f(ix, iv);
    }
  }
  drift *= f.phase_volume();
  double boundary = 0.0;
  if (!entry.trace.flux_dt.empty() && dt > 0.0) {
    auto weight = [l](const std::array<double, 3>& v) {
      return std::pow(v[0] * v[0] + v[1] * v[1] + v[2] * v[2], 0.5 * l);
    };
    boundary = (entry.trace.inflow(f.x, f.v, weight) - entry.trace.outflow(f.x, f.v, weight)) / dt;
  }
  return coef.relaxation * velocity_moment(f, l) + coef.diffusion * velocity_moment(f, l - 2) + boundary +
         l * drift;
}

std::vector<double> moment_identity_residual(std::span<const MomentHistoryEntry> history, int l) {
  if (history.size() < 2) raise(ErrorCode::InsufficientHistory, "moment identity needs at least 2 snapshots");
  if (l < 2) raise(ErrorCode::InvalidArgument, "moment identity residual requires l >= 2");
  std::vector<double> residual;
  residual.reserve(history.size() - 1);
  for (std::size_t n = 0; n + 1 < history.size(); ++n) {
    const double dt = history[n + 1].t - history[n].t;
    if (!(dt > 0.0)) raise(ErrorCode::InvalidArgument, "moment identity: history must be increasing in time");
    const double lhs = (velocity_moment(history[n + 1].f, l) - velocity_moment(history[n].f, l)) / dt;
    residual.push_back(std::abs(lhs - moment_identity_rhs(history[n], l, dt)));
  }
  return residual;
}

std::vector<LpMargin> lp_growth_check(std::span<const PhaseField> series, const InflowData& g, double p) {
  if (series.empty()) return {};
  if (!(p >= 1.0)) raise(ErrorCode::InvalidArgument, "lp_growth_check: p must be in [1, inf]");
  const PhaseField& f0 = series.front();
  const int d = f0.x.dim();
  const double inv_pprime = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
  const double f0_norm = f0.lp_norm(p);
  const double g_rate = std::isinf(p) ? 0.0 : g.lp_rate(f0.x, f0.v, p);
  std::vector<LpMargin> out;
  out.reserve(series.size());
  for (const auto& f : series) {
    const double elapsed = f.t - f0.t;
    const double g_norm = std::isinf(p) ? g.sup() : std::pow(g_rate * elapsed, 1.0 / p);
    const double bound = std::exp(d * elapsed * inv_pprime) * (f0_norm + g_norm);
    const double norm = f.lp_norm(p);
    out.push_back({f.t, bound, norm, bound - norm});
  }
  return out;
}

std::vector<double> cutoff_velocity(std::span<const double> u, double level, int dim) {
  if (!(level > 0.0)) raise(ErrorCode::InvalidArgument, "cutoff level N must be positive");
  if (dim < 1 || u.size() % static_cast<std::size_t>(dim) != 0) {
    raise(ErrorCode::InvalidArgument, "cutoff_velocity: size not a multiple of dim");
  }
  std::vector<double> out(u.begin(), u.end());
  for (std::size_t c = 0; c < u.size(); c += static_cast<std::size_t>(dim)) {
    double s2 = 0.0;
    for (int a = 0; a < dim; ++a) s2 += u[c + a] * u[c + a];
    const double s = std::sqrt(s2);
    const double chi = s <= level ? 1.0 : (s >= level + 1.0 ? 0.0 : level + 1.0 - s);
    for (int a = 0; a < dim; ++a) out[c + a] = u[c + a] * chi;
  }
  return out;
}

double velocity_cutoff_profile(double speed, double vmax) {
  const double r0 = 0.9 * vmax;
  if (speed <= r0) return 1.0;
  if (speed >= vmax) return 0.0;
  const double s = (speed - r0) / (vmax - r0);
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  return psi(1.0 - s) / (psi(1.0 - s) + psi(s));
}

PreparedInitialData prepare_initial_data(const PhaseField& f0, int kappa0, double max_loss_fraction) {
  require_finite(f0.values, "prepare_initial_data");
  for (double value : f0.values) {
    if (value < 0.0) raise(ErrorCode::InvalidArgument, "prepare_initial_data: f0 must be >= 0");
  }
  if (kappa0 < 0) raise(ErrorCode::InvalidArgument, "prepare_initial_data: kappa0 must be >= 0");
  PreparedInitialData out{f0, 0.0, {}};
  for (std::size_t iv = 0; iv < f0.v.size(); ++iv) {
    const double chi = velocity_cutoff_profile(std::sqrt(f0.v.speed_squared(iv)), f0.v.vmax());
    if (chi == 1.0) continue;
    for (std::size_t ix = 0; ix < f0.x.size(); ++ix) out.f(ix, iv) *= chi;
  }
  const double m0 = f0.mass();
  out.relative_mass_change = m0 > 0.0 ? (m0 - out.f.mass()) / m0 : 0.0;
  if (out.relative_mass_change > max_loss_fraction) {
    raise(ErrorCode::ExcessiveTruncation, "velocity cutoff removed a mass fraction of " +
                                              std::to_string(out.relative_mass_change));
  }
  for (int k = 0; k <= kappa0; ++k) out.moments.push_back(velocity_moment(out.f, k));
  return out;
}

}  // namespace vpfp
