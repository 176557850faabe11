#include "vpfp/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vpfp/error.hpp"

namespace vpfp {

void FixedPointConfig::validate() const {
  if (!(cutoff > 0.0)) raise(ErrorCode::InvalidArgument, "fixed point: cutoff N must be positive", "picard");
  if (!(theta > 0.0 && theta <= 1.0)) raise(ErrorCode::InvalidArgument, "fixed point: theta must lie in (0, 1]", "picard");
  if (!(tolerance > 0.0)) raise(ErrorCode::InvalidArgument, "fixed point: tolerance must be positive", "picard");
  if (max_iterations < 1) raise(ErrorCode::InvalidArgument, "fixed point: max_iterations must be >= 1", "picard");
}

double inflow_scale(const CoupledProblem& problem, double t) { return problem.g_scale ? problem.g_scale(t) : 1.0; }

InflowData inflow_at(const CoupledProblem& problem, double t) {
  if (!problem.g_scale || problem.g.empty()) return problem.g;
  return problem.g.scaled(problem.g_scale(t));
}

Potential solve_field(const CoupledProblem& problem, std::span<const double> n) {
  if (!problem.field) {
    Potential p;
    p.phi.assign(problem.x.size(), 0.0);
    p.grad.assign(problem.x.size() * static_cast<std::size_t>(problem.x.dim()), 0.0);
    return p;
  }
  std::vector<double> c = problem.c.c;
  if (c.empty()) c.assign(problem.x.size(), 0.0);
  return solve_poisson_regularized(problem.x, n, c, problem.params.eps, problem.m);
}

CoupledState make_state(const CoupledProblem& problem, PhaseField f, FluidState fluid, double t) {
  CoupledState s;
  s.phi = solve_field(problem, compute_moments(f).n);
  s.f = std::move(f);
  s.f.t = t;
  s.fluid = std::move(fluid);
  s.t = t;
  return s;
}

TOutput apply_T(const CoupledProblem& problem, std::span<const double> u_tilde, std::span<const double> grad_phi_star,
                const CoupledState& state, double dt, double cutoff) {
  const std::size_t nx = problem.x.size();
  if (u_tilde.size() != nx || grad_phi_star.size() != nx) {
    raise(ErrorCode::GridMismatch, "apply_T: iterate has the wrong size", "T");
  }
  require_finite(u_tilde, "apply_T u_tilde");
  require_finite(grad_phi_star, "apply_T grad_phi_star");

  TOutput out;
  out.u_eff = cutoff_velocity(u_tilde, cutoff, 1);
  try {
    KineticOptions opts;
    opts.periodic = problem.periodic;
    opts.cfl_safety = problem.kinetic_cfl;
    out.kinetic = vfp_step(state.f, out.u_eff, grad_phi_star, dt, inflow_at(problem, state.t + 0.5 * dt), opts);
  } catch (const Error& e) {
    throw e.with_stage("T");
  }
  out.moments = compute_moments(out.kinetic.f);
  try {
    out.phi = solve_field(problem, out.moments.n);
  } catch (const Error& e) {
    throw e.with_stage("T");
  }
  out.grad_phi = out.phi.grad;

  if (problem.fluid_frozen) {
    out.continuity.rho = state.fluid.rho;
    out.continuity.face_flux.assign(nx + 1, 0.0);
    out.u = state.fluid.u;
    return out;
  }
  try {
    out.continuity = continuity_step(problem.x, state.fluid.rho, state.fluid.u, dt, problem.params.eps,
                                     problem.fluid_bc);
    if (problem.velocity_frozen) {
      out.u = state.fluid.u;
    } else {
      out.u = momentum_step(problem.x, state.fluid, out.continuity, out.moments, out.u_eff, u_tilde, dt,
                            problem.params, problem.fluid_bc);
    }
  } catch (const Error& e) {
    throw e.with_stage("T");
  }
  return out;
}

double fixed_point_distance(std::span<const double> u_a, std::span<const double> g_a, std::span<const double> u_b,
                            std::span<const double> g_b) {
  auto block = [](std::span<const double> a, std::span<const double> b) {
    double diff = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      diff = std::max(diff, std::abs(a[i] - b[i]));
      scale = std::max(scale, std::abs(b[i]));
    }
    return diff / scale;
  };
  return std::max(block(u_a, u_b), block(g_a, g_b));
}

FixedPointResult picard_fixed_point(const CoupledProblem& problem, const CoupledState& state, double dt,
                                    const FixedPointConfig& cfg) {
  cfg.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) raise(ErrorCode::InvalidArgument, "picard: dt must be positive", "picard");
  std::vector<double> xu = state.fluid.u;
  std::vector<double> xg = state.phi.grad;
  if (xg.size() != xu.size()) xg.assign(xu.size(), 0.0);

  FixedPointResult res;
  TOutput prev;
  for (int k = 1; k <= cfg.max_iterations; ++k) {
    TOutput t;
    try {
      t = apply_T(problem, xu, xg, state, dt, cfg.cutoff);
    } catch (const Error& e) {
      raise(ErrorCode::NoConvergence,
            "Picard iteration " + std::to_string(k) + " failed in " + e.stage() + ": " +
                std::string(to_string(e.code())) + ": " + e.detail(),
            "picard");
    }
    const double r = k == 1 ? fixed_point_distance(t.u, t.grad_phi, xu, xg)
                            : fixed_point_distance(t.u, t.grad_phi, prev.u, prev.grad_phi);
    res.residuals.push_back(r);
    if (!std::isfinite(r)) {
      raise(ErrorCode::NoConvergence, "Picard residual became non-finite at iteration " + std::to_string(k),
            "picard");
    }
    if (r < cfg.tolerance) {
      res.state.f = std::move(t.kinetic.f);
      res.state.t = state.t + dt;
      res.state.f.t = res.state.t;
      res.state.phi = std::move(t.phi);
      res.state.fluid.rho = std::move(t.continuity.rho);
      res.state.fluid.u = std::move(t.u);
      res.record.kinetic_trace = std::move(t.kinetic.trace);
      res.record.fluid_trace = t.continuity.trace;
      res.record.face_flux = std::move(t.continuity.face_flux);
      res.record.u_eff = std::move(t.u_eff);
      res.record.grad_phi_star = std::move(xg);
      res.record.iterations = k;
      res.record.residual = r;
      res.record.velocity_edge_fraction = t.kinetic.velocity_edge_fraction;
      return res;
    }
    for (std::size_t i = 0; i < xu.size(); ++i) {
      xu[i] = (1.0 - cfg.theta) * xu[i] + cfg.theta * t.u[i];
      xg[i] = (1.0 - cfg.theta) * xg[i] + cfg.theta * t.grad_phi[i];
    }
    prev = std::move(t);
  }
  raise(ErrorCode::NoConvergence,
        "Picard iteration hit " + std::to_string(cfg.max_iterations) +
            " iterations, last residual " + std::to_string(res.residuals.back()),
        "picard");
}

FixedPointResult advance(const CoupledProblem& problem, const CoupledState& state, double dt,
                         const FixedPointConfig& cfg) {
  auto res = picard_fixed_point(problem, state, dt, cfg);
  require_finite(res.state.f.values, "advance f");
  require_finite(res.state.fluid.rho, "advance rho");
  require_finite(res.state.fluid.u, "advance u");
  require_finite(res.state.phi.phi, "advance phi");
  return res;
}

double coupled_cfl_limit(const CoupledProblem& problem, const CoupledState& state) {
  double limit = kinetic_cfl_limit(state.f, problem.kinetic_cfl);
  if (problem.velocity_frozen && !problem.fluid_frozen) {
    const auto uf = face_velocity(state.fluid.u, problem.fluid_bc);
    double umax = 0.0;
    for (double v : uf) umax = std::max(umax, std::abs(v));
    if (umax > 0.0) limit = std::min(limit, 0.5 * problem.x.h(0) / umax);
  } else if (!problem.fluid_frozen) {
    limit = std::min(limit, fluid_cfl_limit(problem.x, state.fluid, problem.params, problem.fluid_bc));
  }
  return limit;
}

// ---------------------------------------------------------------- continuation

bool ContinuationReport::all_pass() const {
  for (const auto& r : runs)
    if (!r.ok) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void validate_schedule(std::span<const ContinuationPoint> schedule) {
  if (schedule.empty()) raise(ErrorCode::InvalidArgument, "continuation schedule is empty", "sweep");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto& p = schedule[i];
    if (!(p.cutoff > 0.0) || p.eps < 0.0 || p.delta < 0.0) {
      raise(ErrorCode::InvalidArgument, "continuation entry " + std::to_string(i) + " has invalid parameters",
            "sweep");
    }
    if (i == 0) continue;
    const auto& q = schedule[i - 1];
    if (p.cutoff < q.cutoff || p.eps > q.eps || p.delta > q.delta) {
      raise(ErrorCode::InvalidArgument,
            "continuation schedule must have N nondecreasing and eps, delta nonincreasing (entry " +
                std::to_string(i) + ")",
            "sweep");
    }
  }
}

ContinuationReport continuation_sweep(std::span<const ContinuationPoint> schedule,
                                      const std::function<ContinuationRun(const ContinuationPoint&)>& run_one,
                                      double tol) {
  validate_schedule(schedule);
  ContinuationReport rep;
  for (const auto& p : schedule) {
    ContinuationRun run;
    try {
      run = run_one(p);
      run.point = p;
    } catch (const std::exception& e) {
      run = ContinuationRun{};
      run.point = p;
      run.ok = false;
      run.error = e.what();
    }
    rep.runs.push_back(run);
  }

  for (std::size_t i = 1; i < rep.runs.size(); ++i) {
    const auto& a = rep.runs[i - 1];
    const auto& b = rep.runs[i];
    if (!a.ok || !b.ok) continue;
    const auto& pa = a.point;
    const auto& pb = b.point;
    const std::string tag = " [" + std::to_string(i - 1) + "->" + std::to_string(i) + "]";
    if (pa.delta > 0.0 && pb.delta > 0.0 && pb.delta != pa.delta && pa.eps == pb.eps) {
      const double expected = pb.delta / pa.delta;
      const double observed = a.art_pressure != 0.0 ? b.art_pressure / a.art_pressure : 0.0;
      rep.checks.push_back({"art_pressure_ratio" + tag, observed, expected,
                            std::abs(observed / expected - 1.0) <= tol});
    }
    if (pa.eps > 0.0 && pb.eps > 0.0 && pb.eps != pa.eps && pa.delta == pb.delta) {
      const double expected = pb.eps / pa.eps;
      const double observed = a.eps_terms != 0.0 ? b.eps_terms / a.eps_terms : 0.0;
      rep.checks.push_back({"eps_terms_ratio" + tag, observed, expected,
                            std::abs(observed / expected - 1.0) <= tol});
    }
    if (pa.eps == pb.eps && pa.delta == pb.delta && pb.cutoff != pa.cutoff && pa.cutoff > a.max_velocity &&
        pb.cutoff > b.max_velocity) {
      const bool same = a.fingerprint == b.fingerprint;
      rep.checks.push_back({"cutoff_inactive_identical" + tag, same ? 1.0 : 0.0, 1.0, same});
    }
  }
  for (std::size_t i = 0; i < rep.runs.size(); ++i) {
    const auto& r = rep.runs[i];
    if (!r.ok) continue;
    if (r.point.eps == 0.0 && r.point.delta == 0.0) {
      const bool zero = r.eps_terms == 0.0 && r.art_pressure == 0.0;
      rep.checks.push_back({"base_model_terms_zero [" + std::to_string(i) + "]", zero ? 0.0 : 1.0, 0.0, zero});
    }
  }
  return rep;
}

}  // namespace vpfp
