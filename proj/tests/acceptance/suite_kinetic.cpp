#include <algorithm>
#include <cmath>
#include <numbers>

#include "harness.hpp"
#include "vpfp/coupling.hpp"
#include "vpfp/kinetic.hpp"

namespace acc {

namespace {

double maxwellian(double v, double n, double drift, double temp) {
  return n / std::sqrt(2.0 * std::numbers::pi * temp) * std::exp(-(v - drift) * (v - drift) / (2.0 * temp));
}

double max_step_defect(const std::vector<vpfp::MassBalanceRow>& rows, bool kinetic) {
  double d = 0.0;
  for (const auto& r : rows) d = std::max(d, std::abs(kinetic ? r.kinetic_step_defect : r.fluid_step_defect));
  return d;
}

}  // namespace

Criterion conservation() {
  Criterion c{1, "conservation", {}, 0.0, 10.0};
  for (const char* name : {"rest", "maxwellian", "shear"}) {
    auto s = shipped(name);
    const auto r = vpfp::run_scenario(s);
    const double scale = std::max({1.0, r.mass.front().kinetic_mass, r.mass.front().fluid_mass});
    const double dk = max_step_defect(r.mass, true), df = max_step_defect(r.mass, false);
    c.lines.push_back({std::string(name) + " per-step balance", r.exit_code != vpfp::kExitSolver && dk <= 1e-12 * scale &&
                                                                     df <= 1e-12 * scale,
                       "kinetic " + fmt(dk) + ", fluid " + fmt(df) + " (limit " + fmt(1e-12 * scale) + ")"});
  }
  {
    // Periodic box: no boundary at all, raw mass change per step.
    auto s = shipped("maxwellian");
    s.periodic = true;
    s.inflow = "none";
    vpfp::RunOptions o;
    o.keep_history = true;
    const auto r = vpfp::run_scenario(s, o);
    double dk = 0.0, df = 0.0;
    for (std::size_t k = 1; k < r.history.size(); ++k) {
      const auto& a = r.history[k - 1].state;
      const auto& b = r.history[k].state;
      dk = std::max(dk, std::abs(b.f.mass() - a.f.mass()));
      double ma = 0.0, mb = 0.0;
      for (std::size_t i = 0; i < a.fluid.rho.size(); ++i) ma += a.fluid.rho[i], mb += b.fluid.rho[i];
      df = std::max(df, std::abs(mb - ma) * r.problem.x.h(0));
    }
    c.lines.push_back({"periodic box per-step mass change", r.exit_code != vpfp::kExitSolver && dk <= 1e-12 && df <= 1e-12,
                       "kinetic " + fmt(dk) + ", fluid " + fmt(df)});
  }
  {
    // Constant inflow into an empty box: gain = mass change + measured outflow.
    auto s = shipped("inflow_beam");
    s.inflow_density = vpfp::TimeProfile(0.3);
    s.t_end = 0.25;
    vpfp::RunOptions o;
    o.keep_history = true;
    const auto r = vpfp::run_scenario(s, o);
    const auto& pb = r.problem;
    double out_k = 0.0, out_f = 0.0;
    for (std::size_t k = 1; k < r.history.size(); ++k) {
      const auto& st = r.history[k].step;
      out_k += st.kinetic_trace.outflow(pb.x, pb.v, [](const std::array<double, 3>&) { return 1.0; });
      for (int side = 0; side < 2; ++side) out_f += std::max(0.0, st.fluid_trace.mass_flux_dt[side]);
    }
    const double T = r.final_state.t;
    double rate = 0.0;
    for (std::size_t iv = 0; iv < pb.v.size(); ++iv) {
      const double v = pb.v.center(static_cast<int>(iv));
      if (v > 0.0) rate += v * 0.3 * maxwellian(v, 1.0, s.inflow_drift, s.inflow_temperature) * pb.v.cell_volume();
    }
    const double gain_k = r.final_state.f.mass() - r.history.front().state.f.mass() + out_k;
    const double expect_k = rate * T;
    double mf0 = 0.0, mf1 = 0.0;
    for (std::size_t i = 0; i < pb.x.size(); ++i)
      mf0 += r.history.front().state.fluid.rho[i] * pb.x.h(0), mf1 += r.final_state.fluid.rho[i] * pb.x.h(0);
    const double gain_f = mf1 - mf0 + out_f;
    const double expect_f = s.rho_left * s.u_left * T;
    c.lines.push_back({"constant inflow kinetic gain", std::abs(gain_k - expect_k) <= 1e-10,
                       "measured " + fmt(gain_k) + ", analytic " + fmt(expect_k) + ", diff " + fmt(gain_k - expect_k)});
    c.lines.push_back({"constant inflow fluid gain", std::abs(gain_f - expect_f) <= 1e-10,
                       "measured " + fmt(gain_f) + ", analytic " + fmt(expect_f) + ", diff " + fmt(gain_f - expect_f)});
  }
  return c;
}

Criterion equilibrium() {
  Criterion c{2, "equilibrium", {}, 0.0, 0.0};
  for (const double drift : {0.0, 0.5}) {
    const auto xg = vpfp::SpatialGrid::line(1.0, 64);
    const vpfp::VelocityGrid vg(1, 8.0, 64);
    auto f = vpfp::PhaseField::sample(xg, vg, [&](const auto&, const auto& v) { return maxwellian(v[0], 1.0, drift, 1.0); });
    const std::vector<double> u(64, drift), gp(64, 0.0);
    const auto g = vpfp::InflowData::zero(xg, vg);
    vpfp::KineticOptions opt;
    opt.periodic = true;
    const double dt = 0.5 * vpfp::kinetic_cfl_limit(f);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
      auto next = vpfp::vfp_step(f, u, gp, dt, g, opt).f;
      for (std::size_t k = 0; k < f.values.size(); ++k) worst = std::max(worst, std::abs(next.values[k] - f.values[k]));
      f = std::move(next);
    }
    c.lines.push_back({"homogeneous Maxwellian, u = " + fmt(drift), worst <= 1e-10, "max per-step change " + fmt(worst)});
  }
  {
    const auto s = shipped("rest");
    const auto pb = vpfp::build_problem(s);
    const auto st = vpfp::initial_state(s, pb);
    const double dt = vpfp::scenario_dt(s, pb, st);
    const auto res = vpfp::picard_fixed_point(pb, st, dt, s.fixed_point);
    double change = 0.0;
    for (std::size_t k = 0; k < st.f.values.size(); ++k) change = std::max(change, std::abs(res.state.f.values[k] - st.f.values[k]));
    for (std::size_t i = 0; i < st.fluid.u.size(); ++i) {
      change = std::max(change, std::abs(res.state.fluid.u[i] - st.fluid.u[i]));
      change = std::max(change, std::abs(res.state.fluid.rho[i] - st.fluid.rho[i]));
    }
    c.lines.push_back({"rest state Picard", res.record.iterations == 1 && change <= 1e-12,
                       std::to_string(res.record.iterations) + " iteration(s), max state change " + fmt(change)});
  }
  return c;
}

Criterion moment_identity() {
  Criterion c{3, "moment identity", {}, 0.0, 0.0};
  // Fixed fine phase grid, dt refined three times; periodic x so no boundary terms.
  const auto xg = vpfp::SpatialGrid::line(1.0, 16);
  const vpfp::VelocityGrid vg(1, 12.0, 1024);
  const auto f0 = vpfp::PhaseField::sample(xg, vg, [](const auto& x, const auto& v) {
    return (1.0 + 0.3 * std::cos(2.0 * std::numbers::pi * x[0])) * maxwellian(v[0], 1.0, 1.0, 0.5);
  });
  std::vector<double> u(16), gp(16);
  for (int i = 0; i < 16; ++i) {
    const double x = xg.center(0, i);
    u[i] = 0.5 + 0.2 * std::sin(2.0 * std::numbers::pi * x);
    gp[i] = 0.3 * std::cos(2.0 * std::numbers::pi * x);
  }
  const auto g = vpfp::InflowData::zero(xg, vg);
  vpfp::KineticOptions opt;
  opt.periodic = true;
  const double T = 0.4;
  std::vector<double> res;
  std::string detail;
  for (const int steps : {80, 160, 320}) {
    const double dt = T / steps;
    std::vector<vpfp::MomentHistoryEntry> hist;
    auto f = f0;
    for (int n = 0; n <= steps; ++n) {
      vpfp::MomentHistoryEntry e{f.t, f, u, gp, vpfp::KineticTrace::zero(xg, vg)};
      if (n < steps) {
        auto step = vpfp::vfp_step(f, u, gp, dt, g, opt);
        e.trace = step.trace;
        f = std::move(step.f);
      }
      hist.push_back(std::move(e));
    }
    const auto r = vpfp::moment_identity_residual(hist, 2);
    res.push_back(*std::max_element(r.begin(), r.end()));
    detail += (detail.empty() ? "" : ", ") + fmt(res.back());
  }
  const double o1 = std::log2(res[0] / res[1]), o2 = std::log2(res[1] / res[2]);
  c.lines.push_back({"l = 2 residual under dt halving", o1 >= 0.9 && o2 >= 0.9,
                     "max residual " + detail + "; orders " + fmt(o1) + ", " + fmt(o2)});
  const auto k = vpfp::moment_identity_coefficients(2, 3);
  c.lines.push_back({"d = 3 coefficients", k.relaxation == -2.0 && k.diffusion == 6.0,
                     "(" + fmt(k.relaxation) + ", " + fmt(k.diffusion) + ")"});
  return c;
}

}  // namespace acc
