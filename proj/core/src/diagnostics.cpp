#include "vpfp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vpfp/error.hpp"

namespace vpfp {

std::size_t EnergyLedger::index(const std::string& name) const {
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (terms[i].name == name) return i;
  raise(ErrorCode::InvalidArgument, "energy ledger has no term '" + name + "'", "diagnostics");
}

double EnergyLedger::value(std::size_t row, const std::string& name) const { return rows.at(row).values[index(name)]; }

double EnergyLedger::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) m = std::min(m, r.margin);
  return m;
}

namespace {

// Face-level fluid quantities shared by the ledger terms.
struct FluidFaces {
  std::vector<double> gw;     // d_x (u - u_inf) at faces
  std::vector<double> guinf;  // d_x u_inf at faces
  std::vector<double> grho;   // d_x rho at faces (zero on walls)
  std::vector<double> rho_face;
  std::vector<double> uinf_face;
  std::size_t first = 0;      // first face to sum (1 when periodic)
};

FluidFaces fluid_faces(const CoupledProblem& pb, const FluidState& s) {
  const auto& bc = pb.fluid_bc;
  const std::size_t n = s.u.size();
  const double h = pb.x.h(0);
  FluidFaces ff;
  ff.first = bc.periodic ? 1 : 0;
  ff.gw = relative_velocity_gradient(pb.x, s.u, bc);
  const auto& ui = bc.u_inf;
  const double glo = bc.periodic ? ui[n - 1] : 2.0 * bc.u_wall[0] - ui[0];
  const double ghi = bc.periodic ? ui[0] : 2.0 * bc.u_wall[1] - ui[n - 1];
  ff.guinf = face_gradient_1d(ui, h, glo, ghi);
  ff.grho.assign(n + 1, 0.0);
  ff.rho_face.assign(n + 1, 0.0);
  ff.uinf_face.assign(n + 1, 0.0);
  for (std::size_t f = 1; f < n; ++f) {
    ff.grho[f] = (s.rho[f] - s.rho[f - 1]) / h;
    ff.rho_face[f] = 0.5 * (s.rho[f] + s.rho[f - 1]);
    ff.uinf_face[f] = 0.5 * (ui[f] + ui[f - 1]);
  }
  if (bc.periodic) {
    ff.grho[0] = ff.grho[n] = (s.rho[0] - s.rho[n - 1]) / h;
    ff.rho_face[0] = ff.rho_face[n] = 0.5 * (s.rho[0] + s.rho[n - 1]);
    ff.uinf_face[0] = ff.uinf_face[n] = 0.5 * (ui[0] + ui[n - 1]);
  } else {
    ff.rho_face[0] = s.rho[0];
    ff.rho_face[n] = s.rho[n - 1];
    ff.uinf_face[0] = bc.u_wall[0];
    ff.uinf_face[n] = bc.u_wall[1];
  }
  return ff;
}

class RowBuilder {
 public:
  RowBuilder(std::vector<LedgerTerm>& terms, bool define) : terms_(terms), define_(define) {}
  void put(const std::string& name, int side, double value) {
    if (define_) terms_.push_back({name, side});
    values_.push_back(value);
  }
  std::vector<double> take() { return std::move(values_); }

 private:
  std::vector<LedgerTerm>& terms_;
  bool define_;
  std::vector<double> values_;
};

struct Instant {
  double kinetic_fluid, pressure, field, kinetic_energy;
  double art_pressure, half_rho2, reg_field;
  double kinetic_mass;
};

struct Rates {
  double dissipation, div_work, stress_cross, convective_cross, drag_uinf, kinetic_mass_work;
  double eps_grad_rho, eps_pressure_grad, eps_quartic, half_rho2_divu, eps_cross;
};

struct Boundary {
  double sigma_minus = 0, sigma_plus = 0, gamma_in = 0, gamma_out = 0, influx = 0;
  double boundary_rho2 = 0, gamma_in_rho = 0;
};

Instant instant_terms(const CoupledProblem& pb, const CoupledState& s) {
  const auto& p = pb.params;
  const double h = pb.x.h(0);
  const auto& ui = pb.fluid_bc.u_inf;
  Instant in{};
  for (std::size_t i = 0; i < s.fluid.rho.size(); ++i) {
    const double r = s.fluid.rho[i];
    const double w = s.fluid.u[i] - ui[i];
    in.kinetic_fluid += 0.5 * r * w * w * h;
    in.pressure += std::pow(r, p.gamma) / (p.gamma - 1.0) * h;
    if (p.delta != 0.0) in.art_pressure += p.delta * std::pow(r, p.beta) / (p.beta - 1.0) * h;
    in.half_rho2 += 0.5 * r * r * h;
  }
  if (pb.field) {
    in.field = 0.5 * gradient_energy(pb.x, s.phi.phi);
    if (p.eps != 0.0) in.reg_field = 0.5 * p.eps * regularized_gradient_energy(pb.x, s.phi.phi, pb.m);
  }
  in.kinetic_energy = 0.5 * velocity_moment(s.f, 2.0);
  in.kinetic_mass = s.f.mass();
  return in;
}

Rates rate_terms(const CoupledProblem& pb, const CoupledState& s, std::span<const double> u_eff) {
  const auto& p = pb.params;
  const auto& bc = pb.fluid_bc;
  const double h = pb.x.h(0);
  const std::size_t n = s.fluid.rho.size();
  const double kappa = p.longitudinal_viscosity();
  const auto ff = fluid_faces(pb, s.fluid);
  const auto divu = velocity_divergence(pb.x, s.fluid.u, bc);
  const auto mom = compute_moments(s.f);
  Rates r{};
  for (std::size_t f = ff.first; f <= n; ++f) {
    r.dissipation += kappa * ff.gw[f] * ff.gw[f] * h;
    r.stress_cross -= kappa * ff.guinf[f] * ff.gw[f] * h;
    if (p.eps != 0.0) {
      const double g2 = ff.grho[f] * ff.grho[f];
      const double rf = ff.rho_face[f];
      r.eps_grad_rho += p.eps * g2 * h;
      double coef = p.gamma * std::pow(rf, p.gamma - 2.0);
      if (p.delta != 0.0) coef += p.delta * p.beta * std::pow(rf, p.beta - 2.0);
      r.eps_pressure_grad += p.eps * coef * g2 * h;
      r.eps_quartic += p.eps * std::pow(ff.gw[f], 4) * h;
      r.eps_cross += p.eps * ff.grho[f] * ff.gw[f] * ff.uinf_face[f] * h;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = s.fluid.rho[i];
    const double u = s.fluid.u[i];
    const double ui = bc.u_inf[i];
    const double dui = 0.5 * (ff.guinf[i] + ff.guinf[i + 1]);
    double press = std::pow(rho, p.gamma);
    if (p.delta != 0.0) press += p.delta * std::pow(rho, p.beta);
    r.div_work -= press * dui * h;
    r.convective_cross -= rho * u * dui * (u - ui) * h;
    const double ue = u_eff.empty() ? u : u_eff[i];
    const double j = mom.j.empty() ? 0.0 : mom.j[0][i];
    r.drag_uinf -= (j - mom.n[i] * ue) * ui * h;
    r.half_rho2_divu -= 0.5 * rho * rho * divu[i] * h;
  }
  r.kinetic_mass_work = static_cast<double>(pb.x.dim()) * s.f.mass();
  return r;
}

Boundary boundary_terms(const CoupledProblem& pb, const StepRecord& st, double dt) {
  const auto& p = pb.params;
  const auto& bc = pb.fluid_bc;
  Boundary b;
  auto half_v2 = [](const std::array<double, 3>& v) { return 0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); };
  if (!st.kinetic_trace.flux_dt.empty()) {
    b.sigma_minus = -st.kinetic_trace.inflow(pb.x, pb.v, half_v2);
    b.sigma_plus = st.kinetic_trace.outflow(pb.x, pb.v, half_v2);
  }
  if (bc.periodic || pb.fluid_frozen) return b;
  for (int side = 0; side < 2; ++side) {
    const double un = std::abs(bc.normal_velocity(side)) * dt;
    const double r = st.fluid_trace.rho_trace[side];
    const double rb = bc.rho_wall[side];
    b.boundary_rho2 += 0.5 * r * r * un;
    if (bc.inflow(side)) {
      b.gamma_in += (std::pow(r, p.gamma) + p.delta * std::pow(r, p.beta)) * un;
      double coef = p.gamma / (p.gamma - 1.0) * std::pow(r, p.gamma - 1.0);
      if (p.delta != 0.0) coef += p.delta * p.beta / (p.beta - 1.0) * std::pow(r, p.beta - 1.0);
      b.influx += coef * rb * un;
      b.gamma_in_rho += r * rb * un;
    } else if (bc.outflow(side)) {
      double e = std::pow(r, p.gamma) / (p.gamma - 1.0);
      if (p.delta != 0.0) e += p.delta * std::pow(r, p.beta) / (p.beta - 1.0);
      b.gamma_out += e * un;
    }
  }
  return b;
}

}  // namespace

struct EnergyLedgerBuilder::Impl {
  const CoupledProblem* pb;
  bool eps_level;
  EnergyLedger led;
  Rates prev{};
  Rates acc{};
  Boundary bacc{};
  double e0 = 0.0;
  double t_prev = 0.0;
};

EnergyLedgerBuilder::EnergyLedgerBuilder(const CoupledProblem& pb, LedgerLevel level) : impl_(std::make_unique<Impl>()) {
  if (pb.x.dim() != 1) raise(ErrorCode::InvalidArgument, "energy ledger supports d = 1 only", "diagnostics");
  impl_->pb = &pb;
  impl_->eps_level = level == LedgerLevel::EpsDelta;
  impl_->led.level = level;
}
EnergyLedgerBuilder::~EnergyLedgerBuilder() = default;
EnergyLedgerBuilder::EnergyLedgerBuilder(EnergyLedgerBuilder&&) noexcept = default;
EnergyLedgerBuilder& EnergyLedgerBuilder::operator=(EnergyLedgerBuilder&&) noexcept = default;

const EnergyLedger& EnergyLedgerBuilder::ledger() const { return impl_->led; }

void EnergyLedgerBuilder::push(const Snapshot& snap) {
  auto& m = *impl_;
  const auto& pb = *m.pb;
  const bool eps_level = m.eps_level;
  auto& led = m.led;
  const bool first = led.rows.empty();
  const Instant in = instant_terms(pb, snap.state);
  const std::vector<double>& ueff = snap.step.u_eff.empty() ? snap.state.fluid.u : snap.step.u_eff;
  const Rates b = rate_terms(pb, snap.state, ueff);
  if (first) {
    m.e0 = in.kinetic_fluid + in.pressure + in.field + in.kinetic_energy;
    if (eps_level) m.e0 += in.art_pressure + in.half_rho2 + in.reg_field;
  } else {
    const double dt = snap.state.t - m.t_prev;
    const Rates& a = m.prev;
    auto& acc = m.acc;
    auto trap = [dt](double x, double y) { return 0.5 * dt * (x + y); };
    acc.dissipation += trap(a.dissipation, b.dissipation);
    acc.div_work += trap(a.div_work, b.div_work);
    acc.stress_cross += trap(a.stress_cross, b.stress_cross);
    acc.convective_cross += trap(a.convective_cross, b.convective_cross);
    acc.drag_uinf += trap(a.drag_uinf, b.drag_uinf);
    acc.kinetic_mass_work += trap(a.kinetic_mass_work, b.kinetic_mass_work);
    acc.eps_grad_rho += trap(a.eps_grad_rho, b.eps_grad_rho);
    acc.eps_pressure_grad += trap(a.eps_pressure_grad, b.eps_pressure_grad);
    acc.eps_quartic += trap(a.eps_quartic, b.eps_quartic);
    acc.half_rho2_divu += trap(a.half_rho2_divu, b.half_rho2_divu);
    acc.eps_cross += trap(a.eps_cross, b.eps_cross);
    const Boundary bd = boundary_terms(pb, snap.step, dt);
    auto& bacc = m.bacc;
    bacc.sigma_minus += bd.sigma_minus;
    bacc.sigma_plus += bd.sigma_plus;
    bacc.gamma_in += bd.gamma_in;
    bacc.gamma_out += bd.gamma_out;
    bacc.influx += bd.influx;
    bacc.boundary_rho2 += bd.boundary_rho2;
    bacc.gamma_in_rho += bd.gamma_in_rho;
  }
  m.prev = b;
  m.t_prev = snap.state.t;
  const Rates& acc = m.acc;
  const Boundary& bacc = m.bacc;

  RowBuilder rb(led.terms, first);
  rb.put("kinetic_fluid", +1, in.kinetic_fluid);
  rb.put("pressure", +1, in.pressure);
  if (eps_level) {
    rb.put("art_pressure", +1, in.art_pressure);
    rb.put("half_rho2", +1, in.half_rho2);
    rb.put("reg_field", +1, in.reg_field);
  }
  rb.put("field", +1, in.field);
  rb.put("kinetic_energy", +1, in.kinetic_energy);
  rb.put("dissipation", +1, acc.dissipation);
  if (eps_level) {
    rb.put("eps_grad_rho", +1, acc.eps_grad_rho);
    rb.put("boundary_rho2", +1, bacc.boundary_rho2);
    rb.put("eps_pressure_grad", +1, acc.eps_pressure_grad);
    rb.put("eps_quartic", +1, acc.eps_quartic);
  }
  rb.put("sigma_minus", +1, bacc.sigma_minus);
  rb.put("sigma_plus", +1, bacc.sigma_plus);
  rb.put("gamma_in_pressure", +1, bacc.gamma_in);
  rb.put("gamma_out_pressure", +1, bacc.gamma_out);
  rb.put("initial_energy", -1, m.e0);
  rb.put("div_uinf_work", -1, acc.div_work);
  rb.put("stress_cross", -1, acc.stress_cross);
  rb.put("convective_cross", -1, acc.convective_cross);
  rb.put("gamma_in_influx", -1, bacc.influx);
  rb.put("kinetic_mass_work", -1, acc.kinetic_mass_work);
  rb.put("drag_uinf", -1, acc.drag_uinf);
  if (eps_level) {
    rb.put("half_rho2_divu", -1, acc.half_rho2_divu);
    rb.put("eps_cross", -1, acc.eps_cross);
    rb.put("gamma_in_rho", -1, bacc.gamma_in_rho);
  }
  rb.put("kinetic_mass_instant", 0, static_cast<double>(pb.x.dim()) * in.kinetic_mass);

  LedgerRow row;
  row.t = snap.state.t;
  row.values = rb.take();
  for (std::size_t i = 0; i < row.values.size(); ++i) {
    if (!std::isfinite(row.values[i])) {
      raise(ErrorCode::NonFiniteField, "energy ledger term " + led.terms[i].name + " is not finite", "diagnostics");
    }
    if (led.terms[i].side > 0) row.lhs += row.values[i];
    if (led.terms[i].side < 0) row.rhs += row.values[i];
  }
  row.margin = row.rhs - row.lhs;
  led.rows.push_back(std::move(row));
}

EnergyLedger energy_ledger(const CoupledProblem& pb, const History& history, LedgerLevel level) {
  if (history.size() < 2) raise(ErrorCode::InsufficientHistory, "energy ledger needs at least 2 snapshots", "diagnostics");
  EnergyLedgerBuilder b(pb, level);
  for (const auto& snap : history) b.push(snap);
  return b.ledger();
}

void MassBalanceBuilder::push(const Snapshot& snap) {
  const auto& pb = *problem_;
  auto one = [](const std::array<double, 3>&) { return 1.0; };
  const double mk = snap.state.f.mass();
  const double mf = quadrature(pb.x, snap.state.fluid.rho);
  MassBalanceRow r{};
  r.t = snap.state.t;
  r.kinetic_mass = mk;
  r.fluid_mass = mf;
  if (rows_.empty()) {
    mk0_ = mk;
    mf0_ = mf;
    rows_.push_back(r);
    return;
  }
  double kstep = 0.0, fstep = 0.0;
  const auto& tr = snap.step.kinetic_trace;
  if (!tr.flux_dt.empty()) kstep = tr.outflow(pb.x, pb.v, one) - tr.inflow(pb.x, pb.v, one);
  if (!pb.fluid_bc.periodic && !pb.fluid_frozen)
    fstep = snap.step.fluid_trace.mass_flux_dt[0] + snap.step.fluid_trace.mass_flux_dt[1];
  kout_ += kstep;
  fout_ += fstep;
  const auto& prev = rows_.back();
  r.kinetic_outflow = kout_;
  r.fluid_outflow = fout_;
  r.kinetic_defect = mk - (mk0_ - kout_);
  r.fluid_defect = mf - (mf0_ - fout_);
  r.kinetic_step_defect = mk - (prev.kinetic_mass - kstep);
  r.fluid_step_defect = mf - (prev.fluid_mass - fstep);
  rows_.push_back(r);
}

std::vector<MassBalanceRow> mass_balance_report(const CoupledProblem& pb, const History& history) {
  if (history.size() < 2) raise(ErrorCode::InsufficientHistory, "mass balance needs at least 2 snapshots", "diagnostics");
  MassBalanceBuilder b(pb);
  for (const auto& snap : history) b.push(snap);
  return b.rows();
}

MomentRow moment_row(const CoupledState& state) {
  const auto& f = state.f;
  const auto mom = compute_moments(f);
  double jl1 = 0.0;
  for (const auto& comp : mom.j)
    for (double v : comp) jl1 += std::abs(v);
  jl1 *= f.x.cell_volume();
  return {state.t, f.mass(), jl1, velocity_moment(f, 2.0)};
}

std::vector<MomentRow> moment_series(const History& history) {
  std::vector<MomentRow> out;
  for (const auto& snap : history) out.push_back(moment_row(snap.state));
  return out;
}

MomentInterpolationReport moment_interpolation_report(const PhaseField& f, int kappa) {
  MomentInterpolationReport rep;
  rep.kappa = kappa;
  const double d = f.x.dim();
  rep.sup_f = f.values.empty() ? 0.0 : *std::max_element(f.values.begin(), f.values.end());
  rep.moment_kappa = velocity_moment(f, kappa);
  rep.m_value = std::max(rep.sup_f, rep.moment_kappa);
  rep.p_max_n = (kappa + d) / d;
  rep.p_max_j = (kappa + d) / (d + 1.0);
  const auto mom = compute_moments(f);
  const double vol = f.x.cell_volume();
  auto norm = [&](const std::vector<double>& mag, double p) {
    double s = 0.0;
    for (double v : mag) s += std::pow(std::abs(v), p) * vol;
    return std::pow(s, 1.0 / p);
  };
  std::vector<double> jmag(f.x.size(), 0.0);
  for (std::size_t i = 0; i < jmag.size(); ++i) {
    double s = 0.0;
    for (const auto& comp : mom.j) s += comp[i] * comp[i];
    jmag[i] = std::sqrt(s);
  }
  for (double frac : {0.0, 0.5, 1.0}) {
    const double pn = 1.0 + frac * (rep.p_max_n - 1.0);
    rep.entries.push_back({"n", pn, norm(mom.n, pn)});
  }
  for (double frac : {0.0, 0.5, 1.0}) {
    const double pj = 1.0 + frac * (rep.p_max_j - 1.0);
    rep.entries.push_back({"j", pj, norm(jmag, pj)});
  }
  return rep;
}

}  // namespace vpfp
