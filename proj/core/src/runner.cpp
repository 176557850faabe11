#include "vpfp/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "vpfp/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace vpfp {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationFailed:
    case ErrorCode::MissingInput:
    case ErrorCode::InvalidInflow:
    case ErrorCode::InvalidTestFunction:
      return kExitValidation;
    default:
      return kExitSolver;
  }
}

namespace {

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

json json_number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void write_ledger_csv(const std::string& path, const EnergyLedger& led) {
  CsvTable t;
  t.header.push_back("t");
  for (const auto& term : led.terms) t.header.push_back(term.name);
  t.header.insert(t.header.end(), {"lhs", "rhs", "margin"});
  for (const auto& r : led.rows) {
    std::vector<double> row{r.t};
    row.insert(row.end(), r.values.begin(), r.values.end());
    row.insert(row.end(), {r.lhs, r.rhs, r.margin});
    t.rows.push_back(std::move(row));
  }
  write_csv(path, t);
}

void write_outputs(const std::string& dir, const RunResult& r, const std::vector<std::vector<double>>& picard_rows) {
  if (!r.ledger.rows.empty()) write_ledger_csv(join(dir, "ledger.csv"), r.ledger);
  if (!r.moments.empty()) {
    CsvTable t{{"t", "mass", "j_l1", "m2"}, {}};
    for (const auto& m : r.moments) t.rows.push_back({m.t, m.mass, m.current_l1, m.m2});
    write_csv(join(dir, "moments.csv"), t);
  }
  if (!r.mass.empty()) {
    CsvTable t{{"t", "kinetic_mass", "fluid_mass", "kinetic_outflow", "fluid_outflow", "kinetic_defect",
                "fluid_defect", "kinetic_step_defect", "fluid_step_defect"},
               {}};
    for (const auto& m : r.mass)
      t.rows.push_back({m.t, m.kinetic_mass, m.fluid_mass, m.kinetic_outflow, m.fluid_outflow, m.kinetic_defect,
                        m.fluid_defect, m.kinetic_step_defect, m.fluid_step_defect});
    write_csv(join(dir, "mass_balance.csv"), t);
  }
  if (!r.lp.empty()) {
    CsvTable t{{"t", "bound", "norm", "margin"}, {}};
    for (const auto& m : r.lp) t.rows.push_back({m.t, m.bound, m.norm, m.margin});
    write_csv(join(dir, "lp_growth.csv"), t);
  }
  if (!r.density.empty()) {
    CsvTable t{{"t", "lower_bound", "upper_bound", "lower_margin", "upper_margin"}, {}};
    for (const auto& m : r.density) t.rows.push_back({m.t, m.lower_bound, m.upper_bound, m.lower_margin, m.upper_margin});
    write_csv(join(dir, "density_bounds.csv"), t);
  }
  if (!picard_rows.empty()) write_csv(join(dir, "picard.csv"), {{"t", "iterations", "residual", "velocity_edge_fraction"}, picard_rows});
  if (!r.chaos.empty()) {
    CsvTable t{{"step", "l1", "n_gap", "j_gap", "e2_gap"}, {}};
    for (std::size_t k = 0; k < r.chaos.size(); ++k) {
      const auto& c = r.chaos[k];
      t.rows.push_back({static_cast<double>(k), c.l1, c.n_gap, c.j_gap, c.e2_gap});
    }
    write_csv(join(dir, "chaos.csv"), t);
  }
  if (!r.weak_form.entries.empty()) {
    std::ofstream out(join(dir, "weak_form.csv"));
    out << "item,name,residual,scale\n" << std::setprecision(17);
    for (const auto& e : r.weak_form.entries) out << e.item << ',' << e.name << ',' << e.residual << ',' << e.scale << '\n';
  }
}

std::string summary_of(const Scenario& s, const RunResult& r) {
  json j;
  j["name"] = s.name;
  j["config_hash"] = r.hash;
  j["seed"] = s.seed;
  j["status"] = r.status;
  j["exit_code"] = r.exit_code;
  j["error"] = r.error;
  j["dt"] = r.dt;
  j["h"] = r.h;
  j["steps"] = r.steps;
  j["t_end"] = r.final_state.t;
  j["ledger_level"] = r.ledger.level == LedgerLevel::Base ? "base" : "eps_delta";
  j["min_margin"] = json_number(r.min_margin);
  j["margin_threshold"] = json_number(r.margin_threshold);
  j["density_margin"] = json_number(r.density_margin);
  j["margin_constant"] = s.margin_constant;
  j["max_picard_iterations"] = r.max_iterations;
  j["max_velocity"] = r.max_velocity;
  json orders = json::object();
  for (const auto& [k, v] : r.orders) orders[k] = json_number(v);
  j["convergence_orders"] = orders;
  json flags = json::object();
  json inv = json::array();
  for (const auto& i : r.invariants) {
    flags[i.name] = i.pass;
    inv.push_back({{"name", i.name}, {"pass", i.pass}, {"value", json_number(i.value)}, {"threshold", json_number(i.threshold)}});
  }
  j["flags"] = flags;
  j["invariants"] = inv;
  json val = json::array();
  for (const auto& v : r.validation.items) val.push_back({{"hypothesis", v.hypothesis}, {"pass", v.pass}, {"detail", v.detail}});
  j["validation"] = val;
  json wf = json::array();
  for (const auto& e : r.weak_form.entries)
    wf.push_back({{"item", e.item}, {"name", e.name}, {"residual", json_number(e.residual)}, {"scale", json_number(e.scale)}});
  j["weak_form"] = wf;
  if (!r.final_state.f.values.empty()) j["final_fingerprint"] = state_fingerprint(r.final_state);
  return j.dump(2) + "\n";
}

// Worst bound margin after t = 0; the initial row attains the bound by construction.
double min_density_margin(const std::vector<DensityBoundsMargin>& rows) {
  double dm = std::numeric_limits<double>::infinity();
  for (std::size_t k = rows.size() > 1 ? 1 : 0; k < rows.size(); ++k)
    dm = std::min({dm, rows[k].lower_margin, rows[k].upper_margin});
  return dm;
}

void finish(const Scenario& s, RunResult& r, const std::string& dir,
            const std::vector<std::vector<double>>& picard_rows) {
  r.summary_json = summary_of(s, r);
  if (dir.empty()) return;
  write_outputs(dir, r, picard_rows);
  write_text(join(dir, "summary.json"), r.summary_json);
}

}  // namespace

RunResult run_scenario(const Scenario& s_in, const RunOptions& opt) {
  Scenario s = s_in;
  if (opt.seed) s.seed = *opt.seed;
  RunResult r;
  r.hash = s.config_hash();
  const std::string dir = opt.out_dir;
  if (!dir.empty()) fs::create_directories(dir);
  std::vector<std::vector<double>> picard_rows;

  try {
    r.validation = validate_scenario(s);
  } catch (const Error& e) {
    r.exit_code = exit_code_for(e.code());
    r.status = "validation failed";
    r.error = std::string(to_string(e.code())) + ": " + e.detail();
    finish(s, r, dir, picard_rows);
    return r;
  }
  if (!r.validation.ok()) {
    r.exit_code = kExitValidation;
    r.status = "validation failed";
    for (const auto& i : r.validation.items)
      if (!i.pass) r.error += (r.error.empty() ? "" : "; ") + std::string("fail \"") + i.hypothesis + "\"";
    if (!dir.empty()) write_text(join(dir, "validation.txt"), r.validation.text());
    finish(s, r, dir, picard_rows);
    return r;
  }

  int step = 0;
  CoupledState state;
  try {
    r.problem = build_problem(s);
    const auto& pb = r.problem;
    state = initial_state(s, pb);
    r.dt = scenario_dt(s, pb, state);
    r.h = pb.x.h(0);
    r.steps = static_cast<int>(std::ceil(s.t_end / r.dt - 1e-9));
    const double horizon = r.steps * r.dt;

    LedgerLevel level = LedgerLevel::Base;
    if (opt.ledger_level) level = *opt.ledger_level;
    else if (s.ledger == "eps_delta") level = LedgerLevel::EpsDelta;
    else if (s.ledger == "auto" && (s.params.eps > 0.0 || s.params.delta > 0.0)) level = LedgerLevel::EpsDelta;
    EnergyLedgerBuilder ledger(pb, level);
    MassBalanceBuilder mass(pb);
    std::optional<WeakFormBuilder> weak;
    if (s.weak_form) weak.emplace(pb, default_testset(pb, horizon), horizon);

    const PhaseField f0 = state.f;
    const double gmax = s.inflow != "none" && !s.periodic ? s.inflow_density.sup() : 0.0;
    const InflowData g_bound = pb.g.scaled(std::max(0.0, gmax));

    double rho_lo = *std::min_element(state.fluid.rho.begin(), state.fluid.rho.end());
    double rho_hi = *std::max_element(state.fluid.rho.begin(), state.fluid.rho.end());
    for (int side = 0; side < 2; ++side) {
      if (pb.fluid_bc.inflow(side)) {
        rho_lo = std::min(rho_lo, pb.fluid_bc.rho_wall[side]);
        rho_hi = std::max(rho_hi, pb.fluid_bc.rho_wall[side]);
      }
    }
    double divu_integral = 0.0;

    std::optional<ParticleEnsemble> ens;
    InteractionKernel kernel{s.kernel, s.softening};
    if (s.particles > 0) {
      ens = init_ensemble(state.f, s.particles, s.seed, s.periodic ? ParticleWalls::Periodic : ParticleWalls::Reflecting);
    }

    const fs::path snapdir = dir.empty() ? fs::path() : fs::path(dir) / "snapshots";
    if (!dir.empty()) fs::create_directories(snapdir);
    auto dump = [&](const CoupledState& st, int k) {
      if (dir.empty()) return;
      char name[32];
      std::snprintf(name, sizeof name, "snap_%06d.snap", k);
      write_snapshot_file((snapdir / name).string(), snapshot_of(st));
    };

    auto record_outputs = [&](const CoupledState& st) {
      r.moments.push_back(moment_row(st));
      const PhaseField series[2] = {f0, st.f};
      const auto lp = lp_growth_check(series, g_bound, std::numeric_limits<double>::infinity());
      r.lp.push_back(lp.back());
      const double lo = rho_lo * std::exp(-divu_integral);
      const double hi = rho_hi * std::exp(divu_integral);
      const auto [mn, mx] = std::minmax_element(st.fluid.rho.begin(), st.fluid.rho.end());
      r.density.push_back({st.t, lo, hi, *mn - lo, hi - *mx});
      if (ens) r.chaos.push_back(chaos_metric(*ens, st.f));
    };

    Snapshot first{state, {}};
    ledger.push(first);
    mass.push(first);
    if (weak) weak->push(first);
    if (opt.keep_history) r.history.push_back(first);
    record_outputs(state);
    dump(state, 0);
    r.max_velocity = sup_abs(state.fluid.u);

    for (step = 1; step <= r.steps; ++step) {
      const double limit = coupled_cfl_limit(pb, state);
      if (r.dt > limit * (1.0 + 1e-9)) {
        raise(ErrorCode::TimeStepTooLarge,
              "dt = " + std::to_string(r.dt) + " exceeds the stable step " + std::to_string(limit), "run");
      }
      const double divu_sup = pb.fluid_frozen ? 0.0 : sup_abs(velocity_divergence(pb.x, state.fluid.u, pb.fluid_bc));
      auto res = advance(pb, state, r.dt, s.fixed_point);
      divu_integral += r.dt * divu_sup;
      r.max_iterations = std::max(r.max_iterations, res.record.iterations);
      picard_rows.push_back({res.state.t, static_cast<double>(res.record.iterations), res.record.residual,
                             res.record.velocity_edge_fraction});
      if (ens) {
        ParticleFields pf{pb.x, state.fluid.u, pb.c.c, state.phi.grad};
        if (!pb.field) pf.grad_phi_frozen.clear();
        const int sub = s.particle_dt > 0.0 ? static_cast<int>(std::ceil(r.dt / s.particle_dt - 1e-9)) : 1;
        for (int k = 0; k < sub; ++k) *ens = em_step(*ens, pf, r.dt / sub, kernel, {s.friction_sign, true, true});
      }
      Snapshot snap{std::move(res.state), std::move(res.record)};
      ledger.push(snap);
      mass.push(snap);
      if (weak) weak->push(snap);
      r.max_velocity = std::max(r.max_velocity, sup_abs(snap.state.fluid.u));
      const bool last = step == r.steps;
      if (step % s.output_every == 0 || last) record_outputs(snap.state);
      if (last || (s.snapshot_every > 0 && step % s.snapshot_every == 0)) dump(snap.state, step);
      state = snap.state;
      if (opt.keep_history) r.history.push_back(std::move(snap));
    }
    r.final_state = state;
    r.ledger = ledger.ledger();
    r.mass = mass.rows();
    if (weak) r.weak_form = weak->report();
    if (ens && !dir.empty()) write_ensemble(join(dir, "ensemble.bin"), *ens);
  } catch (const Error& e) {
    r.exit_code = exit_code_for(e.code());
    r.status = r.exit_code == kExitValidation ? "validation failed" : "solver error";
    std::string where = "[" + e.stage() + "] " + std::string(to_string(e.code())) + ": " + e.detail();
    if (r.steps > 0) where += " (step " + std::to_string(step) + ")";
    if (!dir.empty() && !state.f.values.empty()) {
      const std::string path = join(dir, "failure_state.snap");
      write_snapshot_file(path, snapshot_of(state));
      where += "; state dumped to " + path;
    }
    r.error = where;
    r.final_state = state;
    finish(s, r, dir, picard_rows);
    return r;
  }

  // Invariants.
  const double scale = std::max(1.0, r.mass.empty() ? 1.0 : std::max(r.mass[0].kinetic_mass, r.mass[0].fluid_mass));
  double kdef = 0.0, fdef = 0.0;
  for (const auto& m : r.mass) {
    kdef = std::max(kdef, std::abs(m.kinetic_step_defect));
    fdef = std::max(fdef, std::abs(m.fluid_step_defect));
  }
  r.invariants.push_back({"kinetic_mass_balance", kdef <= 1e-12 * scale, kdef, 1e-12 * scale});
  r.invariants.push_back({"fluid_mass_balance", fdef <= 1e-12 * scale, fdef, 1e-12 * scale});
  double lp_worst = std::numeric_limits<double>::infinity();
  for (const auto& m : r.lp) lp_worst = std::min(lp_worst, m.bound * (1.0 + 1e-3) - m.norm);
  r.invariants.push_back({"linf_growth", lp_worst >= 0.0, lp_worst, 0.0});
  r.min_margin = r.ledger.min_margin();
  r.margin_threshold = -s.margin_constant * (r.dt + r.h);
  const bool energy_law = !s.velocity_frozen && !s.fluid_frozen;
  if (energy_law)
    r.invariants.push_back({"energy_margin", r.min_margin >= r.margin_threshold, r.min_margin, r.margin_threshold});
  const bool transport_law = s.velocity_frozen && !s.fluid_frozen;
  if (transport_law) {
    r.density_margin = min_density_margin(r.density);
    r.invariants.push_back({"density_bounds", r.density_margin >= r.margin_threshold, r.density_margin, r.margin_threshold});
  }

  if (s.refinement) {
    RunOptions ro;
    ro.ledger_level = r.ledger.level;
    if (!dir.empty()) ro.out_dir = join(dir, "refined");
    const auto fine = run_scenario(refined(s), ro);
    if (fine.exit_code == kExitSolver || fine.exit_code == kExitValidation) {
      r.invariants.push_back({"refined_run_completed", false, static_cast<double>(fine.exit_code), 0.0});
    } else {
      const double e0 = r.ledger.rows.empty() ? 1.0 : std::abs(r.ledger.rows[0].rhs);
      const double tol = 1e-12 * std::max(1.0, e0);
      r.orders["min_margin_refined"] = fine.min_margin;
      if (energy_law)
        r.invariants.push_back({"margin_nondecreasing_under_refinement", fine.min_margin >= r.min_margin - tol,
                                fine.min_margin - r.min_margin, -tol});
      if (transport_law) {
        r.orders["density_margin_refined"] = fine.density_margin;
        const double coarse_violation = std::max(0.0, -r.density_margin);
        const double fine_violation = std::max(0.0, -fine.density_margin);
        r.invariants.push_back({"density_violation_nonincreasing_under_refinement",
                                fine_violation <= coarse_violation + tol, fine_violation - coarse_violation, tol});
      }
      if (s.weak_form) {
        for (int item = 1; item <= 4; ++item) {
          const double a = r.weak_form.item_residual(item), b = fine.weak_form.item_residual(item);
          r.orders["weak_form_item" + std::to_string(item)] = (a > 0 && b > 0) ? std::log2(a / b) : 0.0;
        }
      }
    }
  }

  for (const auto& i : r.invariants) {
    if (!i.pass) {
      r.exit_code = kExitInvariant;
      r.status = "invariant failure";
      r.error += (r.error.empty() ? "" : "; ") + i.name;
    }
  }
  finish(s, r, dir, picard_rows);
  return r;
}

// ---------------------------------------------------------------- sweep

SweepResult run_sweep(const Scenario& s, const std::string& out_dir) {
  if (s.schedule.empty()) raise(ErrorCode::ParseError, s.config.source() + ": [sweep] schedule is missing", "sweep");
  if (!out_dir.empty()) fs::create_directories(out_dir);
  SweepResult res;
  std::size_t index = 0;
  int worst_run = kExitOk;
  auto run_one = [&](const ContinuationPoint& p) {
    const std::size_t k = index++;
    RunOptions o;
    o.ledger_level = LedgerLevel::EpsDelta;
    if (!out_dir.empty()) o.out_dir = join(out_dir, "point_" + std::to_string(k));
    const auto rr = run_scenario(with_point(s, p), o);
    worst_run = std::max(worst_run, rr.exit_code);
    ContinuationRun cr;
    cr.point = p;
    cr.ok = rr.exit_code == kExitOk || rr.exit_code == kExitInvariant;
    cr.error = rr.error;
    cr.min_margin = rr.min_margin;
    cr.max_velocity = rr.max_velocity;
    if (cr.ok && !rr.ledger.rows.empty()) {
      const std::size_t last = rr.ledger.rows.size() - 1;
      cr.art_pressure = rr.ledger.value(last, "art_pressure");
      for (const char* name : {"reg_field", "eps_grad_rho", "eps_pressure_grad", "eps_quartic", "eps_cross"})
        cr.eps_terms += std::abs(rr.ledger.value(last, name));
      cr.fingerprint = state_fingerprint(rr.final_state);
    }
    return cr;
  };
  res.report = continuation_sweep(s.schedule, run_one);

  json j;
  j["name"] = s.name;
  j["config_hash"] = s.config_hash();
  json runs = json::array();
  for (const auto& r : res.report.runs) {
    runs.push_back({{"cutoff", r.point.cutoff}, {"eps", r.point.eps}, {"delta", r.point.delta}, {"ok", r.ok},
                    {"error", r.error}, {"min_margin", json_number(r.min_margin)},
                    {"art_pressure", json_number(r.art_pressure)}, {"eps_terms", json_number(r.eps_terms)},
                    {"max_velocity", r.max_velocity}});
  }
  j["runs"] = runs;
  json checks = json::array();
  for (const auto& c : res.report.checks)
    checks.push_back({{"name", c.name}, {"observed", json_number(c.observed)}, {"expected", c.expected}, {"pass", c.pass}});
  j["checks"] = checks;
  j["all_pass"] = res.report.all_pass();
  res.report_json = j.dump(2) + "\n";

  bool any_failed_run = false, checks_ok = true;
  for (const auto& r : res.report.runs) any_failed_run = any_failed_run || !r.ok;
  for (const auto& c : res.report.checks) checks_ok = checks_ok && c.pass;
  if (any_failed_run) res.exit_code = worst_run == kExitValidation ? kExitValidation : kExitSolver;
  else if (!checks_ok || worst_run == kExitInvariant) res.exit_code = kExitInvariant;

  if (!out_dir.empty()) {
    write_text(join(out_dir, "sweep_report.json"), res.report_json);
    CsvTable t{{"cutoff", "eps", "delta", "ok", "min_margin", "art_pressure", "eps_terms", "max_velocity"}, {}};
    for (const auto& r : res.report.runs)
      t.rows.push_back({r.point.cutoff, r.point.eps, r.point.delta, r.ok ? 1.0 : 0.0, r.min_margin, r.art_pressure,
                        r.eps_terms, r.max_velocity});
    write_csv(join(out_dir, "sweep_trend.csv"), t);
  }
  return res;
}

// ---------------------------------------------------------------- plot

namespace {

struct Series {
  std::string name;
  std::vector<double> x, y;
};

std::string svg_chart(const std::string& title, const std::string& xlabel, const std::vector<Series>& series) {
  const double W = 720, H = 420, L = 80, R = 170, T = 40, B = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y)
      if (std::isfinite(v)) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) {
    const double pad = std::max(1e-12, std::abs(y0) * 0.05 + 1e-12);
    y0 -= pad;
    y1 += pad;
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << L << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-size=\"11\" font-family=\"sans-serif\">" << x0 << "</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">"
     << x1 << "</text>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
     << xlabel << "</text>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" << y1
     << "</text>\n";
  os << "<text x=\"" << L - 6 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" << y0
     << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* col = colors[k % 6];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (std::isfinite(s.y[i])) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 + 18 * k << "\" font-size=\"12\" fill=\"" << col
       << "\" font-family=\"sans-serif\">" << s.name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

Series column_series(const CsvTable& t, const std::string& x, const std::string& y) {
  Series s{y, {}, {}};
  const auto ix = t.column(x), iy = t.column(y);
  for (const auto& row : t.rows) {
    s.x.push_back(row[ix]);
    s.y.push_back(row[iy]);
  }
  return s;
}

}  // namespace

std::vector<std::string> plot_directory(const std::string& dir) {
  if (!fs::is_directory(dir)) raise(ErrorCode::MissingInput, "'" + dir + "' is not a directory", "plot");
  const std::string out = join(dir, "plots");
  std::vector<std::string> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    fs::create_directories(out);
    write_text(join(out, name), text);
    written.push_back(join(out, name));
  };

  if (fs::exists(join(dir, "ledger.csv"))) {
    const auto t = read_csv(join(dir, "ledger.csv"));
    emit("energy.svg", svg_chart("Energy ledger", "t",
                                 {column_series(t, "t", "lhs"), column_series(t, "t", "rhs"), column_series(t, "t", "margin")}));
    emit("dissipation.svg", svg_chart("Cumulative viscous dissipation", "t", {column_series(t, "t", "dissipation")}));
    CsvTable c{{"t", "lhs", "rhs", "margin", "dissipation"}, {}};
    for (const auto& row : t.rows)
      c.rows.push_back({row[t.column("t")], row[t.column("lhs")], row[t.column("rhs")], row[t.column("margin")],
                        row[t.column("dissipation")]});
    fs::create_directories(out);
    write_csv(join(out, "energy_curve.csv"), c);
    written.push_back(join(out, "energy_curve.csv"));
  }
  if (fs::exists(join(dir, "moments.csv"))) {
    const auto t = read_csv(join(dir, "moments.csv"));
    emit("moments.svg", svg_chart("Kinetic moments", "t",
                                  {column_series(t, "t", "mass"), column_series(t, "t", "j_l1"), column_series(t, "t", "m2")}));
  }
  const fs::path snapdir = fs::path(dir) / "snapshots";
  if (fs::is_directory(snapdir)) {
    std::vector<fs::path> snaps;
    for (const auto& e : fs::directory_iterator(snapdir))
      if (e.path().extension() == ".snap") snaps.push_back(e.path());
    std::sort(snaps.begin(), snaps.end());
    if (!snaps.empty()) {
      const auto snap = read_snapshot_file(snaps.back().string());
      const auto f = phase_field_from(snap);
      const auto mom = compute_moments(f);
      CsvTable c{{"x", "rho", "u", "phi", "n"}, {}};
      const auto& rho = snap.field("rho");
      const auto& u = snap.field("u");
      const auto& phi = snap.field("phi");
      Series sr{"rho", {}, {}}, su{"u", {}, {}}, sp{"phi", {}, {}}, sn{"n", {}, {}};
      for (std::size_t i = 0; i < rho.size(); ++i) {
        const double x = f.x.center(0, static_cast<int>(i));
        c.rows.push_back({x, rho[i], u[i], phi[i], mom.n[i]});
        for (auto* s : {&sr, &su, &sp, &sn}) s->x.push_back(x);
        sr.y.push_back(rho[i]);
        su.y.push_back(u[i]);
        sp.y.push_back(phi[i]);
        sn.y.push_back(mom.n[i]);
      }
      fs::create_directories(out);
      write_csv(join(out, "fields.csv"), c);
      written.push_back(join(out, "fields.csv"));
      emit("fields.svg", svg_chart("Fields at t = " + snap.meta.at("t"), "x", {sr, su, sp, sn}));
    }
  }
  if (fs::exists(join(dir, "sweep_trend.csv"))) {
    const auto t = read_csv(join(dir, "sweep_trend.csv"));
    emit("margin_vs_eps.svg", svg_chart("Minimum margin against eps", "eps", {column_series(t, "eps", "min_margin")}));
    emit("eps_terms_vs_eps.svg", svg_chart("eps-weighted ledger terms", "eps", {column_series(t, "eps", "eps_terms")}));
  }
  if (written.empty()) raise(ErrorCode::MissingInput, "no ledger, moments, snapshots or sweep report in '" + dir + "'", "plot");
  return written;
}

}  // namespace vpfp
