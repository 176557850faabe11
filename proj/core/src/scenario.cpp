#include "vpfp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vpfp/error.hpp"
#include "vpfp/io.hpp"

namespace vpfp {

std::string Scenario::config_hash() const { return vpfp::config_hash(config.text(), seed); }

namespace {

double maxwellian(double v, double n, double drift, double temp) {
  return n / std::sqrt(2.0 * std::numbers::pi * temp) * std::exp(-(v - drift) * (v - drift) / (2.0 * temp));
}

void one_of(const Config& c, const char* sec, const char* key, const std::string& v,
            std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  raise(ErrorCode::ParseError,
        c.source() + ":" + std::to_string(c.entry(sec, key).line) + ": key '" + key + "' must be one of " + list +
            ", got '" + v + "'",
        "config");
}

std::string resolve(const Config& c, const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  return c.directory() + "/" + path;
}

}  // namespace

Scenario parse_scenario(const Config& c) {
  Scenario s;
  s.config = c;
  s.name = c.get_string("run", "name", "scenario");
  s.seed = static_cast<std::uint64_t>(c.get_int("run", "seed", 0));

  if (c.get_int("grid", "dim", 1) != 1) {
    raise(ErrorCode::ParseError, c.source() + ":" + std::to_string(c.entry("grid", "dim").line) +
                                     ": key 'dim': the grid solvers support dim = 1 only",
          "config");
  }
  s.length = c.get_double("grid", "length", s.length);
  s.nx = static_cast<int>(c.get_int("grid", "nx", s.nx));
  s.vmax = c.get_double("grid", "vmax", s.vmax);
  s.nv = static_cast<int>(c.get_int("grid", "nv", s.nv));
  s.periodic = c.get_bool("grid", "periodic", s.periodic);
  if (!(s.length > 0) || s.nx < 1 || !(s.vmax > 0) || s.nv < 2) {
    raise(ErrorCode::ParseError, c.source() + ": [grid] needs length > 0, nx >= 1, vmax > 0, nv >= 2", "config");
  }

  s.t_end = c.get_double("time", "t_end", s.t_end);
  s.dt = c.get_double("time", "dt", s.dt);
  s.cfl = c.get_double("time", "cfl", s.cfl);
  s.output_every = static_cast<int>(c.get_int("time", "output_every", s.output_every));
  s.snapshot_every = static_cast<int>(c.get_int("time", "snapshot_every", s.snapshot_every));
  if (!(s.t_end > 0) || s.dt < 0 || !(s.cfl > 0) || s.output_every < 1 || s.snapshot_every < 0) {
    raise(ErrorCode::ParseError, c.source() + ": [time] needs t_end > 0, dt >= 0, cfl > 0, output_every >= 1",
          "config");
  }

  auto& p = s.params;
  p.gamma = c.get_double("params", "gamma", p.gamma);
  p.mu1 = c.get_double("params", "mu1", p.mu1);
  p.mu2 = c.get_double("params", "mu2", p.mu2);
  p.eps = c.get_double("params", "eps", p.eps);
  p.delta = c.get_double("params", "delta", p.delta);
  p.beta = c.get_double("params", "beta", p.beta);
  s.m = static_cast<int>(c.get_int("params", "m", s.m));
  s.kappa0 = static_cast<int>(c.get_int("params", "kappa0", s.kappa0));
  if (p.eps < 0 || p.delta < 0 || s.m < 1) {
    raise(ErrorCode::ParseError, c.source() + ": [params] needs eps >= 0, delta >= 0, m >= 1", "config");
  }

  s.kinetic = c.get_string("initial", "kinetic", s.kinetic);
  if (c.has("initial", "kinetic"))
    one_of(c, "initial", "kinetic", s.kinetic, {"none", "maxwellian", "shifted_maxwellian", "two_beam", "file"});
  s.kinetic_density = c.get_double("initial", "kinetic_density", s.kinetic_density);
  s.temperature = c.get_double("initial", "temperature", s.temperature);
  s.drift = c.get_double("initial", "drift", s.drift);
  s.beam_speed = c.get_double("initial", "beam_speed", s.beam_speed);
  s.density_perturbation = c.get_double("initial", "density_perturbation", s.density_perturbation);
  s.perturbation_mode = static_cast<int>(c.get_int("initial", "perturbation_mode", s.perturbation_mode));
  s.kinetic_file = resolve(c, c.get_string("initial", "kinetic_file", ""));
  s.fluid = c.get_string("initial", "fluid", s.fluid);
  if (c.has("initial", "fluid")) one_of(c, "initial", "fluid", s.fluid, {"uniform", "shear", "file"});
  s.rho0 = c.get_double("initial", "rho0", s.rho0);
  s.u0 = c.get_double("initial", "u0", s.u0);
  s.shear_amplitude = c.get_double("initial", "shear_amplitude", s.shear_amplitude);
  s.shear_mode = static_cast<int>(c.get_int("initial", "shear_mode", s.shear_mode));
  s.rho_perturbation = c.get_double("initial", "rho_perturbation", s.rho_perturbation);
  s.fluid_file = resolve(c, c.get_string("initial", "fluid_file", ""));
  if (!(s.temperature > 0)) raise(ErrorCode::ParseError, c.source() + ": [initial] temperature must be > 0", "config");

  s.u_left = c.get_double("boundary", "u_left", s.u_left);
  s.u_right = c.get_double("boundary", "u_right", s.u_right);
  s.rho_left = c.get_double("boundary", "rho_left", s.rho_left);
  s.rho_right = c.get_double("boundary", "rho_right", s.rho_right);
  s.extension_layer = c.get_double("boundary", "extension_layer", s.extension_layer);
  const std::string ramp = c.get_string("boundary", "ramp", "smooth");
  if (c.has("boundary", "ramp")) one_of(c, "boundary", "ramp", ramp, {"smooth", "linear"});
  s.ramp = ramp == "linear" ? Ramp::Linear : Ramp::Smooth;
  s.inflow = c.get_string("boundary", "inflow", s.inflow);
  if (c.has("boundary", "inflow")) one_of(c, "boundary", "inflow", s.inflow, {"none", "maxwellian"});
  s.inflow_sides = c.get_string("boundary", "inflow_sides", s.inflow_sides);
  if (c.has("boundary", "inflow_sides")) one_of(c, "boundary", "inflow_sides", s.inflow_sides, {"left", "right", "both"});
  s.inflow_temperature = c.get_double("boundary", "inflow_temperature", s.inflow_temperature);
  s.inflow_drift = c.get_double("boundary", "inflow_drift", s.inflow_drift);
  if (c.has("boundary", "inflow_density")) {
    const auto& e = c.entry("boundary", "inflow_density");
    try {
      s.inflow_density = TimeProfile::parse(e.value, c.directory());
    } catch (const Error& err) {
      raise(err.code(), c.source() + ":" + std::to_string(e.line) + ": key 'inflow_density': " + err.detail(), "config");
    }
  }

  s.field = c.get_bool("field", "enabled", s.field);
  s.background = c.get_string("field", "background", s.background);
  if (c.has("field", "background")) one_of(c, "field", "background", s.background, {"none", "uniform", "neutral", "sine"});
  s.background_level = c.get_double("field", "level", s.background_level);

  s.fluid_frozen = c.get_bool("model", "fluid_frozen", s.fluid_frozen);
  s.velocity_frozen = c.get_bool("model", "velocity_frozen", s.velocity_frozen);

  auto& fp = s.fixed_point;
  fp.cutoff = c.get_double("fixed_point", "cutoff", fp.cutoff);
  fp.theta = c.get_double("fixed_point", "theta", fp.theta);
  fp.tolerance = c.get_double("fixed_point", "tolerance", fp.tolerance);
  fp.max_iterations = static_cast<int>(c.get_int("fixed_point", "max_iterations", fp.max_iterations));
  try {
    fp.validate();
  } catch (const Error& e) {
    raise(ErrorCode::ParseError, c.source() + ": [fixed_point] " + e.detail(), "config");
  }

  s.ledger = c.get_string("diagnostics", "ledger", s.ledger);
  if (c.has("diagnostics", "ledger")) one_of(c, "diagnostics", "ledger", s.ledger, {"auto", "base", "eps_delta"});
  s.weak_form = c.get_bool("diagnostics", "weak_form", s.weak_form);
  s.refinement = c.get_bool("diagnostics", "refinement", s.refinement);
  s.margin_constant = c.get_double("diagnostics", "margin_constant", s.margin_constant);

  s.particles = static_cast<std::size_t>(std::max<long>(0, c.get_int("particles", "count", 0)));
  s.particle_dt = c.get_double("particles", "dt", s.particle_dt);
  const std::string kernel = c.get_string("particles", "kernel", "none");
  if (c.has("particles", "kernel")) one_of(c, "particles", "kernel", kernel, {"none", "mesh", "direct"});
  s.kernel = kernel == "mesh" ? KernelMode::Mesh : kernel == "direct" ? KernelMode::DirectSum : KernelMode::None;
  s.softening = c.get_double("particles", "softening", s.softening);
  const std::string sign = c.get_string("particles", "friction_sign", "kinetic");
  if (c.has("particles", "friction_sign")) one_of(c, "particles", "friction_sign", sign, {"kinetic", "reversed"});
  s.friction_sign = sign == "reversed" ? FrictionSign::Reversed : FrictionSign::KineticConsistent;

  if (c.has("sweep", "schedule")) {
    const auto& e = c.entry("sweep", "schedule");
    for (const auto& item : split(e.value, ',')) {
      const auto parts = split(item, ':');
      ContinuationPoint pt{};
      try {
        if (parts.size() != 3) throw std::invalid_argument("arity");
        pt = {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
      } catch (const std::exception&) {
        raise(ErrorCode::ParseError,
              c.source() + ":" + std::to_string(e.line) + ": key 'schedule' expects N:eps:delta items, got '" + item +
                  "'",
              "config");
      }
      s.schedule.push_back(pt);
    }
  }
  c.reject_unused();
  return s;
}

Scenario load_scenario(const std::string& path) { return parse_scenario(Config::load(path)); }

// ---------------------------------------------------------------- data

PhaseField initial_kinetic(const Scenario& s, const SpatialGrid& xg, const VelocityGrid& vg) {
  if (s.kinetic == "file") {
    if (s.kinetic_file.empty()) raise(ErrorCode::ParseError, "kinetic = file needs kinetic_file", "config");
    auto f = phase_field_from(read_snapshot_file(s.kinetic_file));
    if (!(f.x == xg) || !(f.v == vg)) raise(ErrorCode::GridMismatch, "kinetic_file grid differs from [grid]", "config");
    f.t = 0.0;
    return f;
  }
  const double L = s.length;
  auto shape = [&](double x) {
    return 1.0 + s.density_perturbation * std::cos(2.0 * std::numbers::pi * s.perturbation_mode * x / L);
  };
  return PhaseField::sample(xg, vg, [&](const std::array<double, 3>& x, const std::array<double, 3>& v) {
    const double n = s.kinetic_density * shape(x[0]);
    if (s.kinetic == "maxwellian") return maxwellian(v[0], n, 0.0, s.temperature);
    if (s.kinetic == "shifted_maxwellian") return maxwellian(v[0], n, s.drift, s.temperature);
    if (s.kinetic == "two_beam") {
      return 0.5 * (maxwellian(v[0], n, s.beam_speed, s.temperature) + maxwellian(v[0], n, -s.beam_speed, s.temperature));
    }
    return 0.0;
  });
}

FluidState initial_fluid(const Scenario& s, const SpatialGrid& xg) {
  FluidState st;
  const std::size_t n = xg.size();
  if (s.fluid == "file") {
    if (s.fluid_file.empty()) raise(ErrorCode::ParseError, "fluid = file needs fluid_file", "config");
    const auto snap = read_snapshot_file(s.fluid_file);
    st.rho = snap.field("rho");
    st.u = snap.field("u");
    if (st.rho.size() != n || st.u.size() != n) raise(ErrorCode::GridMismatch, "fluid_file grid differs from [grid]", "config");
    return st;
  }
  st.rho.resize(n);
  st.u.resize(n);
  const double L = s.length;
  // With walls the velocity starts from the extension of u_B, so the data is
  // compatible with the boundary condition; the shear mode vanishes on the walls.
  std::vector<double> base(n, s.u0);
  double k = 2.0 * std::numbers::pi * s.shear_mode / L;
  if (!s.periodic) {
    if (s.u0 != 0.0) {
      raise(ErrorCode::ParseError,
            s.config.source() + ": [initial] u0 applies to periodic grids; wall runs start from the extension of "
                                "u_left/u_right",
            "config");
    }
    base = make_fluid_boundary(xg, s.u_left, s.u_right, s.rho_left, s.rho_right, s.extension_layer, s.ramp).u_inf;
    k = std::numbers::pi * s.shear_mode / L;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double x = xg.center(0, static_cast<int>(i));
    st.rho[i] = s.rho0 * (1.0 + s.rho_perturbation * std::cos(2.0 * std::numbers::pi * x / L));
    st.u[i] = base[i];
    if (s.fluid == "shear") st.u[i] += s.shear_amplitude * std::sin(k * x);
  }
  return st;
}

namespace {

InflowData inflow_shape(const Scenario& s, const SpatialGrid& xg, const VelocityGrid& vg) {
  if (s.inflow == "none" || s.periodic) return InflowData::zero(xg, vg);
  return InflowData::from_function(xg, vg, [&](const BoundaryFace& face, const std::array<double, 3>& v) {
    if (s.inflow_sides == "left" && face.side != 0) return 0.0;
    if (s.inflow_sides == "right" && face.side != 1) return 0.0;
    return maxwellian(v[0], 1.0, s.inflow_drift * (face.side == 0 ? 1.0 : -1.0), s.inflow_temperature);
  });
}

}  // namespace

CoupledProblem build_problem(const Scenario& s) {
  CoupledProblem pb;
  pb.x = SpatialGrid::line(s.length, s.nx);
  pb.v = VelocityGrid(1, s.vmax, s.nv);
  pb.params = s.params;
  pb.m = s.m;
  pb.periodic = s.periodic;
  pb.field = s.field;
  pb.fluid_frozen = s.fluid_frozen;
  pb.velocity_frozen = s.velocity_frozen;
  pb.fluid_bc = s.periodic ? make_periodic_boundary(pb.x)
                           : make_fluid_boundary(pb.x, s.u_left, s.u_right, s.rho_left, s.rho_right,
                                                 s.extension_layer, s.ramp);
  pb.g = inflow_shape(s, pb.x, pb.v);
  if (s.inflow != "none" && !s.periodic) {
    const TimeProfile prof = s.inflow_density;
    pb.g_scale = [prof](double t) { return prof(t); };
  }
  pb.c.c.assign(pb.x.size(), 0.0);
  if (s.background == "uniform") {
    std::fill(pb.c.c.begin(), pb.c.c.end(), s.background_level);
  } else if (s.background == "neutral") {
    const auto f0 = initial_kinetic(s, pb.x, pb.v);
    const double mean = f0.mass() / pb.x.total_volume();
    std::fill(pb.c.c.begin(), pb.c.c.end(), mean);
  } else if (s.background == "sine") {
    for (std::size_t i = 0; i < pb.x.size(); ++i)
      pb.c.c[i] = s.background_level * std::sin(std::numbers::pi * pb.x.center(0, static_cast<int>(i)) / s.length);
  }
  return pb;
}

CoupledState initial_state(const Scenario& s, const CoupledProblem& pb) {
  auto f0 = initial_kinetic(s, pb.x, pb.v);
  PhaseField f = f0;
  if (f0.mass() > 0.0) f = prepare_initial_data(f0, s.kappa0).f;
  return make_state(pb, std::move(f), initial_fluid(s, pb.x), 0.0);
}

double scenario_dt(const Scenario& s, const CoupledProblem& pb, const CoupledState& state) {
  if (s.dt > 0.0) return s.dt;
  double dt = s.cfl * coupled_cfl_limit(pb, state);
  // Land exactly on t_end.
  const double steps = std::ceil(s.t_end / dt - 1e-9);
  return s.t_end / steps;
}

Scenario refined(const Scenario& s) {
  Scenario r = s;
  r.nx *= 2;
  r.nv *= 2;
  if (r.dt > 0.0) r.dt *= 0.5;
  r.refinement = false;
  return r;
}

Scenario with_point(const Scenario& s, const ContinuationPoint& p) {
  Scenario r = s;
  r.fixed_point.cutoff = p.cutoff;
  r.params.eps = p.eps;
  r.params.delta = p.delta;
  r.schedule.clear();
  return r;
}

// ---------------------------------------------------------------- validation

bool ValidationReport::ok() const {
  return std::all_of(items.begin(), items.end(), [](const ValidationItem& i) { return i.pass; });
}

std::string ValidationReport::text() const {
  std::ostringstream os;
  for (const auto& i : items) os << (i.pass ? "pass " : "FAIL ") << i.hypothesis << "  (" << i.detail << ")\n";
  return os.str();
}

ValidationReport validate_scenario(const Scenario& s) {
  ValidationReport rep;
  auto add = [&](const std::string& h, bool pass, const std::string& detail) { rep.items.push_back({h, pass, detail}); };
  auto str = [](double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  };
  const auto& p = s.params;
  add("γ > 3/2", p.gamma > 1.5, "gamma = " + str(p.gamma));
  add("μ1 > 0", p.mu1 > 0.0, "mu1 = " + str(p.mu1));
  add("2μ1 + 3μ2 ≥ 0", 2.0 * p.mu1 + 3.0 * p.mu2 >= 0.0, "2 mu1 + 3 mu2 = " + str(2.0 * p.mu1 + 3.0 * p.mu2));
  add("β > max(γ, 9/2)", p.beta > std::max(p.gamma, 4.5),
      "beta = " + str(p.beta) + ", max(gamma, 9/2) = " + str(std::max(p.gamma, 4.5)));
  add("κ0 ≥ 5", s.kappa0 >= 5, "kappa0 = " + std::to_string(s.kappa0));

  const auto xg = SpatialGrid::line(s.length, s.nx);
  const VelocityGrid vg(1, s.vmax, s.nv);
  const auto f0 = initial_kinetic(s, xg, vg);
  const auto fl = initial_fluid(s, xg);
  double fmin = 0.0;
  for (double v : f0.values) fmin = std::min(fmin, v);
  add("f0 ≥ 0", fmin >= 0.0, "min f0 = " + str(fmin));

  bool rho_in_ok = true;
  double rho_in = std::numeric_limits<double>::infinity();
  if (!s.periodic) {
    if (-s.u_left < 0.0) rho_in = std::min(rho_in, s.rho_left);
    if (s.u_right < 0.0) rho_in = std::min(rho_in, s.rho_right);
    rho_in_ok = !(rho_in <= 0.0);
  }
  add("ρ̲_B > 0", rho_in_ok, std::isinf(rho_in) ? "Gamma_in empty" : "min over Gamma_in rho_B = " + str(rho_in));

  const bool inflow_active = s.inflow != "none" && !s.periodic;
  const double gmin = inflow_active ? s.inflow_density.inf() : 0.0;
  add("g ≥ 0", gmin >= 0.0, "min inflow density = " + str(gmin));

  double mass0 = 0.0;
  for (double r : fl.rho) mass0 += r * xg.h(0);
  add("∫ρ0 dx > 0", mass0 > 0.0, "int rho0 = " + str(mass0));

  // Finite energy of the initial and boundary data.
  double energy = 0.0;
  bool finite = true;
  const double h = xg.h(0);
  for (std::size_t i = 0; i < fl.rho.size(); ++i) {
    const double r = fl.rho[i];
    if (r < 0.0) {
      finite = false;
      break;
    }
    energy += (0.5 * r * fl.u[i] * fl.u[i] + std::pow(r, p.gamma) / (p.gamma - 1.0)) * h;
  }
  energy += 0.5 * velocity_moment(f0, 2.0);
  double gflux = 0.0;
  if (inflow_active) {
    const auto g = inflow_shape(s, xg, vg);
    gflux = g.lp_rate(xg, vg, 1.0) * s.inflow_density.sup() * s.t_end;
  }
  finite = finite && std::isfinite(energy) && std::isfinite(gflux) && std::isfinite(f0.mass()) && p.gamma > 1.0;
  add("finite energy", finite, "E0 = " + str(energy));
  return rep;
}

}  // namespace vpfp
