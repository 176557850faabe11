#include "vpfp/weak_form.hpp"

#include <algorithm>
#include <cmath>

#include "vpfp/error.hpp"

namespace vpfp {

Factor bump(double center, double radius) {
  Factor b;
  b.f = [=](double y) {
    const double s = (y - center) / radius;
    return std::abs(s) >= 1.0 ? 0.0 : std::pow(1.0 - s * s, 4);
  };
  b.d1 = [=](double y) {
    const double s = (y - center) / radius;
    return std::abs(s) >= 1.0 ? 0.0 : -8.0 * s * std::pow(1.0 - s * s, 3) / radius;
  };
  b.d2 = [=](double y) {
    const double s = (y - center) / radius;
    if (std::abs(s) >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    return (-8.0 * q * q * q + 48.0 * s * s * q * q) / (radius * radius);
  };
  return b;
}

Factor time_taper(double T) {
  Factor a;
  a.f = [=](double t) { return std::pow(std::max(0.0, 1.0 - t / T), 3); };
  a.d1 = [=](double t) { return -3.0 / T * std::pow(std::max(0.0, 1.0 - t / T), 2); };
  a.d2 = [=](double t) { return 6.0 / (T * T) * std::max(0.0, 1.0 - t / T); };
  return a;
}

Factor wall_profile(double L, int side) {
  Factor w;
  if (side == 0) {
    w.f = [=](double x) { return (L - x) * (L - x) / (L * L); };
    w.d1 = [=](double x) { return -2.0 * (L - x) / (L * L); };
  } else {
    w.f = [=](double x) { return x * x / (L * L); };
    w.d1 = [=](double x) { return 2.0 * x / (L * L); };
  }
  w.d2 = [=](double) { return 2.0 / (L * L); };
  return w;
}

Factor constant_factor(double value) {
  return {[=](double) { return value; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

double WeakFormReport::item_residual(int item) const {
  double m = 0.0;
  for (const auto& e : entries)
    if (e.item == item) m = std::max(m, std::abs(e.residual));
  return m;
}

std::vector<TestFunction> default_testset(const CoupledProblem& pb, double T) {
  const double L = pb.x.extent(0);
  const double V = pb.v.vmax();
  std::vector<TestFunction> set;
  set.push_back({1, "kinetic_bump", time_taper(T), bump(0.5 * L, 0.35 * L), bump(0.0, 0.6 * V)});
  set.push_back({1, "kinetic_shifted", time_taper(T), bump(0.4 * L, 0.3 * L), bump(0.3 * V, 0.5 * V)});
  if (!pb.periodic) {
    // Nonzero only where v . nu < 0 on the left wall.
    set.push_back({1, "kinetic_inflow", time_taper(T), wall_profile(L, 0), bump(0.5 * V, 0.45 * V)});
  }
  set.push_back({2, "poisson_bump", time_taper(T), bump(0.5 * L, 0.35 * L), constant_factor()});
  set.push_back({2, "poisson_shifted", time_taper(T), bump(0.4 * L, 0.3 * L), constant_factor()});
  set.push_back({3, "continuity_bump", time_taper(T), bump(0.5 * L, 0.35 * L), constant_factor()});
  if (!pb.periodic) {
    for (int side = 0; side < 2; ++side)
      if (pb.fluid_bc.inflow(side))
        set.push_back({3, side == 0 ? "continuity_inflow_left" : "continuity_inflow_right", time_taper(T),
                       wall_profile(L, side), constant_factor()});
  }
  set.push_back({4, "momentum_bump", time_taper(T), bump(0.5 * L, 0.35 * L), constant_factor()});
  set.push_back({4, "momentum_shifted", time_taper(T), bump(0.4 * L, 0.3 * L), constant_factor()});
  return set;
}

void check_test_function(const CoupledProblem& pb, const TestFunction& tf, double T) {
  const double L = pb.x.extent(0);
  const double tol = 1e-12;
  auto fail = [&](const std::string& why) {
    raise(ErrorCode::InvalidTestFunction, "test function '" + tf.name + "': " + why, "weak_form");
  };
  if (tf.item < 1 || tf.item > 4) fail("item must be 1..4");
  if (std::abs(tf.time.f(T)) > tol) fail("does not vanish at the final time");
  if (pb.periodic) return;
  const double b0 = tf.space.f(0.0), bl = tf.space.f(L);
  switch (tf.item) {
    case 1: {
      // phi = 0 on Sigma^+: v < 0 at x = 0, v > 0 at x = L.
      const int samples = 400;
      for (int k = 0; k <= samples; ++k) {
        const double v = pb.v.vmax() * k / samples;
        if (k > 0 && std::abs(b0 * tf.velocity.f(-v)) > tol) fail("nonzero on Sigma^+ at the left wall");
        if (k > 0 && std::abs(bl * tf.velocity.f(v)) > tol) fail("nonzero on Sigma^+ at the right wall");
      }
      break;
    }
    case 3:
      if (!pb.fluid_bc.inflow(0) && std::abs(b0) > tol) fail("support reaches the left wall outside Gamma_in");
      if (!pb.fluid_bc.inflow(1) && std::abs(bl) > tol) fail("support reaches the right wall outside Gamma_in");
      break;
    default:
      if (std::abs(b0) > tol || std::abs(bl) > tol) fail("must vanish on the boundary");
  }
}

namespace {

struct Contribution {
  double value = 0.0;
  double scale = 0.0;
  void add(double x) {
    value += x;
    scale += std::abs(x);
  }
};

// Per-snapshot integrand of each item (space/velocity integral at time t).
double kinetic_integrand(const CoupledProblem& pb, const CoupledState& s, const TestFunction& tf, double& scale) {
  const auto& f = s.f;
  const double t = s.t;
  const double a = tf.time.f(t), da = tf.time.d1(t);
  const double vol = f.phase_volume();
  double sum = 0.0;
  for (std::size_t ix = 0; ix < f.x.size(); ++ix) {
    const double x = f.x.center(0, static_cast<int>(ix));
    const double b = tf.space.f(x), db = tf.space.d1(x);
    const double ux = s.fluid.u.empty() ? 0.0 : s.fluid.u[ix];
    const double gp = s.phi.grad.empty() ? 0.0 : s.phi.grad[ix];
    if (b == 0.0 && db == 0.0) continue;
    for (std::size_t iv = 0; iv < f.v.size(); ++iv) {
      const double v = f.v.center(static_cast<int>(iv));
      const double c = tf.velocity.f(v), dc = tf.velocity.d1(v), ddc = tf.velocity.d2(v);
      const double term = f(ix, iv) * (da * b * c + a * v * db * c + a * (ux - v - gp) * b * dc + a * b * ddc) * vol;
      sum += term;
      scale += std::abs(term);
    }
  }
  (void)pb;
  return sum;
}

double kinetic_boundary_integrand(const CoupledProblem& pb, double t, const TestFunction& tf) {
  if (pb.g.empty()) return 0.0;
  const auto& faces = pb.x.boundary_faces();
  const double a = tf.time.f(t) * inflow_scale(pb, t);
  double s = 0.0;
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    const auto& face = faces[fi];
    const double b = tf.space.f(face.center[0]);
    for (std::size_t iv = 0; iv < pb.v.size(); ++iv) {
      const double v = pb.v.center(static_cast<int>(iv));
      const double vn = v * face.normal[0];
      if (vn >= 0.0) continue;
      s += vn * pb.g.value(fi, iv) * a * b * tf.velocity.f(v) * pb.v.cell_volume() * face.area;
    }
  }
  return s;
}

double poisson_integrand(const CoupledProblem& pb, const CoupledState& s, const TestFunction& tf, double& scale) {
  const auto mom = compute_moments(s.f);
  const double a = tf.time.f(s.t);
  const double h = pb.x.h(0);
  double sum = 0.0;
  for (std::size_t i = 0; i < pb.x.size(); ++i) {
    const double x = pb.x.center(0, static_cast<int>(i));
    const double c = pb.c.c.empty() ? 0.0 : pb.c.c[i];
    const double gp = s.phi.grad.empty() ? 0.0 : s.phi.grad[i];
    const double t1 = gp * a * tf.space.d1(x) * h;
    const double t2 = -(mom.n[i] - c) * a * tf.space.f(x) * h;
    sum += t1 + t2;
    scale += std::abs(t1) + std::abs(t2);
  }
  return sum;
}

double continuity_integrand(const CoupledProblem& pb, const CoupledState& s, const TestFunction& tf, double& scale) {
  const double a = tf.time.f(s.t), da = tf.time.d1(s.t);
  const double h = pb.x.h(0);
  double sum = 0.0;
  for (std::size_t i = 0; i < pb.x.size(); ++i) {
    const double x = pb.x.center(0, static_cast<int>(i));
    const double r = s.fluid.rho[i];
    const double t1 = r * da * tf.space.f(x) * h;
    const double t2 = r * s.fluid.u[i] * a * tf.space.d1(x) * h;
    sum += t1 + t2;
    scale += std::abs(t1) + std::abs(t2);
  }
  if (!pb.periodic) {
    const double L = pb.x.extent(0);
    for (int side = 0; side < 2; ++side) {
      if (!pb.fluid_bc.inflow(side)) continue;
      const double xw = side == 0 ? 0.0 : L;
      const double t3 = -pb.fluid_bc.rho_wall[side] * pb.fluid_bc.normal_velocity(side) * a * tf.space.f(xw);
      sum += t3;
      scale += std::abs(t3);
    }
  }
  return sum;
}

double momentum_integrand(const CoupledProblem& pb, const CoupledState& s, const TestFunction& tf, double& scale) {
  const auto& p = pb.params;
  const auto mom = compute_moments(s.f);
  const double a = tf.time.f(s.t), da = tf.time.d1(s.t);
  const double h = pb.x.h(0);
  const std::size_t n = pb.x.size();
  const auto& u = s.fluid.u;
  const auto& bc = pb.fluid_bc;
  const double glo = bc.periodic ? u[n - 1] : 2.0 * bc.u_wall[0] - u[0];
  const double ghi = bc.periodic ? u[0] : 2.0 * bc.u_wall[1] - u[n - 1];
  const double kappa = p.longitudinal_viscosity();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pb.x.center(0, static_cast<int>(i));
    const double b = tf.space.f(x), db = tf.space.d1(x);
    const double r = s.fluid.rho[i];
    const double ul = i == 0 ? glo : u[i - 1];
    const double ur = i + 1 == n ? ghi : u[i + 1];
    const double ux = (ur - ul) / (2.0 * h);
    const double j = mom.j.empty() ? 0.0 : mom.j[0][i];
    const double terms[5] = {r * u[i] * da * b, r * u[i] * u[i] * a * db, std::pow(r, p.gamma) * a * db,
                             -kappa * ux * a * db, (j - mom.n[i] * u[i]) * a * b};
    for (double t : terms) {
      sum += t * h;
      scale += std::abs(t * h);
    }
  }
  return sum;
}

}  // namespace

namespace {

double integrand_of(const CoupledProblem& pb, const CoupledState& s, const TestFunction& tf, double& sc) {
  switch (tf.item) {
    case 1: {
      const double b = kinetic_boundary_integrand(pb, s.t, tf);
      sc += std::abs(b);
      return kinetic_integrand(pb, s, tf, sc) - b;
    }
    case 2: return poisson_integrand(pb, s, tf, sc);
    case 3: return continuity_integrand(pb, s, tf, sc);
    default: return momentum_integrand(pb, s, tf, sc);
  }
}

double initial_term(const CoupledProblem& pb, const CoupledState& s0, const TestFunction& tf) {
  const double a0 = tf.time.f(s0.t);
  double init = 0.0;
  if (tf.item == 1) {
    const auto& f = s0.f;
    for (std::size_t ix = 0; ix < f.x.size(); ++ix) {
      const double b = tf.space.f(f.x.center(0, static_cast<int>(ix)));
      for (std::size_t iv = 0; iv < f.v.size(); ++iv)
        init += f(ix, iv) * a0 * b * tf.velocity.f(f.v.center(static_cast<int>(iv))) * f.phase_volume();
    }
  } else if (tf.item == 3 || tf.item == 4) {
    for (std::size_t i = 0; i < pb.x.size(); ++i) {
      const double b = tf.space.f(pb.x.center(0, static_cast<int>(i)));
      const double m = tf.item == 3 ? s0.fluid.rho[i] : s0.fluid.rho[i] * s0.fluid.u[i];
      init += m * a0 * b * pb.x.h(0);
    }
  }
  return init;
}

}  // namespace

WeakFormBuilder::WeakFormBuilder(const CoupledProblem& pb, std::vector<TestFunction> testset, double horizon)
    : problem_(&pb), tests_(std::move(testset)) {
  if (pb.x.dim() != 1) raise(ErrorCode::InvalidArgument, "weak form residuals support d = 1 only", "weak_form");
  for (const auto& tf : tests_) check_test_function(pb, tf, horizon);
  value_.assign(tests_.size(), 0.0);
  scale_.assign(tests_.size(), 0.0);
  last_integrand_.assign(tests_.size(), 0.0);
  last_scale_.assign(tests_.size(), 0.0);
}

void WeakFormBuilder::push(const Snapshot& snap) {
  const auto& pb = *problem_;
  const auto& s = snap.state;
  const double dt = s.t - t_prev_;
  for (std::size_t k = 0; k < tests_.size(); ++k) {
    double sc = 0.0;
    const double val = integrand_of(pb, s, tests_[k], sc);
    if (count_ == 0) {
      const double init = initial_term(pb, s, tests_[k]);
      value_[k] += init;
      scale_[k] += std::abs(init);
    } else {
      value_[k] += 0.5 * dt * (val + last_integrand_[k]);
      scale_[k] += 0.5 * dt * (sc + last_scale_[k]);
    }
    last_integrand_[k] = val;
    last_scale_[k] = sc;
  }
  t_prev_ = s.t;
  ++count_;
}

WeakFormReport WeakFormBuilder::report() const {
  WeakFormReport rep;
  for (std::size_t k = 0; k < tests_.size(); ++k)
    rep.entries.push_back({tests_[k].item, tests_[k].name, value_[k], scale_[k]});
  return rep;
}

WeakFormReport weak_form_residual(const CoupledProblem& pb, const History& history,
                                  const std::vector<TestFunction>& testset) {
  if (history.size() < 2) raise(ErrorCode::InsufficientHistory, "weak form needs at least 2 snapshots", "weak_form");
  WeakFormBuilder b(pb, testset, history.back().state.t);
  for (const auto& snap : history) b.push(snap);
  return b.report();
}

}  // namespace vpfp
