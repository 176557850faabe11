#include "vpfp/particles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "vpfp/error.hpp"
#include "vpfp/parallel.hpp"
#include "vpfp/poisson.hpp"

namespace vpfp {

void InteractionKernel::validate() const {
  if (!(softening > 0.0)) raise(ErrorCode::InvalidArgument, "kernel softening must be positive", "particles");
}

double softened_force(double dx, double a) { return dx / (2.0 * std::sqrt(dx * dx + a * a)); }

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t block_count(std::size_t n) { return (n + kParticleBlock - 1) / kParticleBlock; }

// Linear interpolation of cell-centred data at x.
double interpolate(const SpatialGrid& g, std::span<const double> data, double x, bool periodic) {
  const std::size_t n = g.size();
  if (data.empty()) return 0.0;
  if (n == 1) return data[0];
  const double h = g.h(0);
  double s = x / h - 0.5;
  if (periodic) {
    double i0 = std::floor(s);
    const double w = s - i0;
    const long ln = static_cast<long>(n);
    auto wrap = [ln](long k) { return static_cast<std::size_t>(((k % ln) + ln) % ln); };
    const long k = static_cast<long>(i0);
    return (1.0 - w) * data[wrap(k)] + w * data[wrap(k + 1)];
  }
  s = std::clamp(s, 0.0, static_cast<double>(n - 1));
  const std::size_t k = std::min(static_cast<std::size_t>(s), n - 2);
  const double w = s - static_cast<double>(k);
  return (1.0 - w) * data[k] + w * data[k + 1];
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
  return splitmix(splitmix(splitmix(seed) ^ stream) ^ (block * 0xd1b54a32d192ed03ULL));
}

ParticleEnsemble init_ensemble(const PhaseField& f0, std::size_t count, std::uint64_t seed, ParticleWalls walls) {
  if (f0.x.dim() != 1 || f0.v.dim() != 1) raise(ErrorCode::InvalidArgument, "particles support d = 1 only", "particles");
  if (count == 0) raise(ErrorCode::InvalidArgument, "ensemble size must be >= 1", "particles");
  std::vector<double> cdf(f0.values.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < cdf.size(); ++k) {
    if (f0.values[k] < 0.0 || !std::isfinite(f0.values[k])) {
      raise(ErrorCode::InvalidArgument, "f0 must be finite and nonnegative", "particles");
    }
    acc += f0.values[k];
    cdf[k] = acc;
  }
  if (!(acc > 0.0)) raise(ErrorCode::EmptyDistribution, "f0 has zero mass", "particles");

  ParticleEnsemble ens;
  ens.count = count;
  ens.dim = 1;
  ens.length = f0.x.extent(0);
  ens.mass = f0.mass();
  ens.walls = walls;
  ens.seed = seed;
  ens.X.resize(count);
  ens.V.resize(count);
  const std::size_t nv = f0.v.size();
  const double hx = f0.x.h(0), hv = f0.v.h();
  parallel_for(block_count(count), [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      std::mt19937_64 rng(stream_seed(seed, 0, b));
      std::uniform_real_distribution<double> uni(0.0, 1.0);
      const std::size_t end = std::min(count, (b + 1) * kParticleBlock);
      for (std::size_t i = b * kParticleBlock; i < end; ++i) {
        const double r = uni(rng) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
        std::size_t cell = static_cast<std::size_t>(it - cdf.begin());
        if (cell >= cdf.size()) cell = cdf.size() - 1;
        while (f0.values[cell] == 0.0 && cell > 0) --cell;  // r on a plateau edge
        const std::size_t ix = cell / nv, iv = cell % nv;
        ens.X[i] = (static_cast<double>(ix) + uni(rng)) * hx;
        ens.V[i] = -f0.v.vmax() + (static_cast<double>(iv) + uni(rng)) * hv;
      }
    }
  });
  return ens;
}

std::vector<double> particle_field_force(const ParticleEnsemble& ens, const ParticleFields& fields,
                                         const InteractionKernel& kernel) {
  const std::size_t m = ens.count;
  std::vector<double> force(m, 0.0);
  const bool periodic = ens.walls == ParticleWalls::Periodic;
  const auto& g = fields.grid;
  switch (kernel.mode) {
    case KernelMode::None: {
      if (fields.grad_phi_frozen.empty()) return force;
      for (std::size_t i = 0; i < m; ++i) force[i] = -interpolate(g, fields.grad_phi_frozen, ens.X[i], periodic);
      return force;
    }
    case KernelMode::Mesh: {
      std::vector<double> n(g.size(), 0.0);
      const double w = ens.weight() / g.cell_volume();
      for (std::size_t i = 0; i < m; ++i) {
        const auto cell = std::min(g.size() - 1, static_cast<std::size_t>(std::max(0.0, ens.X[i] / g.h(0))));
        n[cell] += w;
      }
      std::vector<double> c = fields.c;
      if (c.empty()) c.assign(g.size(), 0.0);
      const auto pot = solve_poisson(g, n, c);
      for (std::size_t i = 0; i < m; ++i) force[i] = -interpolate(g, pot.grad, ens.X[i], periodic);
      return force;
    }
    case KernelMode::DirectSum: {
      kernel.validate();
      if (!fields.c.empty()) {
        std::vector<double> zero(g.size(), 0.0);
        const auto pot = solve_poisson(g, zero, fields.c);
        for (std::size_t i = 0; i < m; ++i) force[i] = -interpolate(g, pot.grad, ens.X[i], periodic);
      }
      const double w = ens.weight();
      parallel_for(m, [&](std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) {
          double s = 0.0;
          for (std::size_t j = 0; j < m; ++j)
            if (j != i) s += softened_force(ens.X[i] - ens.X[j], kernel.softening);
          force[i] += w * s;
        }
      });
      return force;
    }
  }
  return force;
}

ParticleEnsemble em_step(const ParticleEnsemble& ens, const ParticleFields& fields, double dt,
                         const InteractionKernel& kernel, const EmOptions& opt) {
  if (!(dt > 0.0)) raise(ErrorCode::InvalidArgument, "em_step: dt must be positive", "particles");
  if (std::abs(fields.grid.extent(0) - ens.length) > 1e-12 * ens.length) {
    raise(ErrorCode::GridMismatch, "em_step: field grid does not cover the particle domain", "particles");
  }
  const bool periodic = ens.walls == ParticleWalls::Periodic;
  const auto force = particle_field_force(ens, fields, kernel);
  ParticleEnsemble out = ens;
  out.step = ens.step + 1;
  const double amp = std::sqrt(2.0 * dt);
  const double L = ens.length;
  const double sign = opt.friction_sign == FrictionSign::KineticConsistent ? 1.0 : -1.0;
  parallel_for(block_count(ens.count), [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      std::mt19937_64 rng(stream_seed(ens.seed, ens.step + 1, b));
      std::normal_distribution<double> normal(0.0, 1.0);
      const std::size_t end = std::min(ens.count, (b + 1) * kParticleBlock);
      for (std::size_t i = b * kParticleBlock; i < end; ++i) {
        const double x = ens.X[i], v = ens.V[i];
        double drift = force[i];
        if (opt.friction) drift += sign * (interpolate(fields.grid, fields.u, x, periodic) - v);
        double vn = v + dt * drift;
        if (opt.noise) vn += amp * normal(rng);
        double xn = x + dt * v;
        if (periodic) {
          xn = std::fmod(xn, L);
          if (xn < 0.0) xn += L;
        } else {
          // Specular reflection; a particle may cross at most one wall per step.
          if (xn < 0.0) {
            xn = -xn;
            vn = -vn;
          } else if (xn > L) {
            xn = 2.0 * L - xn;
            vn = -vn;
          }
          xn = std::clamp(xn, 0.0, L);
        }
        out.X[i] = xn;
        out.V[i] = vn;
      }
    }
  });
  for (std::size_t i = 0; i < out.count; ++i) {
    if (!std::isfinite(out.V[i]) || !std::isfinite(out.X[i])) {
      raise(ErrorCode::BlowUp, "particle " + std::to_string(i) + " has a non-finite state", "particles");
    }
  }
  return out;
}

PhaseField empirical_density(const ParticleEnsemble& ens, const SpatialGrid& xg, const VelocityGrid& vg) {
  PhaseField f(xg, vg);
  const double w = ens.weight() / f.phase_volume();
  const std::size_t nx = xg.size();
  const int nv = vg.cells_per_axis();
  for (std::size_t i = 0; i < ens.count; ++i) {
    const auto ix = std::min(nx - 1, static_cast<std::size_t>(std::max(0.0, ens.X[i] / xg.h(0))));
    const double s = (ens.V[i] + vg.vmax()) / vg.h();
    if (s < 0.0 || s >= nv) continue;
    f(ix, static_cast<std::size_t>(s)) += w;
  }
  return f;
}

ChaosMetric chaos_metric(const ParticleEnsemble& ens, const PhaseField& f_ref) {
  if (f_ref.x.dim() != ens.dim || std::abs(f_ref.x.extent(0) - ens.length) > 1e-12 * ens.length) {
    raise(ErrorCode::GridMismatch, "chaos_metric: ensemble and reference domains differ", "particles");
  }
  ChaosMetric cm;
  const auto fh = empirical_density(ens, f_ref.x, f_ref.v);
  for (std::size_t k = 0; k < fh.values.size(); ++k) cm.l1 += std::abs(fh.values[k] - f_ref.values[k]);
  cm.l1 *= f_ref.phase_volume();
  // Particles outside the velocity box still count as mass with no reference.
  double inside = 0.0;
  for (double v : fh.values) inside += v;
  cm.l1 += std::max(0.0, ens.mass - inside * f_ref.phase_volume());

  const auto& xg = f_ref.x;
  const std::size_t nx = xg.size();
  std::vector<double> n(nx, 0.0), j(nx, 0.0), e2(nx, 0.0);
  const double w = ens.weight() / xg.cell_volume();
  for (std::size_t i = 0; i < ens.count; ++i) {
    const auto ix = std::min(nx - 1, static_cast<std::size_t>(std::max(0.0, ens.X[i] / xg.h(0))));
    n[ix] += w;
    j[ix] += w * ens.V[i];
    e2[ix] += w * ens.V[i] * ens.V[i];
  }
  const auto mom = compute_moments(f_ref);
  for (std::size_t i = 0; i < nx; ++i) {
    cm.n_gap += std::abs(n[i] - mom.n[i]);
    cm.j_gap += std::abs(j[i] - mom.j[0][i]);
    cm.e2_gap += std::abs(e2[i] - mom.e2[i]);
  }
  cm.n_gap *= xg.cell_volume();
  cm.j_gap *= xg.cell_volume();
  cm.e2_gap *= xg.cell_volume();
  return cm;
}

}  // namespace vpfp
