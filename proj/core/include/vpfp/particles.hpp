#pragma once

#include <cstdint>
#include <vector>

#include "vpfp/kinetic.hpp"

namespace vpfp {

enum class FrictionSign {
  KineticConsistent,  // drift u(X) - V, matching div_v((u - v) f)
  Reversed,       // drift -u(X) + V as printed in the SDE
};

enum class KernelMode {
  DirectSum,  // softened pairwise sum plus the background from a grid solve
  Mesh,       // deposit, grid Poisson solve, interpolate
  None,       // frozen field supplied by the caller
};

enum class ParticleWalls { Reflecting, Periodic };

struct InteractionKernel {
  KernelMode mode = KernelMode::None;
  double softening = 0.05;
  void validate() const;
};

// Softened force of the 1D kernel U(x) = -|x| / 2: x / (2 sqrt(x^2 + a^2)).
double softened_force(double dx, double a);

inline constexpr std::size_t kParticleBlock = 1024;

struct ParticleEnsemble {
  std::size_t count = 0;
  int dim = 1;
  double length = 1.0;  // domain [0, length]
  double mass = 0.0;    // total mass; each particle carries mass / count
  ParticleWalls walls = ParticleWalls::Reflecting;
  std::uint64_t seed = 0;
  std::uint64_t step = 0;  // number of em_step calls so far
  std::vector<double> X;   // dim values per particle
  std::vector<double> V;

  double weight() const { return count ? mass / static_cast<double>(count) : 0.0; }
};

// Independent stream for (seed, stream, block).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t block);

// Inverse-CDF sampling on the cell histogram of f0 with uniform jitter.
ParticleEnsemble init_ensemble(const PhaseField& f0, std::size_t count, std::uint64_t seed,
                               ParticleWalls walls = ParticleWalls::Reflecting);

struct ParticleFields {
  SpatialGrid grid;
  std::vector<double> u;                // fluid velocity per cell
  std::vector<double> c;                // background charge (DirectSum, Mesh)
  std::vector<double> grad_phi_frozen;  // used when mode == None (empty means 0)
};

struct EmOptions {
  FrictionSign friction_sign = FrictionSign::KineticConsistent;
  bool friction = true;
  bool noise = true;
};

// Field force -d_x Phi at every particle for the configured kernel.
std::vector<double> particle_field_force(const ParticleEnsemble& ens, const ParticleFields& fields,
                                         const InteractionKernel& kernel);

// Euler-Maruyama step: X += V dt, V += (friction + force) dt + sqrt(2 dt) xi.
ParticleEnsemble em_step(const ParticleEnsemble& ens, const ParticleFields& fields, double dt,
                         const InteractionKernel& kernel, const EmOptions& options = {});

// Phase-space histogram normalized to the ensemble mass.
PhaseField empirical_density(const ParticleEnsemble& ens, const SpatialGrid& xg, const VelocityGrid& vg);

struct ChaosMetric {
  double l1 = 0.0;      // int |f_hat - f_ref|
  double n_gap = 0.0;   // |n_hat - n|_1
  double j_gap = 0.0;   // |j_hat - j|_1
  double e2_gap = 0.0;  // |e2_hat - e2|_1
};
// Moments of the ensemble are binned in x only; l1 uses empirical_density.
ChaosMetric chaos_metric(const ParticleEnsemble& ens, const PhaseField& f_ref);

}  // namespace vpfp
