#pragma once

#include <span>
#include <vector>

#include "vpfp/grid.hpp"

namespace vpfp {

// Electric potential with Phi = 0 on the boundary and its cell-centred
// gradient (d components per cell, interleaved).
struct Potential {
  std::vector<double> phi;
  std::vector<double> grad;
};

// Charge background c(x); either sign is accepted.
struct Background {
  std::vector<double> c;
  double lp_norm(const SpatialGrid& grid, double p) const;
};

struct PoissonOptions {
  double rtol = 1e-10;     // CG relative residual (d >= 2)
  int max_iterations = 0;  // 0: automatic
};

// -Lap Phi = n - c, Phi = 0 on the boundary. Three-point (1D, Thomas) or
// 5/7-point (CG) cell-centred stencils with Dirichlet ghosts.
Potential solve_poisson(const SpatialGrid& grid, std::span<const double> n, std::span<const double> c,
                        const PoissonOptions& options = {});

// -Lap Phi - eps Lap^{2m+1} Phi = n - c with Phi = Lap Phi = ... = Lap^{2m} Phi = 0
// on the boundary; each Laplacian level carries its own Dirichlet ghost.
// eps == 0 takes the solve_poisson path.
Potential solve_poisson_regularized(const SpatialGrid& grid, std::span<const double> n, std::span<const double> c,
                                    double eps, int m = 1, const PoissonOptions& options = {});

// D = -Lap with homogeneous Dirichlet ghosts.
std::vector<double> apply_neg_laplacian(const SpatialGrid& grid, std::span<const double> phi);
// Cell-centred gradient of a field vanishing on the boundary.
std::vector<double> dirichlet_gradient(const SpatialGrid& grid, std::span<const double> phi);
// int |grad Phi|^2 from face differences; wall faces use the ghost and carry
// half weight, so the result equals <D Phi, Phi>.
double gradient_energy(const SpatialGrid& grid, std::span<const double> phi);
// int |grad D^m Phi|^2, the discrete analogue of |grad^{2m+1} Phi|^2.
double regularized_gradient_energy(const SpatialGrid& grid, std::span<const double> phi, int m);

}  // namespace vpfp
