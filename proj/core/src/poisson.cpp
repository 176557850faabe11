#include "vpfp/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vpfp/error.hpp"
#include "vpfp/linalg.hpp"
#include "vpfp/stencil.hpp"

namespace vpfp {

double Background::lp_norm(const SpatialGrid& grid, double p) const {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double value : c) m = std::max(m, std::abs(value));
    return m;
  }
  double s = 0.0;
  for (double value : c) s += std::pow(std::abs(value), p);
  return std::pow(s * grid.cell_volume(), 1.0 / p);
}

std::vector<double> apply_neg_laplacian(const SpatialGrid& grid, std::span<const double> phi) {
  GhostedField gf(grid, phi);
  gf.fill_all(GhostRule::Dirichlet, 0.0);
  auto lap = laplace(gf);
  for (double& value : lap) value = -value;
  return lap;
}

std::vector<double> dirichlet_gradient(const SpatialGrid& grid, std::span<const double> phi) {
  GhostedField gf(grid, phi);
  gf.fill_all(GhostRule::Dirichlet, 0.0);
  const auto g = grad(gf);
  const auto d = static_cast<std::size_t>(grid.dim());
  std::vector<double> out(grid.size() * d);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t a = 0; a < d; ++a) out[i * d + a] = g[a][i];
  return out;
}

double gradient_energy(const SpatialGrid& grid, std::span<const double> phi) {
  GhostedField gf(grid, phi);
  gf.fill_all(GhostRule::Dirichlet, 0.0);
  double s = 0.0;
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unflatten(flat);
    for (int a = 0; a < grid.dim(); ++a) {
      auto lo = idx;
      lo[a] -= 1;
      // Wall faces span half a cell, which makes the sum equal <D phi, phi>.
      const double g = (gf.at(idx[0], idx[1], idx[2]) - gf.at(lo[0], lo[1], lo[2])) / grid.h(a);
      s += (idx[a] == 0 ? 0.5 : 1.0) * g * g;
      if (idx[a] == grid.cells(a) - 1) {
        auto hi = idx;
        hi[a] += 1;
        const double gh = (gf.at(hi[0], hi[1], hi[2]) - gf.at(idx[0], idx[1], idx[2])) / grid.h(a);
        s += 0.5 * gh * gh;
      }
    }
  }
  return s * grid.cell_volume();
}

double regularized_gradient_energy(const SpatialGrid& grid, std::span<const double> phi, int m) {
  std::vector<double> w(phi.begin(), phi.end());
  for (int k = 0; k < m; ++k) w = apply_neg_laplacian(grid, w);
  return gradient_energy(grid, w);
}

namespace {

std::vector<double> source_of(const SpatialGrid& grid, std::span<const double> n, std::span<const double> c) {
  if (n.size() != grid.size() || c.size() != grid.size()) {
    raise(ErrorCode::GridMismatch, "poisson: density and background need one value per cell", "poisson");
  }
  require_finite(n, "poisson density");
  require_finite(c, "poisson background");
  std::vector<double> s(grid.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = n[i] - c[i];
  return s;
}

Potential finish(const SpatialGrid& grid, std::vector<double> phi) {
  Potential p;
  p.grad = dirichlet_gradient(grid, phi);
  p.phi = std::move(phi);
  return p;
}

std::vector<double> solve_plain_1d(const SpatialGrid& grid, std::vector<double> s) {
  const std::size_t n = grid.size();
  const double ih2 = 1.0 / (grid.h(0) * grid.h(0));
  std::vector<double> lower(n, -ih2), diag(n, 2.0 * ih2), upper(n, -ih2);
  diag[0] = 3.0 * ih2;
  diag[n - 1] = 3.0 * ih2;
  if (n == 1) diag[0] = 4.0 * ih2;
  linalg::solve_tridiagonal(lower, diag, upper, s);
  return s;
}

std::vector<double> apply_power(const SpatialGrid& grid, std::span<const double> x, int power) {
  std::vector<double> w(x.begin(), x.end());
  for (int k = 0; k < power; ++k) w = apply_neg_laplacian(grid, w);
  return w;
}

std::vector<double> solve_cg(const SpatialGrid& grid, std::span<const double> s, double eps, int m,
                             const PoissonOptions& options) {
  const int power = 2 * m + 1;
  auto apply = [&](std::span<const double> x, std::span<double> y) {
    const auto d1 = apply_neg_laplacian(grid, x);
    if (eps == 0.0) {
      std::copy(d1.begin(), d1.end(), y.begin());
      return;
    }
    const auto dp = apply_power(grid, d1, power - 1);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = d1[i] + eps * dp[i];
  };
  std::vector<double> x(s.size(), 0.0);
  const int max_it = options.max_iterations > 0 ? options.max_iterations
                                                : static_cast<int>(50 * grid.size() + 1000);
  const auto res = linalg::conjugate_gradient(apply, s, x, options.rtol, max_it);
  if (!res.converged) {
    raise(ErrorCode::EllipticSolveFailed,
          "CG stopped at relative residual " + std::to_string(res.relative_residual) + " after " +
              std::to_string(res.iterations) + " iterations",
          "poisson");
  }
  return x;
}

}  // namespace

Potential solve_poisson(const SpatialGrid& grid, std::span<const double> n, std::span<const double> c,
                        const PoissonOptions& options) {
  auto s = source_of(grid, n, c);
  if (grid.dim() == 1) return finish(grid, solve_plain_1d(grid, std::move(s)));
  return finish(grid, solve_cg(grid, s, 0.0, 1, options));
}

Potential solve_poisson_regularized(const SpatialGrid& grid, std::span<const double> n, std::span<const double> c,
                                    double eps, int m, const PoissonOptions& options) {
  if (!(eps >= 0.0)) raise(ErrorCode::InvalidArgument, "regularized poisson: eps must be >= 0", "poisson");
  if (m < 1) raise(ErrorCode::InvalidArgument, "regularized poisson: m must be >= 1", "poisson");
  for (int a = 0; a < grid.dim(); ++a) {
    if (grid.cells(a) < 4 * m + 3) {
      raise(ErrorCode::StencilUnderresolved,
            "order " + std::to_string(2 * (2 * m + 1)) + " operator needs >= " + std::to_string(4 * m + 3) +
                " cells per axis",
            "poisson");
    }
  }
  if (eps == 0.0) return solve_poisson(grid, n, c, options);
  auto s = source_of(grid, n, c);
  if (grid.dim() != 1) return finish(grid, solve_cg(grid, s, eps, m, options));

  // Assemble D + eps D^{2m+1} (bandwidth 2m+1) by probing with combs of unit
  // vectors spaced so their images do not overlap.
  const std::size_t nn = grid.size();
  const std::size_t bw = static_cast<std::size_t>(2 * m + 1);
  const std::size_t stride = 2 * bw + 1;
  linalg::BandedSpd a(nn, bw);
  std::vector<double> e(nn);
  for (std::size_t first = 0; first < std::min(stride, nn); ++first) {
    std::fill(e.begin(), e.end(), 0.0);
    for (std::size_t j = first; j < nn; j += stride) e[j] = 1.0;
    const auto d1 = apply_neg_laplacian(grid, e);
    const auto dp = apply_power(grid, d1, 2 * m);
    for (std::size_t j = first; j < nn; j += stride)
      for (std::size_t i = (j > bw ? j - bw : 0); i <= j; ++i) a.at(i, j - i) = d1[i] + eps * dp[i];
  }
  if (!a.factorize()) raise(ErrorCode::EllipticSolveFailed, "banded factorization lost definiteness", "poisson");
  a.solve(s);
  return finish(grid, std::move(s));
}

}  // namespace vpfp
