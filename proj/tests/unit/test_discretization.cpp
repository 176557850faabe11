#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vpfp/error.hpp"
#include "vpfp/grid.hpp"
#include "vpfp/linalg.hpp"
#include "vpfp/stencil.hpp"

using namespace vpfp;

TEST(Grid, LineGeometry) {
  const auto g = SpatialGrid::line(2.0, 8);
  EXPECT_EQ(g.size(), 8u);
  EXPECT_DOUBLE_EQ(g.h(0), 0.25);
  EXPECT_DOUBLE_EQ(g.center(0, 0), 0.125);
  ASSERT_EQ(g.boundary_faces().size(), 2u);
  EXPECT_EQ(g.boundary_faces()[0].normal[0], -1.0);
  EXPECT_EQ(g.boundary_faces()[1].normal[0], 1.0);
}

TEST(Grid, FlattenRoundTrip) {
  const SpatialGrid g({1.0, 2.0, 3.0}, {3, 4, 5});
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(g.flatten(g.unflatten(k)), k);
  EXPECT_EQ(g.boundary_faces().size(), 2u * (4 * 5 + 3 * 5 + 3 * 4));
}

TEST(Grid, VelocityGridSymmetric) {
  const VelocityGrid v(1, 4.0, 8);
  for (int k = 0; k < 8; ++k) EXPECT_DOUBLE_EQ(v.center(k), -v.center(7 - k));
}

TEST(Grid, QuadratureExactForLinear) {
  const auto g = SpatialGrid::line(1.0, 10);
  std::vector<double> f(10);
  for (int i = 0; i < 10; ++i) f[i] = 3.0 * g.center(0, i) + 1.0;
  EXPECT_NEAR(quadrature(g, f), 2.5, 1e-14);
}

TEST(Grid, QuadratureRejectsNonFinite) {
  const auto g = SpatialGrid::line(1.0, 4);
  std::vector<double> f{1.0, NAN, 1.0, 1.0};
  try {
    quadrature(g, f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteField);
  }
}

TEST(Stencil, MissingGhostsRefused) {
  const auto g = SpatialGrid::line(1.0, 4);
  std::vector<double> f(4, 1.0);
  GhostedField gf(g, f);
  EXPECT_THROW(grad(gf), Error);
  gf.fill_all(GhostRule::Neumann);
  const auto d = grad(gf);
  for (double x : d[0]) EXPECT_EQ(x, 0.0);
}

TEST(Stencil, LaplaceOfQuadraticIsConstant) {
  const auto g = SpatialGrid::line(1.0, 16);
  std::vector<double> f(16);
  for (int i = 0; i < 16; ++i) f[i] = std::pow(g.center(0, i), 2);
  GhostedField gf(g, f);
  const double h = g.h(0);
  gf.fill(0, GhostRule::Dirichlet, 0.0, 1.0);
  gf.at(-1) = h * h / 4.0;  // exact quadratic ghost values
  gf.at(16) = std::pow(1.0 + h / 2.0, 2);
  const auto l = laplace(gf);
  for (double x : l) EXPECT_NEAR(x, 2.0, 1e-9);
}

TEST(Linalg, TridiagonalMatchesDense) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const int n = 12;
  std::vector<double> lo(n), di(n), up(n), x(n), b(n);
  for (int i = 0; i < n; ++i) lo[i] = U(rng), up[i] = U(rng), di[i] = 4.0 + U(rng), x[i] = U(rng);
  for (int i = 0; i < n; ++i) b[i] = di[i] * x[i] + (i > 0 ? lo[i] * x[i - 1] : 0.0) + (i < n - 1 ? up[i] * x[i + 1] : 0.0);
  linalg::solve_tridiagonal(lo, di, up, b);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(b[i], x[i], 1e-12);
}

TEST(Linalg, CyclicTridiagonal) {
  const int n = 9;
  std::vector<double> lo(n, -1.0), di(n, 3.0), up(n, -1.0), x(n), b(n);
  for (int i = 0; i < n; ++i) x[i] = std::sin(i + 0.3);
  for (int i = 0; i < n; ++i) b[i] = 3.0 * x[i] - x[(i + n - 1) % n] - x[(i + 1) % n];
  linalg::solve_cyclic_tridiagonal(lo, di, up, b);
  for (int i = 0; i < n; ++i) EXPECT_NEAR(b[i], x[i], 1e-12);
}

TEST(Linalg, BandedCholeskySolves) {
  const std::size_t n = 10;
  linalg::BandedSpd a(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    a.at(i, 0) = 6.0;
    if (i + 1 < n) a.at(i, 1) = -2.0;
    if (i + 2 < n) a.at(i, 2) = 0.5;
  }
  std::vector<double> x(n), b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * i;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b[i] += a.entry(i, j) * x[j];
  ASSERT_TRUE(a.factorize());
  a.solve(b);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(b[i], x[i], 1e-12);
}

TEST(Linalg, BandedDetectsIndefinite) {
  linalg::BandedSpd a(3, 1);
  a.at(0, 0) = 1.0, a.at(0, 1) = 2.0, a.at(1, 0) = 1.0, a.at(1, 1) = 0.0, a.at(2, 0) = 1.0;
  EXPECT_FALSE(a.factorize());
}

TEST(Linalg, ConjugateGradient) {
  const std::size_t n = 20;
  auto apply = [&](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = 2.0 * x[i] - (i ? x[i - 1] : 0.0) - (i + 1 < n ? x[i + 1] : 0.0);
  };
  std::vector<double> b(n, 1.0), x(n, 0.0);
  const auto r = linalg::conjugate_gradient(apply, b, x, 1e-12, 100);
  EXPECT_TRUE(r.converged);
  std::vector<double> y(n);
  apply(x, y);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y[i], 1.0, 1e-9);
}
