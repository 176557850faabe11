#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vpfp/error.hpp"
#include "vpfp/poisson.hpp"

using namespace vpfp;

TEST(Poisson, SecondOrder) {
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    const auto g = SpatialGrid::line(1.0, n);
    std::vector<double> s(n), c(n, 0.0);
    for (int i = 0; i < n; ++i) s[i] = std::numbers::pi * std::numbers::pi * std::sin(std::numbers::pi * g.center(0, i));
    const auto p = solve_poisson(g, s, c);
    double e = 0.0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::abs(p.phi[i] - std::sin(std::numbers::pi * g.center(0, i))));
    if (prev > 0.0) EXPECT_NEAR(std::log2(prev / e), 2.0, 0.2);
    prev = e;
  }
}

TEST(Poisson, ResidualOfDiscreteOperator) {
  const auto g = SpatialGrid::line(1.0, 40);
  std::vector<double> n(40), c(40, 0.3);
  for (int i = 0; i < 40; ++i) n[i] = 1.0 + g.center(0, i);
  const auto p = solve_poisson(g, n, c);
  const auto lap = apply_neg_laplacian(g, p.phi);
  for (int i = 0; i < 40; ++i) EXPECT_NEAR(lap[i], n[i] - c[i], 1e-10);
}

TEST(Poisson, TwoDimensionalCg) {
  const SpatialGrid g({1.0, 1.0}, {24, 24});
  std::vector<double> s(g.size()), c(g.size(), 0.0);
  const double k = 2.0 * std::numbers::pi * std::numbers::pi;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto x = g.cell_center(q);
    s[q] = k * std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
  }
  const auto p = solve_poisson(g, s, c);
  double e = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q) {
    const auto x = g.cell_center(q);
    e = std::max(e, std::abs(p.phi[q] - std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1])));
  }
  EXPECT_LT(e, 5e-3);
}

TEST(Poisson, RegularizedZeroEpsIsBitIdentical) {
  const auto g = SpatialGrid::line(1.0, 32);
  std::vector<double> n(32), c(32, 0.1);
  for (int i = 0; i < 32; ++i) n[i] = std::exp(g.center(0, i));
  const auto a = solve_poisson(g, n, c);
  const auto b = solve_poisson_regularized(g, n, c, 0.0);
  EXPECT_EQ(a.phi, b.phi);
  EXPECT_EQ(a.grad, b.grad);
}

TEST(Poisson, RegularizedSineModeExact) {
  const int n = 48;
  const auto g = SpatialGrid::line(1.0, n);
  std::vector<double> s(n), c(n, 0.0);
  for (int i = 0; i < n; ++i) s[i] = std::sin(std::numbers::pi * g.center(0, i));
  const auto d = apply_neg_laplacian(g, s);
  const double lambda = d[n / 2] / s[n / 2];
  const double eps = 1e-3;
  const auto p = solve_poisson_regularized(g, s, c, eps);
    // D + eps D^3 has condition number ~1e8 here; compare relative to the amplitude.
  const double amp = 1.0 / (lambda + eps * std::pow(lambda, 3));
  for (int i = 0; i < n; ++i) EXPECT_NEAR(p.phi[i], s[i] * amp, 1e-7 * amp);
}

TEST(Poisson, RegularizedNeedsResolution) {
  const auto g = SpatialGrid::line(1.0, 5);
  std::vector<double> n(5, 1.0), c(5, 0.0);
  try {
    solve_poisson_regularized(g, n, c, 1e-3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StencilUnderresolved);
  }
}

TEST(Poisson, GradientEnergyIsDiscreteDirichletForm) {
  const auto g = SpatialGrid::line(1.0, 32);
  std::vector<double> n(32, 1.0), c(32, 0.0);
  const auto p = solve_poisson(g, n, c);
  double pairing = 0.0;
  for (int i = 0; i < 32; ++i) pairing += p.phi[i] * (n[i] - c[i]) * g.h(0);
  EXPECT_NEAR(gradient_energy(g, p.phi), pairing, 1e-12);
}
