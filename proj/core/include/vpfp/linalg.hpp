#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vpfp::linalg {

// Thomas algorithm for a tridiagonal system; lower[0] and upper[n-1] unused.
// Assumes diagonal dominance (no pivoting). Result overwrites rhs.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

// Periodic tridiagonal system: lower[0] couples row 0 to row n-1 and
// upper[n-1] couples row n-1 to row 0 (Sherman-Morrison on the Thomas solve).
void solve_cyclic_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<double> rhs);

// Symmetric positive definite band matrix with `bandwidth` super-diagonals,
// stored as band(i, k) = A(i, i + k) for k = 0..bandwidth.
class BandedSpd {
 public:
  BandedSpd(std::size_t n, std::size_t bandwidth);

  std::size_t size() const noexcept { return n_; }
  std::size_t bandwidth() const noexcept { return bw_; }
  double& at(std::size_t i, std::size_t k) { return band_[i * (bw_ + 1) + k]; }
  double at(std::size_t i, std::size_t k) const { return band_[i * (bw_ + 1) + k]; }
  // A(i, j) accessor via the symmetric band.
  double entry(std::size_t i, std::size_t j) const;

  // In-place banded Cholesky (A = L L^T). Returns false if not positive definite.
  bool factorize();
  // Solves with the factor; rhs overwritten.
  void solve(std::span<double> rhs) const;

 private:
  std::size_t n_;
  std::size_t bw_;
  std::vector<double> band_;
  bool factored_ = false;
};

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Conjugate gradients for an SPD operator. x holds the initial guess.
CgResult conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply,
                            std::span<const double> b, std::span<double> x, double rtol, int max_iterations);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace vpfp::linalg
