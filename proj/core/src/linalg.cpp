#include "vpfp/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "vpfp/error.hpp"

namespace vpfp::linalg {

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  std::vector<double> c(n);
  double beta = diag[0];
  rhs[0] /= beta;
  for (std::size_t i = 1; i < n; ++i) {
    c[i] = upper[i - 1] / beta;
    beta = diag[i] - lower[i] * c[i];
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i + 1] * rhs[i + 1];
}

void solve_cyclic_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 1) {
    rhs[0] /= diag[0] + lower[0] + upper[0];
    return;
  }
  if (n == 2) {
    const double a = diag[0], b = upper[0] + lower[0], c = lower[1] + upper[1], d = diag[1];
    const double det = a * d - b * c;
    const double x0 = (d * rhs[0] - b * rhs[1]) / det;
    const double x1 = (a * rhs[1] - c * rhs[0]) / det;
    rhs[0] = x0;
    rhs[1] = x1;
    return;
  }
  const double alpha = upper[n - 1];  // A(n-1, 0)
  const double beta = lower[0];       // A(0, n-1)
  const double gamma = -diag[0];
  std::vector<double> bb(diag.begin(), diag.end());
  bb[0] = diag[0] - gamma;
  bb[n - 1] = diag[n - 1] - alpha * beta / gamma;
  std::vector<double> x(rhs.begin(), rhs.end());
  solve_tridiagonal(lower, bb, upper, x);
  std::vector<double> z(n, 0.0);
  z[0] = gamma;
  z[n - 1] = alpha;
  solve_tridiagonal(lower, bb, upper, z);
  const double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = x[i] - fact * z[i];
}

BandedSpd::BandedSpd(std::size_t n, std::size_t bandwidth)
    : n_(n), bw_(bandwidth), band_(n * (bandwidth + 1), 0.0) {}

double BandedSpd::entry(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const std::size_t k = j - i;
  return k > bw_ ? 0.0 : at(i, k);
}

bool BandedSpd::factorize() {
  // Row-oriented banded Cholesky: U^T U with U upper-band; at(i,k) = U(i, i+k).
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k <= bw_ && i + k < n_; ++k) {
      const std::size_t j = i + k;
      double s = at(i, k);
      const std::size_t p0 = j > bw_ ? j - bw_ : 0;
      for (std::size_t p = p0; p < i; ++p) s -= at(p, i - p) * at(p, j - p);
      if (k == 0) {
        if (!(s > 0.0)) return false;
        at(i, 0) = std::sqrt(s);
      } else {
        at(i, k) = s / at(i, 0);
      }
    }
  }
  factored_ = true;
  return true;
}

void BandedSpd::solve(std::span<double> rhs) const {
  if (!factored_) raise(ErrorCode::InvalidArgument, "BandedSpd::solve before factorize");
  // U^T y = b
  for (std::size_t i = 0; i < n_; ++i) {
    double s = rhs[i];
    const std::size_t p0 = i > bw_ ? i - bw_ : 0;
    for (std::size_t p = p0; p < i; ++p) s -= at(p, i - p) * rhs[p];
    rhs[i] = s / at(i, 0);
  }
  // U x = y
  for (std::size_t i = n_; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t k = 1; k <= bw_ && i + k < n_; ++k) s -= at(i, k) * rhs[i + k];
    rhs[i] = s / at(i, 0);
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

CgResult conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply,
                            std::span<const double> b, std::span<double> x, double rtol, int max_iterations) {
  const std::size_t n = b.size();
  std::vector<double> r(n), p(n), ap(n);
  apply(x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  const double bnorm = norm2(b);
  CgResult res;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  p = r;
  double rr = dot(r, r);
  res.relative_residual = std::sqrt(rr) / bnorm;
  while (res.relative_residual > rtol && res.iterations < max_iterations) {
    apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;
    const double alpha = rr / pap;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    const double rr_new = dot(r, r);
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + (rr_new / rr) * p[i];
    rr = rr_new;
    ++res.iterations;
    res.relative_residual = std::sqrt(rr) / bnorm;
  }
  res.converged = res.relative_residual <= rtol;
  return res;
}

}  // namespace vpfp::linalg
