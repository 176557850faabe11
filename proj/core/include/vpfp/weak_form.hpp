#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vpfp/coupling.hpp"

namespace vpfp {

// Function of one variable with its first two derivatives.
struct Factor {
  std::function<double(double)> f;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

// (1 - s^2)^4 with s = (y - center) / radius, zero outside.
Factor bump(double center, double radius);
// (1 - t / T)^3 on [0, T].
Factor time_taper(double horizon);
// ((L - x) / L)^2 (side 0) or (x / L)^2 (side 1): nonzero on one wall only.
Factor wall_profile(double length, int side);
Factor constant_factor(double value = 1.0);

// phi(t, x, v) = time(t) space(x) velocity(v). `item` selects the identity:
// 1 kinetic, 2 Poisson, 3 continuity, 4 momentum (velocity unused for 2-4).
struct TestFunction {
  int item = 1;
  std::string name;
  Factor time;
  Factor space;
  Factor velocity;
};

struct WeakFormEntry {
  int item;
  std::string name;
  double residual;  // signed defect of the identity
  double scale;     // sum of |term| for relative reporting
};

struct WeakFormReport {
  std::vector<WeakFormEntry> entries;
  double item_residual(int item) const;  // max |residual| over the item
};

// Bumps for every item plus a wall-supported function for items 1 and 3.
std::vector<TestFunction> default_testset(const CoupledProblem& problem, double horizon);

// Throws InvalidTestFunction when a test function violates its support rule.
void check_test_function(const CoupledProblem& problem, const TestFunction& tf, double horizon);

// Evaluates the four identities over history[0].t .. history.back().t with
// the trapezoid rule in time and cell-centre quadrature in x and v.
WeakFormReport weak_form_residual(const CoupledProblem& problem, const History& history,
                                  const std::vector<TestFunction>& testset);

// Incremental form; `horizon` is the final time the test functions vanish at.
class WeakFormBuilder {
 public:
  WeakFormBuilder(const CoupledProblem& problem, std::vector<TestFunction> testset, double horizon);
  void push(const Snapshot& snap);
  WeakFormReport report() const;
  std::size_t snapshots() const { return count_; }

 private:
  const CoupledProblem* problem_;
  std::vector<TestFunction> tests_;
  std::vector<double> value_, scale_, last_integrand_, last_scale_;
  double t_prev_ = 0.0;
  std::size_t count_ = 0;
};

}  // namespace vpfp
