#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "vpfp/runner.hpp"

namespace acc {

struct Line {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  std::vector<Line> lines;
  double seconds = 0.0;
  double runtime_limit = 0.0;  // 0: none
  bool pass() const;
};

std::string source_path(const std::string& rel);
vpfp::Scenario shipped(const std::string& name);
const std::vector<std::string>& shipped_names();
std::string fmt(double x);

// Cached coarse+refined runs of the shipped scenarios.
struct ShippedRun {
  std::string name;
  vpfp::RunResult result;
  double seconds;
};
const std::vector<ShippedRun>& shipped_runs();

Criterion conservation();
Criterion equilibrium();
Criterion moment_identity();
Criterion lp_growth();
Criterion density_bounds();
Criterion energy_ledger();
Criterion poisson();
Criterion fixed_point();
Criterion weak_form();
Criterion particles();
Criterion continuation();

}  // namespace acc
