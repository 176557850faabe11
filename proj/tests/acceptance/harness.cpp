#include "harness.hpp"

#include <cstdio>

namespace acc {

bool Criterion::pass() const {
  for (const auto& l : lines)
    if (!l.pass) return false;
  if (runtime_limit > 0.0 && seconds >= runtime_limit) return false;
  return !lines.empty();
}

std::string source_path(const std::string& rel) { return std::string(VPFP_SOURCE_DIR) + "/" + rel; }

vpfp::Scenario shipped(const std::string& name) { return vpfp::load_scenario(source_path("scenarios/" + name + ".cfg")); }

const std::vector<std::string>& shipped_names() {
  static const std::vector<std::string> names{"rest", "maxwellian", "inflow_beam", "shear", "coupled", "transport"};
  return names;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const std::vector<ShippedRun>& shipped_runs() {
  static const std::vector<ShippedRun> runs = [] {
    std::vector<ShippedRun> out;
    for (const auto& name : shipped_names()) {
      auto s = shipped(name);
      s.refinement = true;
      s.weak_form = false;
      const auto t0 = std::chrono::steady_clock::now();
      auto r = vpfp::run_scenario(s);
      const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out.push_back({name, std::move(r), sec});
    }
    return out;
  }();
  return runs;
}

}  // namespace acc
