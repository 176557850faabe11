#include <chrono>
#include <cstdio>
#include <exception>

#include "harness.hpp"
#include "vpfp/error.hpp"

int main() {
  using Fn = acc::Criterion (*)();
  const Fn suites[] = {acc::conservation,   acc::equilibrium, acc::moment_identity, acc::lp_growth,
                       acc::density_bounds, acc::energy_ledger, acc::poisson,       acc::fixed_point,
                       acc::weak_form,      acc::particles,   acc::continuation};
  int failed = 0;
  int id = 0;
  for (Fn fn : suites) {
    ++id;
    acc::Criterion c{id, "?", {}, 0.0, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c = fn();
    } catch (const vpfp::Error& e) {
      c.lines.push_back({"unexpected error", false, std::string(vpfp::to_string(e.code())) + ": " + e.detail()});
    } catch (const std::exception& e) {
      c.lines.push_back({"unexpected exception", false, e.what()});
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = c.pass();
    failed += ok ? 0 : 1;
    std::printf("%s %2d %-18s (%.1fs", ok ? "PASS" : "FAIL", id, c.title.c_str(), c.seconds);
    if (c.runtime_limit > 0.0) std::printf(" < %.0fs", c.runtime_limit);
    std::printf(")\n");
    for (const auto& l : c.lines) std::printf("       %s %s: %s\n", l.pass ? "ok  " : "FAIL", l.label.c_str(), l.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
