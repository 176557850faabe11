#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "vpfp/parallel.hpp"
#include "vpfp/runner.hpp"
#include "vpfp/scenario.hpp"

namespace {

int report_error(const vpfp::Error& e) {
  std::cerr << "vpfp: [" << e.stage() << "] " << vpfp::to_string(e.code()) << ": " << e.detail() << "\n";
  return vpfp::exit_code_for(e.code());
}

std::string default_out(const vpfp::Scenario& s) { return "out/" + (s.name.empty() ? std::string("run") : s.name); }

int do_validate(const std::string& file) {
  const auto s = vpfp::load_scenario(file);
  const auto rep = vpfp::validate_scenario(s);
  std::cout << rep.text() << (rep.ok() ? "PASS" : "FAIL") << " " << file << "\n";
  return rep.ok() ? vpfp::kExitOk : vpfp::kExitValidation;
}

int do_sweep(const vpfp::Scenario& s, const std::string& out) {
  const auto res = vpfp::run_sweep(s, out);
  for (const auto& r : res.report.runs) {
    std::cout << "N=" << r.point.cutoff << " eps=" << r.point.eps << " delta=" << r.point.delta << "  "
              << (r.ok ? "ok" : "FAILED " + r.error) << "  min_margin=" << r.min_margin << "\n";
  }
  for (const auto& c : res.report.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  observed=" << c.observed << " expected=" << c.expected << "\n";
  std::cout << "report: " << out << "/sweep_report.json\n";
  return res.exit_code;
}

int do_run(const std::string& file, std::string out, const std::optional<std::uint64_t>& seed) {
  auto s = vpfp::load_scenario(file);
  if (out.empty()) out = default_out(s);
  if (!s.schedule.empty()) {
    if (seed) s.seed = *seed;
    return do_sweep(s, out);
  }
  vpfp::RunOptions opt;
  opt.out_dir = out;
  opt.seed = seed;
  const auto r = vpfp::run_scenario(s, opt);
  if (r.exit_code == vpfp::kExitValidation && !r.validation.items.empty()) std::cout << r.validation.text();
  for (const auto& i : r.invariants)
    std::cout << (i.pass ? "PASS " : "FAIL ") << i.name << "  value=" << i.value << " threshold=" << i.threshold << "\n";
  std::cout << "status: " << r.status << (r.error.empty() ? "" : " (" + r.error + ")") << "\n";
  std::cout << "artifacts: " << out << "\n";
  if (!r.error.empty() && r.exit_code != vpfp::kExitOk) std::cerr << "vpfp: " << r.error << "\n";
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vpfp: coupled Vlasov-Fokker-Planck / Navier-Stokes runner"};
  app.require_subcommand(1);

  std::string file, out, dir;
  std::optional<std::uint64_t> seed;

  auto* validate = app.add_subcommand("validate", "Check a scenario against the existence hypotheses");
  validate->add_option("file", file, "scenario file")->required();

  auto* run = app.add_subcommand("run", "Run a scenario and write artifacts");
  run->add_option("file", file, "scenario file")->required();
  run->add_option("--out", out, "artifact directory");
  run->add_option("--seed", seed, "override the scenario seed");

  auto* sweep = app.add_subcommand("sweep", "Run the continuation schedule of a scenario");
  sweep->add_option("file", file, "scenario file")->required();
  sweep->add_option("--out", out, "artifact directory");

  auto* plot = app.add_subcommand("plot", "Render ledger curves and field slices from an artifact directory");
  plot->add_option("dir", dir, "artifact directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : vpfp::kExitValidation;
  }

  try {
    std::cerr << "vpfp: workers = " << vpfp::worker_count() << "\n";
    if (*validate) return do_validate(file);
    if (*run) return do_run(file, out, seed);
    if (*sweep) {
      const auto s = vpfp::load_scenario(file);
      return do_sweep(s, out.empty() ? default_out(s) : out);
    }
    if (*plot) {
      for (const auto& p : vpfp::plot_directory(dir)) std::cout << p << "\n";
      return vpfp::kExitOk;
    }
  } catch (const vpfp::Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "vpfp: " << e.what() << "\n";
    return vpfp::kExitSolver;
  }
  return vpfp::kExitOk;
}
