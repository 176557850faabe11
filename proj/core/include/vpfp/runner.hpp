#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vpfp/diagnostics.hpp"
#include "vpfp/error.hpp"
#include "vpfp/scenario.hpp"
#include "vpfp/weak_form.hpp"

namespace vpfp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitInvariant = 4;

int exit_code_for(ErrorCode code);

struct RunOptions {
  std::string out_dir;  // empty: no files
  std::optional<std::uint64_t> seed;
  std::optional<LedgerLevel> ledger_level;
  bool keep_history = false;
};

struct InvariantResult {
  std::string name;
  bool pass;
  double value;
  double threshold;
};

struct RunResult {
  int exit_code = kExitOk;
  std::string status = "ok";
  std::string error;
  std::string hash;
  ValidationReport validation;
  CoupledProblem problem;
  double dt = 0.0;
  double h = 0.0;
  int steps = 0;
  int max_iterations = 0;
  double max_velocity = 0.0;
  CoupledState final_state;
  History history;  // only with keep_history
  EnergyLedger ledger;
  std::vector<MassBalanceRow> mass;
  std::vector<MomentRow> moments;
  std::vector<LpMargin> lp;
  std::vector<DensityBoundsMargin> density;
  WeakFormReport weak_form;
  std::vector<ChaosMetric> chaos;
  std::vector<InvariantResult> invariants;
  std::map<std::string, double> orders;
  double density_margin = std::numeric_limits<double>::quiet_NaN();
  double min_margin = 0.0;
  double margin_threshold = 0.0;
  std::string summary_json;
};

// Validates, runs the advance loop, evaluates diagnostics and invariants and
// (with out_dir) writes ledgers, snapshots and summary.json.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

struct SweepResult {
  int exit_code = kExitOk;
  ContinuationReport report;
  std::string report_json;
};
SweepResult run_sweep(const Scenario& scenario, const std::string& out_dir);

// Renders the artifacts of a run or sweep directory to SVG and CSV files;
// returns the files written. MissingInput if nothing renderable is there.
std::vector<std::string> plot_directory(const std::string& dir);

}  // namespace vpfp
