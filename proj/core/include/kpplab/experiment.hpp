#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kpplab/config.hpp"
#include "kpplab/levelsets.hpp"

namespace kpplab {

struct CheckResult {
  std::string check;
  std::string params;
  double entry_time = -1.0;
  double worst_margin = 0.0;
  bool pass = false;
};

struct FitResult {
  double lambda = 0.0;
  GrowthFit fit;
};

struct ExperimentResult {
  std::string name;
  std::string dir;
  bool ok = false;           // run finished without a runtime error
  bool checks_pass = false;  // every enabled check passed
  std::string error;
  std::vector<CheckResult> checks;
  std::vector<FitResult> fits;
  double wall_time_s = 0.0;
};

/// Runs one configured experiment and persists its artifacts under out_dir:
/// trajectories.csv, flatness.csv (when enabled), checks.json, fits.json and
/// manifest.json. Partial artifacts are kept on failure.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

struct SweepResult {
  std::vector<ExperimentResult> results;  // input order
  std::string summary_path;
  bool all_ok = false;
  bool all_checks_pass = false;
};

/// Runs the experiments on a worker pool (each in out_root/<name>) and writes
/// out_root/summary.csv. Failures are isolated into their summary rows.
SweepResult sweep(const std::vector<ExperimentConfig>& cfgs, const std::string& out_root,
                  int workers);

/// Markdown report comparing fitted growth parameters against the predicted
/// rates; also emits plot-ready per-level CSVs (t, x, ln x, ln ln x) next to
/// each run. Returns the number of sections with missing artifacts.
int write_report(const std::vector<std::string>& run_dirs, const std::string& out_path);

/// $KPPLAB_OUTPUT_ROOT, or "kpplab-out" when unset.
std::string default_output_root();

/// Formats a double with 12 significant digits; the single formatting used in
/// every CSV so reruns are byte-identical.
std::string format_num(double v);

}  // namespace kpplab
