#pragma once

#include <string>
#include <vector>

#include "aptt/config.hpp"
#include "aptt/diagnostics.hpp"
#include "aptt/scenario.hpp"
#include "aptt/time_loop.hpp"

namespace aptt {

struct RunScenarioResult {
  RunDiagnostics diag;
  DriftReport drift;
  std::string csv_path;
  std::string field_tt_path;
  std::string field_bin_path;  // empty if the dense dump was skipped (too large)
  std::string summary_path;
  std::string config_path;
};

/// Full scenario run: simulate to t_star, stream diagnostics rows to
/// <out_dir>/diagnostics.csv as they are produced (so partial rows survive an
/// abort), dump the final field, the resolved configuration and a run
/// summary.  With compare_oracle the dense reference is advanced in lock
/// step and the per-step relative error column is filled.
RunScenarioResult run_scenario(const ResolvedConfig& rc);

struct ConvergenceLevel {
  int m = 0;
  double error = 0.0;  // discrete L2 against the restricted reference
  double order = 0.0;  // log2(e_{m/2} / e_m); NaN for the first level / noise floor
};

struct ConvergenceStudy {
  std::vector<ConvergenceLevel> levels;
  int reference_m = 0;
  std::string note;

  std::string to_string() const;
};

/// Self-convergence study: runs the scenario at each level with dt = 1/(4m)
/// and compares final fields against a refined run at 2*max(m_list), both
/// restricted to the coarse grid (exact on these nested uniform grids).
ConvergenceStudy convergence_study(const Scenario& scenario, const std::vector<int>& m_list,
                                   const BgkConfig& base);

}  // namespace aptt
