#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aptt/bgk.hpp"
#include "aptt/mals.hpp"

namespace aptt {

/// Two time levels of the two-step scheme.
struct SimulationState {
  TtTensor f_prev;  // level n-1
  TtTensor f_curr;  // level n
  int n = 1;
  double t = 0.0;
};

/// One per-step diagnostics row.  Written to CSV by the harness; the schema
/// is documented in the README.
struct StepRecord {
  int n = 0;
  double t = 0.0;
  int rank_max = 1;
  double rank_avg = 1.0;
  int mals_sweeps = 0;
  double mals_residual = 0.0;
  double mass = 0.0;
  std::vector<double> momentum;
  double energy = 0.0;
  std::optional<double> rel_err_oracle;
  double wall_ms = 0.0;
};

struct RunDiagnostics {
  std::vector<StepRecord> rows;
  double total_wall_ms = 0.0;
  std::string note;

  /// Mean over steps of the mean bond rank.
  double average_rank() const;
  int max_rank() const;
};

/// Called after each completed step, including the bootstrap and the initial
/// state (n = 0).  Must be re-entrant; the state reference is only valid for
/// the duration of the call.
using StepCallback = std::function<void(const StepRecord&, const SimulationState&)>;

/// First step by the explicit two-stage second-order Runge-Kutta scheme, with
/// rounding at eps_b after each stage.  `f0` must already be compressed.
TtTensor bootstrap_first_step(const TtTensor& f0, const BgkConfig& cfg, const BgkOperators& ops);

/// One semi-implicit leap-frog step: assembles the right-hand side in TT form
/// (rounded at eps_b), warm-starts the alternating solver with the explicit
/// leap-frog predictor, and returns the new level rounded at eps_b together
/// with the solver report.  The collision term is evaluated once and reused
/// between the predictor and the right-hand side.
std::pair<TtTensor, MalsReport> cnlf_step(const SimulationState& state, const BgkConfig& cfg,
                                          const BgkOperators& ops);

/// Full run: compress-and-bootstrap, then leap-frog to t_star.  Solver
/// non-convergence and positivity failures abort by exception after the
/// callback has seen every completed step.
RunDiagnostics run_simulation(const TtTensor& f0, const BgkConfig& cfg,
                              const StepCallback& callback = {});

}  // namespace aptt
