#include "aptt/time_loop.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

#include "aptt/errors.hpp"

namespace aptt {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

StepRecord make_record(int n, double t, const TtTensor& f, const BgkConfig& cfg,
                       int sweeps, double residual, double wall_ms) {
  StepRecord r;
  r.n = n;
  r.t = t;
  r.rank_max = f.max_rank();
  r.rank_avg = f.average_rank();
  r.mals_sweeps = sweeps;
  r.mals_residual = residual;
  const ConservedQuantities c = conserved_quantities(f, cfg);
  r.mass = c.mass;
  r.momentum = c.momentum;
  r.energy = c.energy;
  r.wall_ms = wall_ms;
  return r;
}

MalsSettings mals_settings(const BgkConfig& cfg) {
  MalsSettings s;
  s.eps_d = cfg.eps_d;
  s.max_sweeps = cfg.mals_max_sweeps;
  return s;
}

}  // namespace

double RunDiagnostics::average_rank() const {
  if (rows.empty()) return 1.0;
  double acc = 0.0;
  for (const auto& r : rows) acc += r.rank_avg;
  return acc / static_cast<double>(rows.size());
}

int RunDiagnostics::max_rank() const {
  int m = 1;
  for (const auto& r : rows) m = std::max(m, r.rank_max);
  return m;
}

TtTensor bootstrap_first_step(const TtTensor& f0, const BgkConfig& cfg, const BgkOperators& ops) {
  const double dt = cfg.dt;
  const TtTensor q0 = build_collision_term(f0, cfg);
  // F_hat = F0 + dt*(L F0 + Q0)
  TtTensor fhat = tt_add(f0, tt_scale(tt_add(op_apply(ops.transport, f0), q0), dt));
  fhat = tt_round(fhat, cfg.eps_b);
  const TtTensor qhat = build_collision_term(fhat, cfg);
  // F1 = 1/2 F0 + 1/2 F_hat + dt/2 (L F_hat + Q_hat)
  TtTensor f1 = tt_add(tt_add(tt_scale(f0, 0.5), tt_scale(fhat, 0.5)),
                       tt_scale(tt_add(op_apply(ops.transport, fhat), qhat), 0.5 * dt));
  return tt_round(f1, cfg.eps_b);
}

std::pair<TtTensor, MalsReport> cnlf_step(const SimulationState& state, const BgkConfig& cfg,
                                          const BgkOperators& ops) {
  const double dt = cfg.dt;
  const TtTensor qn = build_collision_term(state.f_curr, cfg);

  TtTensor rhs = tt_add(op_apply(ops.cnlf_rhs, state.f_prev), tt_scale(qn, 2.0 * dt));
  if (ops.has_dissipation) {
    const double h = cfg.h();
    const double coeff = -cfg.eps_diss * h * h * h * h / 16.0;
    rhs = tt_add(rhs, tt_scale(op_apply(ops.dissipation, state.f_prev), coeff));
  }
  rhs = tt_round(rhs, cfg.eps_b);

  // Explicit leap-frog predictor as the warm start.
  TtTensor x0 = tt_add(state.f_prev,
                       tt_scale(tt_add(op_apply(ops.transport, state.f_curr), qn), 2.0 * dt));
  x0 = tt_round(x0, cfg.eps_b);

  auto [x, report] = mals_solve(ops.cnlf_lhs, rhs, x0, mals_settings(cfg));
  return {tt_round(x, cfg.eps_b), std::move(report)};
}

RunDiagnostics run_simulation(const TtTensor& f0, const BgkConfig& cfg,
                              const StepCallback& callback) {
  cfg.validate();
  const auto t0 = Clock::now();
  RunDiagnostics diag;

  const double steps_real = cfg.t_star / cfg.dt;
  int n_steps = static_cast<int>(std::llround(steps_real));
  double last_dt = cfg.dt;
  bool short_final = false;
  if (std::abs(steps_real - n_steps) > 1e-9 * std::max(1.0, steps_real)) {
    n_steps = static_cast<int>(std::floor(steps_real));
    last_dt = cfg.t_star - n_steps * cfg.dt;
    short_final = true;
    diag.note = "t_star is not an integer multiple of dt; final step shortened to dt=" +
                std::to_string(last_dt);
    std::cerr << "[aptt] warning: " << diag.note << "\n";
    n_steps += 1;
  }
  if (n_steps < 1) throw ConfigError("t_star must allow at least one step");

  const BgkOperators ops = build_bgk_operators(cfg);

  TtTensor f_prev = tt_round(f0, cfg.eps_b);
  auto emit = [&](const StepRecord& rec, const SimulationState& st) {
    diag.rows.push_back(rec);
    if (callback) callback(rec, st);
  };

  {
    SimulationState st{f_prev, f_prev, 0, 0.0};
    emit(make_record(0, 0.0, f_prev, cfg, 0, 0.0, ms_since(t0)), st);
  }

  auto t_step = Clock::now();
  TtTensor f_curr = bootstrap_first_step(f_prev, cfg, ops);
  {
    SimulationState st{f_prev, f_curr, 1, cfg.dt};
    emit(make_record(1, cfg.dt, f_curr, cfg, 0, 0.0, ms_since(t_step)), st);
  }

  SimulationState state{std::move(f_prev), std::move(f_curr), 1, cfg.dt};
  for (int n = 1; n < n_steps; ++n) {
    t_step = Clock::now();
    const bool final_short = short_final && n == n_steps - 1;
    const BgkOperators* step_ops = &ops;
    BgkOperators short_ops;
    BgkConfig step_cfg = cfg;
    if (final_short) {
      step_cfg.dt = last_dt;
      short_ops = build_bgk_operators(cfg, last_dt);
      step_ops = &short_ops;
    }
    auto [f_next, report] = cnlf_step(state, step_cfg, *step_ops);
    const double t_next = state.t + step_cfg.dt;
    if (!report.converged) {
      SimulationState st{state.f_curr, f_next, n + 1, t_next};
      emit(make_record(n + 1, t_next, f_next, cfg, report.sweeps_used, report.final_residual,
                       ms_since(t_step)),
           st);
      throw SolverError("alternating solver did not reach tolerance " +
                        std::to_string(cfg.eps_d) + " at step " + std::to_string(n + 1) +
                        " (residual " + std::to_string(report.final_residual) + " after " +
                        std::to_string(report.sweeps_used) + " sweeps)");
    }
    state.f_prev = std::move(state.f_curr);
    state.f_curr = std::move(f_next);
    state.n = n + 1;
    state.t = t_next;
    emit(make_record(state.n, state.t, state.f_curr, cfg, report.sweeps_used,
                     report.final_residual, ms_since(t_step)),
         state);
  }

  diag.total_wall_ms = ms_since(t0);
  return diag;
}

}  // namespace aptt
