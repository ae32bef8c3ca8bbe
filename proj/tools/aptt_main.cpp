// Command-line front end for the low-rank kinetic solver.
//
// Exit codes: 0 success, 2 configuration error, 3 solver non-convergence,
// 4 positivity failure, 5 I/O failure, 1 unexpected error.

#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aptt/config.hpp"
#include "aptt/diagnostics.hpp"
#include "aptt/drivers.hpp"
#include "aptt/errors.hpp"

namespace {

struct CliFlags {
  aptt::ConfigOverrides overrides;
  std::optional<std::string> config_path;
};

void add_common_flags(CLI::App& cmd, CliFlags& f) {
  auto opt_str = [&cmd](const char* name, std::optional<std::string>& dst, const char* help) {
    cmd.add_option_function<std::string>(
        name, [&dst](const std::string& v) { dst = v; }, help);
  };
  auto opt_int = [&cmd](const char* name, std::optional<int>& dst, const char* help) {
    cmd.add_option_function<int>(
        name, [&dst](int v) { dst = v; }, help);
  };
  auto opt_dbl = [&cmd](const char* name, std::optional<double>& dst, const char* help) {
    cmd.add_option_function<double>(
        name, [&dst](double v) { dst = v; }, help);
  };
  opt_str("--scenario", f.overrides.scenario, "trig | relaxation | discontinuous");
  opt_int("--dim", f.overrides.dim, "spatial dimension (1, 2 or 3)");
  opt_int("--m", f.overrides.m, "grid points per mode");
  opt_dbl("--dt", f.overrides.dt, "time step");
  opt_dbl("--t-star", f.overrides.t_star, "final time");
  opt_dbl("--kn", f.overrides.kn, "Knudsen number");
  opt_dbl("--bo", f.overrides.bo, "Boltzmann number");
  opt_dbl("--eps-b", f.overrides.eps_b, "compression tolerance");
  opt_dbl("--eps-d", f.overrides.eps_d, "solver residual tolerance");
  opt_dbl("--dissipation", f.overrides.dissipation, "artificial viscosity coefficient (0 = off)");
  opt_str("--out", f.overrides.out, "output directory");
  cmd.add_option_function<std::string>(
      "--config", [&f](const std::string& v) { f.config_path = v; },
      "flat key = value configuration file");
}

int run_command(const CliFlags& flags, bool compare_oracle) {
  aptt::ConfigOverrides ov = flags.overrides;
  if (compare_oracle) ov.compare_oracle = true;
  const aptt::ResolvedConfig rc = aptt::load_config(flags.config_path, ov);
  const aptt::RunScenarioResult res = aptt::run_scenario(rc);
  std::cout << "run complete: " << res.diag.rows.back().n << " steps, average rank "
            << res.diag.average_rank() << "\n";
  std::cout << "diagnostics: " << res.csv_path << "\n";
  std::cout << res.drift.to_string();
  return 0;
}

int converge_command(const CliFlags& flags, const std::vector<int>& m_list) {
  const aptt::ResolvedConfig rc = aptt::load_config(flags.config_path, flags.overrides);
  const aptt::ConvergenceStudy study = aptt::convergence_study(rc.scenario, m_list, rc.cfg);
  std::cout << study.to_string();
  return 0;
}

int report_command(const std::string& csv_path) {
  int dim = 0;
  bool has_oracle = false;
  const aptt::RunDiagnostics diag = aptt::read_diagnostics_csv(csv_path, dim, has_oracle);
  std::cout << "rows: " << diag.rows.size() << " (dim " << dim << ")\n";
  std::cout << aptt::conservation_report(diag).to_string();
  if (has_oracle) {
    double worst = 0.0;
    for (const auto& r : diag.rows)
      if (r.rel_err_oracle) worst = std::max(worst, *r.rel_err_oracle);
    std::cout << "max relative error vs dense reference: " << worst << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank tensor-train solver for the Boltzmann-BGK equation"};
  app.require_subcommand(1);

  CliFlags run_flags;
  bool compare_oracle = false;
  CLI::App* run = app.add_subcommand("run", "simulate one scenario");
  add_common_flags(*run, run_flags);
  run->add_flag("--compare-oracle", compare_oracle,
                "advance the dense reference in lock step and record relative errors");

  CliFlags conv_flags;
  std::vector<int> m_list{8, 16, 32};
  CLI::App* conv = app.add_subcommand("converge", "self-convergence study over grid levels");
  add_common_flags(*conv, conv_flags);
  conv->add_option("--m-list", m_list, "ascending grid levels (reference is 2*max)");

  std::string csv_path;
  CLI::App* rep = app.add_subcommand("report", "conservation summary of a diagnostics CSV");
  rep->add_option("--csv", csv_path, "diagnostics CSV produced by `run`")->required();

  try {
    app.parse(argc, argv);
    if (run->parsed()) return run_command(run_flags, compare_oracle);
    if (conv->parsed()) return converge_command(conv_flags, m_list);
    if (rep->parsed()) return report_command(csv_path);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const aptt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const aptt::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const aptt::PositivityError& e) {
    std::cerr << "positivity failure: " << e.what() << "\n";
    return 4;
  } catch (const aptt::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
