#include "aptt/drivers.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "aptt/dense_oracle.hpp"
#include "aptt/errors.hpp"
#include "aptt/io.hpp"

namespace aptt {

namespace fs = std::filesystem;

namespace {

constexpr std::int64_t kDenseDumpLimit = 1 << 22;

/// Advances the dense reference trajectory in lock step with the train run
/// and measures the relative Frobenius gap at each level.
class OracleComparer {
 public:
  explicit OracleComparer(const ResolvedConfig& rc)
      : oracle_(rc.cfg), f_prev_(rc.scenario.initial_dense(rc.cfg)) {}

  double error_for(int n, const TtTensor& f) {
    if (n == 1) {
      f_curr_ = oracle_.bootstrap(f_prev_);
    } else if (n >= 2) {
      DenseTensor f_next = oracle_.cnlf_step(f_prev_, f_curr_);
      f_prev_ = std::move(f_curr_);
      f_curr_ = std::move(f_next);
    }
    const DenseTensor& ref = (n == 0) ? f_prev_ : f_curr_;
    const DenseTensor mine = tt_to_dense(f, ref.size());
    double num = 0.0;
    for (std::int64_t k = 0; k < ref.size(); ++k) {
      const double d = mine[k] - ref[k];
      num += d * d;
    }
    return std::sqrt(num) / ref.frobenius_norm();
  }

 private:
  DenseOracle oracle_;
  DenseTensor f_prev_;
  DenseTensor f_curr_;
};

}  // namespace

RunScenarioResult run_scenario(const ResolvedConfig& rc) {
  rc.cfg.validate();
  std::error_code ec;
  fs::create_directories(rc.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + rc.out_dir + ": " + ec.message());

  RunScenarioResult result;
  result.csv_path = (fs::path(rc.out_dir) / "diagnostics.csv").string();
  result.field_tt_path = (fs::path(rc.out_dir) / "final_field.tt").string();
  result.summary_path = (fs::path(rc.out_dir) / "summary.txt").string();
  result.config_path = (fs::path(rc.out_dir) / "config_resolved.cfg").string();

  {
    std::ofstream cfg_out(result.config_path);
    if (!cfg_out) throw IoError("cannot write " + result.config_path);
    cfg_out << dump_config(rc);
  }

  std::ofstream csv(result.csv_path);
  if (!csv) throw IoError("cannot write " + result.csv_path);
  csv << diagnostics_csv_header(rc.cfg.dim, rc.compare_oracle) << "\n";

  std::optional<OracleComparer> comparer;
  if (rc.compare_oracle) {
    try {
      comparer.emplace(rc);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--compare-oracle unavailable: ") + e.what());
    }
  }

  TtTensor f0 = rc.scenario.initial_tt(rc.cfg);
  TtTensor final_f = f0;
  std::vector<StepRecord> rows;

  auto finalize = [&](const std::string& status) {
    result.diag.rows = rows;
    result.drift = conservation_report(result.diag);
    std::ofstream sum(result.summary_path);
    sum << "scenario: " << rc.scenario.name << "\n";
    sum << "status: " << status << "\n";
    sum << "steps completed: " << (rows.empty() ? 0 : rows.back().n) << "\n";
    sum << "average rank: " << result.diag.average_rank() << "\n";
    sum << "max rank: " << result.diag.max_rank() << "\n";
    sum << "total wall ms: " << result.diag.total_wall_ms << "\n";
    if (!result.diag.note.empty()) sum << "note: " << result.diag.note << "\n";
    sum << result.drift.to_string();
  };

  RunDiagnostics diag;
  try {
    diag = run_simulation(f0, rc.cfg, [&](const StepRecord& rec, const SimulationState& st) {
      StepRecord row = rec;
      if (comparer) row.rel_err_oracle = comparer->error_for(rec.n, st.f_curr);
      csv << diagnostics_csv_row(row, rc.cfg.dim, rc.compare_oracle) << "\n";
      csv.flush();
      rows.push_back(std::move(row));
      if (rec.n >= 1) final_f = st.f_curr;
    });
  } catch (...) {
    finalize("aborted");
    throw;
  }
  result.diag.total_wall_ms = diag.total_wall_ms;
  result.diag.note = diag.note;

  write_tt_field(result.field_tt_path, final_f, rc.cfg.dim);
  if (shape_size(rc.cfg.phase_dims()) <= kDenseDumpLimit) {
    result.field_bin_path = (fs::path(rc.out_dir) / "final_field.bin").string();
    write_dense_field(result.field_bin_path, tt_to_dense(final_f), rc.cfg.dim);
  }

  finalize("completed");
  return result;
}

ConvergenceStudy convergence_study(const Scenario& scenario, const std::vector<int>& m_list,
                                   const BgkConfig& base) {
  if (m_list.empty()) throw ConfigError("convergence study needs at least one level");
  for (std::size_t i = 1; i < m_list.size(); ++i)
    if (m_list[i] <= m_list[i - 1]) throw ConfigError("m levels must be strictly ascending");
  for (int m : m_list)
    if ((2 * m_list.back()) % m != 0)
      throw ConfigError("reference level must be an even multiple of every m");

  ConvergenceStudy study;
  study.reference_m = 2 * m_list.back();
  study.note = "reference level is a solver run at m = " + std::to_string(study.reference_m) +
               " (scaled-down self-convergence study)";

  auto run_level = [&](int m) {
    BgkConfig cfg = base;
    cfg.m = m;
    cfg.dt = 1.0 / (4.0 * m);
    cfg.validate();
    TtTensor f0 = scenario.initial_tt(cfg);
    TtTensor last = f0;
    run_simulation(f0, cfg, [&](const StepRecord&, const SimulationState& st) {
      last = st.f_curr;
    });
    return last;
  };

  const TtTensor ref = run_level(study.reference_m);
  const double ref_norm = tt_norm(ref);

  double prev_error = 0.0;
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    const int m = m_list[i];
    const TtTensor sol = run_level(m);
    const TtTensor ref_c = tt_subsample(ref, study.reference_m / m);
    const TtTensor diff = tt_add(sol, tt_scale(ref_c, -1.0));
    const double h = 2.0 * std::numbers::pi / m;
    const double l2 = std::pow(h, sol.order() / 2.0) * tt_norm(diff);

    ConvergenceLevel lvl;
    lvl.m = m;
    lvl.error = l2;
    const double floor = 1e-12 * ref_norm;
    if (i == 0 || prev_error < floor || l2 < floor)
      lvl.order = std::nan("");
    else
      lvl.order = std::log2(prev_error / l2);
    prev_error = l2;
    study.levels.push_back(lvl);
  }
  return study;
}

std::string ConvergenceStudy::to_string() const {
  std::ostringstream os;
  os << "m      L2 error       order\n";
  for (const auto& l : levels) {
    os << l.m << "    " << l.error << "    ";
    if (std::isnan(l.order))
      os << "n/a";
    else
      os << l.order;
    os << "\n";
  }
  os << "# " << note << "\n";
  return os.str();
}

}  // namespace aptt
