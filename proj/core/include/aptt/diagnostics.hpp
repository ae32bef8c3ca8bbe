#pragma once

#include <iosfwd>
#include <string>

#include "aptt/time_loop.hpp"

namespace aptt {

/// CSV schema (documented in the README):
///   step,time,rank_max,rank_avg,mals_sweeps,mals_residual,mass,
///   momentum_1..momentum_D,energy[,rel_err_oracle],wall_ms
/// Doubles are written with 17 significant digits so rows parse back
/// losslessly.
std::string diagnostics_csv_header(int dim, bool with_oracle_col);
std::string diagnostics_csv_row(const StepRecord& r, int dim, bool with_oracle_col);
void write_diagnostics_csv(const std::string& path, const RunDiagnostics& diag, int dim,
                           bool with_oracle_col);

/// Parses a diagnostics CSV produced by this project; infers the spatial
/// dimension and the presence of the oracle column from the header.
RunDiagnostics read_diagnostics_csv(const std::string& path, int& dim_out, bool& has_oracle_out);

/// Max drift of each conserved quantity over a run, raw and normalized by the
/// initial magnitude.  Quantities whose initial value is (numerically) zero
/// are reported as absolute drifts instead.
struct DriftReport {
  struct Entry {
    std::string name;
    double initial = 0.0;
    double raw = 0.0;        // max_n |q_n - q_0|
    double normalized = 0.0; // raw / |q_0|, or raw when reported absolute
    bool absolute = false;
  };
  std::vector<Entry> entries;

  std::string to_string() const;
  double max_normalized() const;
};

DriftReport conservation_report(const RunDiagnostics& diag);

}  // namespace aptt
