#include "aptt/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "aptt/errors.hpp"

namespace aptt {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string diagnostics_csv_header(int dim, bool with_oracle_col) {
  std::ostringstream os;
  os << "step,time,rank_max,rank_avg,mals_sweeps,mals_residual,mass";
  for (int i = 1; i <= dim; ++i) os << ",momentum_" << i;
  os << ",energy";
  if (with_oracle_col) os << ",rel_err_oracle";
  os << ",wall_ms";
  return os.str();
}

std::string diagnostics_csv_row(const StepRecord& r, int dim, bool with_oracle_col) {
  std::ostringstream os;
  os << r.n << "," << fmt(r.t) << "," << r.rank_max << "," << fmt(r.rank_avg) << ","
     << r.mals_sweeps << "," << fmt(r.mals_residual) << "," << fmt(r.mass);
  for (int i = 0; i < dim; ++i)
    os << "," << fmt(i < static_cast<int>(r.momentum.size()) ? r.momentum[static_cast<std::size_t>(i)] : 0.0);
  os << "," << fmt(r.energy);
  if (with_oracle_col) os << "," << fmt(r.rel_err_oracle.value_or(std::nan("")));
  os << "," << fmt(r.wall_ms);
  return os.str();
}

void write_diagnostics_csv(const std::string& path, const RunDiagnostics& diag, int dim,
                           bool with_oracle_col) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write diagnostics CSV: " + path);
  out << diagnostics_csv_header(dim, with_oracle_col) << "\n";
  for (const auto& r : diag.rows) out << diagnostics_csv_row(r, dim, with_oracle_col) << "\n";
  if (!out) throw IoError("write failure on diagnostics CSV: " + path);
}

RunDiagnostics read_diagnostics_csv(const std::string& path, int& dim_out, bool& has_oracle_out) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open diagnostics CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty diagnostics CSV: " + path);
  const auto header = split_csv(line);

  int dim = 0;
  bool has_oracle = false;
  for (const auto& col : header) {
    if (col.rfind("momentum_", 0) == 0) ++dim;
    if (col == "rel_err_oracle") has_oracle = true;
  }
  const std::size_t expected = 8 + static_cast<std::size_t>(dim) + (has_oracle ? 1 : 0);
  if (dim < 1 || header.size() != expected)
    throw IoError("unrecognized diagnostics CSV header: " + path);

  RunDiagnostics diag;
  int prev_n = -1;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != expected)
      throw IoError(path + ":" + std::to_string(lineno) + ": wrong column count");
    StepRecord r;
    std::size_t k = 0;
    r.n = std::stoi(f[k++]);
    r.t = std::stod(f[k++]);
    r.rank_max = std::stoi(f[k++]);
    r.rank_avg = std::stod(f[k++]);
    r.mals_sweeps = std::stoi(f[k++]);
    r.mals_residual = std::stod(f[k++]);
    r.mass = std::stod(f[k++]);
    for (int i = 0; i < dim; ++i) r.momentum.push_back(std::stod(f[k++]));
    r.energy = std::stod(f[k++]);
    if (has_oracle) {
      const double v = std::stod(f[k++]);
      if (!std::isnan(v)) r.rel_err_oracle = v;
    }
    r.wall_ms = std::stod(f[k++]);
    if (r.n <= prev_n) throw IoError(path + ": step numbers must increase");
    prev_n = r.n;
    diag.rows.push_back(std::move(r));
  }
  dim_out = dim;
  has_oracle_out = has_oracle;
  return diag;
}

DriftReport conservation_report(const RunDiagnostics& diag) {
  if (diag.rows.empty()) return {};
  const StepRecord& base = diag.rows.front();
  const int dim = static_cast<int>(base.momentum.size());

  DriftReport rep;
  auto add = [&](const std::string& name, auto getter) {
    DriftReport::Entry e;
    e.name = name;
    e.initial = getter(base);
    double scale = 0.0;
    for (const auto& r : diag.rows) {
      e.raw = std::max(e.raw, std::abs(getter(r) - e.initial));
      scale = std::max(scale, std::abs(getter(r)));
    }
    // Momentum components starting at (numerical) zero are reported as
    // absolute drifts; a relative drift against ~0 is meaningless.
    e.absolute = std::abs(e.initial) <= 1e-10 * std::max(scale, 1.0);
    e.normalized = e.absolute ? e.raw : e.raw / std::abs(e.initial);
    rep.entries.push_back(std::move(e));
  };

  add("mass", [](const StepRecord& r) { return r.mass; });
  for (int i = 0; i < dim; ++i)
    add("momentum_" + std::to_string(i + 1),
        [i](const StepRecord& r) { return r.momentum[static_cast<std::size_t>(i)]; });
  add("energy", [](const StepRecord& r) { return r.energy; });
  return rep;
}

std::string DriftReport::to_string() const {
  std::ostringstream os;
  os << "conservation drift (max over run)\n";
  for (const auto& e : entries) {
    os << "  " << e.name << ": raw " << fmt(e.raw);
    if (e.absolute)
      os << " (absolute; initial ~ 0)";
    else
      os << ", normalized " << fmt(e.normalized) << " (initial " << fmt(e.initial) << ")";
    os << "\n";
  }
  return os.str();
}

double DriftReport::max_normalized() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.normalized);
  return m;
}

}  // namespace aptt
