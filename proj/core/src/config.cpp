#include "aptt/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "aptt/errors.hpp"

namespace aptt {

namespace {

struct KeyValue {
  std::string key;
  std::string value;
  int line;
};

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<KeyValue> parse_lines(const std::string& text, const std::string& origin) {
  std::vector<KeyValue> kvs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    KeyValue kv{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
    if (kv.key.empty() || kv.value.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
    kvs.push_back(std::move(kv));
  }
  return kvs;
}

double parse_double(const KeyValue& kv, const std::string& origin) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin + ":" + std::to_string(kv.line) + ": bad number for '" + kv.key +
                      "': " + kv.value);
  }
}

int parse_int(const KeyValue& kv, const std::string& origin) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(origin + ":" + std::to_string(kv.line) + ": bad integer for '" + kv.key +
                      "': " + kv.value);
  }
}

bool parse_bool(const KeyValue& kv, const std::string& origin) {
  if (kv.value == "true" || kv.value == "1") return true;
  if (kv.value == "false" || kv.value == "0") return false;
  throw ConfigError(origin + ":" + std::to_string(kv.line) + ": bad boolean for '" + kv.key +
                    "': " + kv.value);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ResolvedConfig resolve_config_text(const std::string& text, const std::string& origin,
                                   const ConfigOverrides& flags) {
  const std::vector<KeyValue> kvs = parse_lines(text, origin);

  std::string scenario_name = "trig";
  for (const auto& kv : kvs)
    if (kv.key == "scenario") scenario_name = kv.value;
  if (flags.scenario) scenario_name = *flags.scenario;

  ResolvedConfig rc;
  rc.scenario = Scenario::by_name(scenario_name);
  rc.scenario.apply_defaults(rc.cfg);

  for (const auto& kv : kvs) {
    if (kv.key == "scenario") {
      Scenario::by_name(kv.value);  // validated above
    } else if (kv.key == "dim") {
      rc.cfg.dim = parse_int(kv, origin);
    } else if (kv.key == "m") {
      rc.cfg.m = parse_int(kv, origin);
    } else if (kv.key == "dt") {
      rc.cfg.dt = parse_double(kv, origin);
    } else if (kv.key == "t_star") {
      rc.cfg.t_star = parse_double(kv, origin);
    } else if (kv.key == "kn") {
      rc.cfg.kn = parse_double(kv, origin);
    } else if (kv.key == "bo") {
      rc.cfg.bo = parse_double(kv, origin);
    } else if (kv.key == "k_coll") {
      rc.cfg.k_coll = parse_double(kv, origin);
    } else if (kv.key == "mu") {
      rc.cfg.mu = parse_double(kv, origin);
    } else if (kv.key == "eps_b") {
      rc.cfg.eps_b = parse_double(kv, origin);
    } else if (kv.key == "eps_d") {
      rc.cfg.eps_d = parse_double(kv, origin);
    } else if (kv.key == "dissipation") {
      rc.cfg.eps_diss = parse_double(kv, origin);
    } else if (kv.key == "mals_max_sweeps") {
      rc.cfg.mals_max_sweeps = parse_int(kv, origin);
    } else if (kv.key == "compare_oracle") {
      rc.compare_oracle = parse_bool(kv, origin);
    } else if (kv.key == "out") {
      rc.out_dir = kv.value;
    } else {
      throw ConfigError(origin + ":" + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
    }
  }

  if (flags.dim) rc.cfg.dim = *flags.dim;
  if (flags.m) rc.cfg.m = *flags.m;
  if (flags.dt) rc.cfg.dt = *flags.dt;
  if (flags.t_star) rc.cfg.t_star = *flags.t_star;
  if (flags.kn) rc.cfg.kn = *flags.kn;
  if (flags.bo) rc.cfg.bo = *flags.bo;
  if (flags.k_coll) rc.cfg.k_coll = *flags.k_coll;
  if (flags.mu) rc.cfg.mu = *flags.mu;
  if (flags.eps_b) rc.cfg.eps_b = *flags.eps_b;
  if (flags.eps_d) rc.cfg.eps_d = *flags.eps_d;
  if (flags.dissipation) rc.cfg.eps_diss = *flags.dissipation;
  if (flags.compare_oracle) rc.compare_oracle = *flags.compare_oracle;
  if (flags.out) rc.out_dir = *flags.out;

  rc.cfg.validate();
  return rc;
}

ResolvedConfig load_config(const std::optional<std::string>& path, const ConfigOverrides& flags) {
  std::string text;
  std::string origin = "<defaults>";
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("cannot open config file: " + *path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    origin = *path;
  }
  return resolve_config_text(text, origin, flags);
}

std::string dump_config(const ResolvedConfig& rc) {
  std::ostringstream os;
  os << "# resolved run configuration\n";
  os << "scenario = " << rc.scenario.name << "\n";
  os << "dim = " << rc.cfg.dim << "\n";
  os << "m = " << rc.cfg.m << "\n";
  os << "dt = " << format_double(rc.cfg.dt) << "\n";
  os << "t_star = " << format_double(rc.cfg.t_star) << "\n";
  os << "kn = " << format_double(rc.cfg.kn) << "\n";
  os << "bo = " << format_double(rc.cfg.bo) << "\n";
  os << "k_coll = " << format_double(rc.cfg.k_coll) << "\n";
  os << "mu = " << format_double(rc.cfg.mu) << "\n";
  os << "eps_b = " << format_double(rc.cfg.eps_b) << "\n";
  os << "eps_d = " << format_double(rc.cfg.eps_d) << "\n";
  os << "dissipation = " << format_double(rc.cfg.eps_diss) << "\n";
  os << "mals_max_sweeps = " << rc.cfg.mals_max_sweeps << "\n";
  os << "compare_oracle = " << (rc.compare_oracle ? "true" : "false") << "\n";
  os << "out = " << rc.out_dir << "\n";
  return os.str();
}

}  // namespace aptt
