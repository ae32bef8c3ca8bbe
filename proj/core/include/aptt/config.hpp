#pragma once

#include <optional>
#include <string>

#include "aptt/bgk.hpp"
#include "aptt/scenario.hpp"

namespace aptt {

/// Fully resolved run setup.
struct ResolvedConfig {
  BgkConfig cfg;
  Scenario scenario;
  bool compare_oracle = false;
  std::string out_dir = "out";
};

/// Values supplied on the command line; unset fields leave the file/default
/// value in place.
struct ConfigOverrides {
  std::optional<std::string> scenario;
  std::optional<int> dim;
  std::optional<int> m;
  std::optional<double> dt;
  std::optional<double> t_star;
  std::optional<double> kn;
  std::optional<double> bo;
  std::optional<double> k_coll;
  std::optional<double> mu;
  std::optional<double> eps_b;
  std::optional<double> eps_d;
  std::optional<double> dissipation;
  std::optional<bool> compare_oracle;
  std::optional<std::string> out;
};

/// Resolution order: built-in defaults, scenario defaults, config file,
/// command-line flags.  The file is flat `key = value` text with `#`
/// comments; unknown keys are rejected with their line number.  The resolved
/// configuration is validated before it is returned.
ResolvedConfig load_config(const std::optional<std::string>& path, const ConfigOverrides& flags);

/// Same, from config text already in memory (file name used in messages).
ResolvedConfig resolve_config_text(const std::string& text, const std::string& origin,
                                   const ConfigOverrides& flags);

/// Serialized form that load_config parses back to an identical setup.
std::string dump_config(const ResolvedConfig& rc);

}  // namespace aptt
