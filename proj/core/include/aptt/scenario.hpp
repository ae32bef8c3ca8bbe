#pragma once

#include <string>

#include "aptt/bgk.hpp"

namespace aptt {

enum class ScenarioKind {
  trig,           // Maxwellian, rho = 1 + 0.5*prod sin(x_i), U = 0, T = 1
  relaxation,     // non-Maxwellian quartic-exponent factors, relaxes to equilibrium
  discontinuous,  // Maxwellian with a 10:1 density box jump
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::trig;
  std::string name = "trig";

  static Scenario by_name(const std::string& name);

  /// Scenario-specific default parameter overrides (time step, Knudsen
  /// number, tolerances, dissipation), applied before file/flag overrides.
  void apply_defaults(BgkConfig& cfg) const;

  /// Initial macroscopic fields on the spatial grid.
  MacroFields initial_fields(const BgkConfig& cfg) const;

  /// Initial condition as a compressed train at cfg.eps_b, built factor-wise.
  TtTensor initial_tt(const BgkConfig& cfg) const;

  /// Initial condition as a dense phase-space tensor (guarded).
  DenseTensor initial_dense(const BgkConfig& cfg, std::int64_t max_entries = 10'000'000) const;

  /// The dense (D+1)-mode velocity factors whose product is the initial PDF.
  std::vector<DenseTensor> initial_factors(const BgkConfig& cfg) const;
};

}  // namespace aptt
