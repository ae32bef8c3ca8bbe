#include "aptt/scenario.hpp"

#include <cmath>
#include <numbers>

#include "aptt/errors.hpp"

namespace aptt {

namespace {

constexpr double kPi = std::numbers::pi;

/// Evaluate a scalar field over the spatial grid.
template <typename F>
DenseTensor spatial_field(const BgkConfig& cfg, const F& f) {
  const Grid g = cfg.grid();
  std::vector<int> dims(static_cast<std::size_t>(cfg.dim), g.m);
  DenseTensor out(dims);
  std::vector<double> x(static_cast<std::size_t>(cfg.dim));
  for (std::int64_t k = 0; k < out.size(); ++k) {
    std::int64_t rem = k;
    for (int i = 0; i < cfg.dim; ++i) {
      x[static_cast<std::size_t>(i)] = g.nodes(static_cast<int>(rem % g.m));
      rem /= g.m;
    }
    out[k] = f(x);
  }
  return out;
}

MacroFields trig_fields(const BgkConfig& cfg) {
  MacroFields mf;
  mf.rho = spatial_field(cfg, [&](const std::vector<double>& x) {
    double p = 1.0;
    for (double xi : x) p *= std::sin(xi);
    return 1.0 + 0.5 * p;
  });
  mf.temp = spatial_field(cfg, [](const std::vector<double>&) { return 1.0; });
  for (int i = 0; i < cfg.dim; ++i)
    mf.u.push_back(spatial_field(cfg, [](const std::vector<double>&) { return 0.0; }));
  return mf;
}

MacroFields relaxation_fields(const BgkConfig& cfg) {
  MacroFields mf;
  mf.rho = spatial_field(cfg, [](const std::vector<double>& x) {
    double p = 1.0;
    for (double xi : x) p *= 1.0 + 0.5 * std::cos(xi);
    return p;
  });
  mf.temp = spatial_field(cfg, [](const std::vector<double>& x) {
    return 1.0 + 0.0025 * std::cos(x[0]);
  });
  for (int i = 0; i < cfg.dim; ++i) {
    mf.u.push_back(spatial_field(cfg, [&, i](const std::vector<double>& x) -> double {
      if (i == 0) return cfg.dim >= 2 ? 1.0 + 0.025 * std::sin(x[1] - 1.0) : 1.0;
      if (i == 2) return 0.025 * std::sin(x[0] - 2.0);
      return 0.0;
    }));
  }
  return mf;
}

MacroFields discontinuous_fields(const BgkConfig& cfg) {
  MacroFields mf;
  mf.rho = spatial_field(cfg, [](const std::vector<double>& x) {
    double mx = 0.0;
    for (double xi : x) mx = std::max(mx, std::abs(xi));
    return mx <= kPi / 8.0 ? 10.0 : 1.0;
  });
  mf.temp = spatial_field(cfg, [](const std::vector<double>&) { return 1.0; });
  for (int i = 0; i < cfg.dim; ++i)
    mf.u.push_back(spatial_field(cfg, [](const std::vector<double>&) { return 0.0; }));
  return mf;
}

/// Relaxation initial factor: quartic exponent instead of the Maxwellian's
/// quadratic one, so the state starts away from local equilibrium.
DenseTensor quartic_factor_dense(const MacroFields& mf, const BgkConfig& cfg, int i) {
  const Grid g = cfg.grid();
  const std::int64_t nx = mf.rho.size();
  std::vector<int> dims(static_cast<std::size_t>(cfg.dim) + 1, g.m);
  DenseTensor out(dims);
  const double* rho = mf.rho.data();
  const double* uu = mf.u[static_cast<std::size_t>(i)].data();
  const double* tt = mf.temp.data();
  const double inv_d = 1.0 / cfg.dim;
  for (std::int64_t k = 0; k < nx; ++k) {
    const double amp =
        std::pow(rho[k], inv_d) / std::sqrt(2.0 * kPi * tt[k] / cfg.bo);
    const double c = cfg.bo / (2.0 * tt[k]);
    for (int l = 0; l < g.m; ++l) {
      const double dv = uu[k] - g.nodes(l);
      const double dv2 = dv * dv;
      out[k + nx * l] = amp * std::exp(-c * dv2 * dv2);
    }
  }
  return out;
}

}  // namespace

Scenario Scenario::by_name(const std::string& name) {
  if (name == "trig") return {ScenarioKind::trig, name};
  if (name == "relaxation") return {ScenarioKind::relaxation, name};
  if (name == "discontinuous") return {ScenarioKind::discontinuous, name};
  throw ConfigError("unknown scenario '" + name + "' (expected trig, relaxation or discontinuous)");
}

void Scenario::apply_defaults(BgkConfig& cfg) const {
  switch (kind) {
    case ScenarioKind::trig:
      break;
    case ScenarioKind::relaxation:
      cfg.dim = 3;
      cfg.kn = 10.0;
      cfg.dt = 0.005;
      break;
    case ScenarioKind::discontinuous:
      cfg.dim = 3;
      cfg.kn = 10.0;
      cfg.dt = 0.002;
      cfg.eps_b = 1e-5;
      cfg.eps_d = 1e-5;
      cfg.eps_diss = 0.1;
      break;
  }
}

MacroFields Scenario::initial_fields(const BgkConfig& cfg) const {
  switch (kind) {
    case ScenarioKind::trig:
      return trig_fields(cfg);
    case ScenarioKind::relaxation:
      return relaxation_fields(cfg);
    case ScenarioKind::discontinuous:
      return discontinuous_fields(cfg);
  }
  throw ConfigError("invalid scenario");
}

std::vector<DenseTensor> Scenario::initial_factors(const BgkConfig& cfg) const {
  const MacroFields mf = initial_fields(cfg);
  mf.validate();
  std::vector<DenseTensor> factors;
  factors.reserve(static_cast<std::size_t>(cfg.dim));
  for (int i = 0; i < cfg.dim; ++i) {
    if (kind == ScenarioKind::relaxation)
      factors.push_back(quartic_factor_dense(mf, cfg, i));
    else
      factors.push_back(equilibrium_factor_dense(mf, cfg, i));
  }
  return factors;
}

TtTensor Scenario::initial_tt(const BgkConfig& cfg) const {
  return compress_velocity_factor_product(initial_factors(cfg), cfg, cfg.eps_b);
}

DenseTensor Scenario::initial_dense(const BgkConfig& cfg, std::int64_t max_entries) const {
  const std::int64_t total = shape_size(cfg.phase_dims());
  if (total > max_entries)
    throw std::invalid_argument("initial_dense: phase-space tensor too large (" +
                                std::to_string(total) + " entries)");
  const std::vector<DenseTensor> factors = initial_factors(cfg);
  const std::int64_t nx = shape_size(std::vector<int>(static_cast<std::size_t>(cfg.dim), cfg.m));

  DenseTensor out(cfg.phase_dims());
  const std::int64_t nv = total / nx;
  for (std::int64_t lv = 0; lv < nv; ++lv) {
    std::int64_t rem = lv;
    std::vector<int> l(static_cast<std::size_t>(cfg.dim));
    for (int i = 0; i < cfg.dim; ++i) {
      l[static_cast<std::size_t>(i)] = static_cast<int>(rem % cfg.m);
      rem /= cfg.m;
    }
    double* dst = out.data() + lv * nx;
    for (std::int64_t k = 0; k < nx; ++k) {
      double p = 1.0;
      for (int i = 0; i < cfg.dim; ++i)
        p *= factors[static_cast<std::size_t>(i)][k + nx * l[static_cast<std::size_t>(i)]];
      dst[k] = p;
    }
  }
  return out;
}

}  // namespace aptt
