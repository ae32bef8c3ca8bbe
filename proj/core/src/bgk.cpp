#include "aptt/bgk.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "aptt/errors.hpp"

namespace aptt {

namespace {

std::string node_string(const std::vector<int>& idx) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
  os << ")";
  return os.str();
}

/// Contract the velocity-side cores (modes D..2D-1) with one weight vector
/// per velocity mode; returns a vector over the spatial/velocity split bond.
Eigen::VectorXd velocity_chain(const TtTensor& f, const std::vector<Eigen::VectorXd>& w) {
  const int d = f.order();
  const int half = d / 2;
  const TtCore& last = f.core(d - 1);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(last.r_left, 1);
  for (int j = 0; j < last.n; ++j) acc += w.back()(j) * last.slice(j);
  for (int i = d - 2; i >= half; --i) {
    const TtCore& c = f.core(i);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(c.r_left, c.r_right);
    for (int j = 0; j < c.n; ++j) m += w[static_cast<std::size_t>(i - half)](j) * c.slice(j);
    acc = m * acc;
  }
  return acc.col(0);
}

}  // namespace

double BgkConfig::h() const { return 2.0 * std::numbers::pi / m; }

void BgkConfig::validate() const {
  if (dim < 1 || dim > 3) throw ConfigError("dim must be 1, 2 or 3");
  if (m < 4 || m % 2 != 0) throw ConfigError("m must be even and >= 4");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(t_star > 0.0)) throw ConfigError("t_star must be positive");
  if (!(kn > 0.0)) throw ConfigError("kn must be positive");
  if (!(bo > 0.0)) throw ConfigError("bo must be positive");
  if (!(k_coll > 0.0)) throw ConfigError("k_coll must be positive");
  if (!(eps_b > 0.0 && eps_b < 1.0)) throw ConfigError("eps_b must lie in (0, 1)");
  if (!(eps_d > 0.0 && eps_d < 1.0)) throw ConfigError("eps_d must lie in (0, 1)");
  if (eps_diss < 0.0) throw ConfigError("dissipation coefficient must be >= 0");
  if (mals_max_sweeps < 1) throw ConfigError("mals_max_sweeps must be >= 1");
}

void MacroFields::validate() const {
  for (std::int64_t k = 0; k < rho.size(); ++k) {
    if (!(rho[k] > 0.0))
      throw PositivityError("density not strictly positive at node " +
                                node_string(rho.multi_index(k)) +
                                " (no-vacuum assumption violated; tolerances may be too loose)",
                            rho.multi_index(k));
  }
  for (std::int64_t k = 0; k < temp.size(); ++k) {
    if (!(temp[k] > 0.0))
      throw PositivityError("temperature not strictly positive at node " +
                                node_string(temp.multi_index(k)) +
                                " (no-absolute-zero assumption violated)",
                            temp.multi_index(k));
  }
}

MacroFields compute_moments(const TtTensor& f, const BgkConfig& cfg) {
  const int dd = cfg.dim;
  if (f.order() != 2 * dd) throw std::invalid_argument("compute_moments: tensor order must be 2*dim");
  const Grid g = cfg.grid();
  const double hd = std::pow(g.h, dd);

  DenseTensor y = partial_reduce_spatial(f);
  const int rd = y.dims().back();
  const std::int64_t nx = y.size() / rd;
  Eigen::Map<const Eigen::MatrixXd> ymat(y.data(), nx, rd);

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.m);
  const Eigen::VectorXd v1 = g.nodes;
  const Eigen::VectorXd v2 = g.nodes.array().square();

  std::vector<Eigen::VectorXd> w(static_cast<std::size_t>(dd), ones);
  const Eigen::VectorXd s0 = velocity_chain(f, w);

  std::vector<int> xdims(static_cast<std::size_t>(dd), g.m);
  MacroFields mf;
  mf.rho = DenseTensor(xdims);
  mf.temp = DenseTensor(xdims);
  mf.u.assign(static_cast<std::size_t>(dd), DenseTensor(xdims));

  Eigen::VectorXd rho = hd * (ymat * s0);
  for (std::int64_t k = 0; k < nx; ++k) {
    if (!(rho(k) > 0.0))
      throw PositivityError("density not strictly positive at node " +
                                node_string(mf.rho.multi_index(k)) +
                                " (no-vacuum assumption violated; tolerances may be too loose)",
                            mf.rho.multi_index(k));
  }
  Eigen::Map<Eigen::VectorXd>(mf.rho.data(), nx) = rho;

  Eigen::VectorXd q2_total = Eigen::VectorXd::Zero(nx);
  Eigen::VectorXd unorm2 = Eigen::VectorXd::Zero(nx);
  for (int i = 0; i < dd; ++i) {
    w.assign(static_cast<std::size_t>(dd), ones);
    w[static_cast<std::size_t>(i)] = v1;
    const Eigen::VectorXd m1 = hd * (ymat * velocity_chain(f, w));  // rho * u_i
    w[static_cast<std::size_t>(i)] = v2;
    q2_total += hd * (ymat * velocity_chain(f, w));
    const Eigen::VectorXd ui = m1.cwiseQuotient(rho);
    unorm2 += ui.array().square().matrix();
    Eigen::Map<Eigen::VectorXd>(mf.u[static_cast<std::size_t>(i)].data(), nx) = ui;
  }

  // T = Bo/(D rho) * sum_l ||v - U||^2 F h^D = Bo/(D rho) * (q2 - rho ||U||^2)
  Eigen::VectorXd temp =
      (cfg.bo / dd) * (q2_total - rho.cwiseProduct(unorm2)).cwiseQuotient(rho);
  for (std::int64_t k = 0; k < nx; ++k) {
    if (!(temp(k) > 0.0))
      throw PositivityError("temperature not strictly positive at node " +
                                node_string(mf.temp.multi_index(k)) +
                                " (no-absolute-zero assumption violated)",
                            mf.temp.multi_index(k));
  }
  Eigen::Map<Eigen::VectorXd>(mf.temp.data(), nx) = temp;
  return mf;
}

DenseTensor collision_frequency(const MacroFields& mf, const BgkConfig& cfg) {
  mf.validate();
  DenseTensor nu(mf.rho.dims());
  for (std::int64_t k = 0; k < nu.size(); ++k)
    nu[k] = cfg.k_coll * mf.rho[k] * std::pow(mf.temp[k], 1.0 - cfg.mu);
  return nu;
}

DenseTensor equilibrium_factor_dense(const MacroFields& mf, const BgkConfig& cfg, int i) {
  const int dd = cfg.dim;
  if (i < 0 || i >= dd) throw std::invalid_argument("equilibrium factor index out of range");
  const Grid g = cfg.grid();
  const std::int64_t nx = mf.rho.size();

  std::vector<int> dims(static_cast<std::size_t>(dd) + 1, g.m);
  DenseTensor out(dims);
  const double* rho = mf.rho.data();
  const double* uu = mf.u[static_cast<std::size_t>(i)].data();
  const double* tt = mf.temp.data();
  const double inv_d = 1.0 / dd;
  for (std::int64_t k = 0; k < nx; ++k) {
    const double amp = std::pow(rho[k], inv_d) /
                       std::sqrt(2.0 * std::numbers::pi * tt[k] / cfg.bo);
    const double c = cfg.bo / (2.0 * tt[k]);
    for (int l = 0; l < g.m; ++l) {
      const double dv = g.nodes(l) - uu[k];
      out[k + nx * l] = amp * std::exp(-c * dv * dv);
    }
  }
  return out;
}

TtTensor compress_velocity_factor_product(const std::vector<DenseTensor>& factors,
                                          const BgkConfig& cfg, double eps_b) {
  const int dd = cfg.dim;
  if (static_cast<int>(factors.size()) != dd)
    throw std::invalid_argument("one velocity factor per dimension required");
  TtTensor acc;
  for (int i = 0; i < dd; ++i) {
    TtTensor fi = tt_from_dense(factors[static_cast<std::size_t>(i)], eps_b);
    for (int l = 1; l <= dd; ++l)
      if (l != i + 1) fi = expand(fi, dd + l, cfg.m);
    if (i == 0) {
      acc = std::move(fi);
    } else {
      acc = tt_round(tt_hadamard(acc, fi), eps_b);
    }
  }
  return tt_round(acc, eps_b);
}

TtTensor build_equilibrium(const MacroFields& mf, const BgkConfig& cfg, double eps_b) {
  mf.validate();
  std::vector<DenseTensor> factors;
  factors.reserve(static_cast<std::size_t>(cfg.dim));
  for (int i = 0; i < cfg.dim; ++i) factors.push_back(equilibrium_factor_dense(mf, cfg, i));
  return compress_velocity_factor_product(factors, cfg, eps_b);
}

TtTensor build_collision_term(const TtTensor& f, const BgkConfig& cfg) {
  const int dd = cfg.dim;
  const double eps = cfg.eps_b;
  const MacroFields mf = compute_moments(f, cfg);
  const TtTensor feq = build_equilibrium(mf, cfg, eps);

  TtTensor nu = tt_from_dense(collision_frequency(mf, cfg), eps);
  for (int l = 1; l <= dd; ++l) nu = expand(nu, dd + l, cfg.m);

  TtTensor diff = tt_round(tt_add(feq, tt_scale(f, -1.0)), eps);
  TtTensor q = tt_round(tt_hadamard(nu, diff), eps);
  return tt_scale(std::move(q), 1.0 / cfg.kn);
}

TtOperator build_transport_operator(const BgkConfig& cfg) {
  const int dd = cfg.dim;
  const Grid g = cfg.grid();
  const UpwindMatrices u = build_upwind_matrices(g.m, g.nodes);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(g.m, g.m);

  std::vector<std::vector<Eigen::MatrixXd>> terms;
  for (int i = 0; i < dd; ++i) {
    std::vector<Eigen::MatrixXd> plus(static_cast<std::size_t>(2 * dd), id);
    plus[static_cast<std::size_t>(i)] = -u.dplus;
    plus[static_cast<std::size_t>(dd + i)] = u.vplus;
    terms.push_back(std::move(plus));
    std::vector<Eigen::MatrixXd> minus(static_cast<std::size_t>(2 * dd), id);
    minus[static_cast<std::size_t>(i)] = -u.dminus;
    minus[static_cast<std::size_t>(dd + i)] = u.vminus;
    terms.push_back(std::move(minus));
  }
  return op_round(op_from_kron_terms(terms), 1e-13);
}

TtOperator build_dissipation_operator(const BgkConfig& cfg) {
  const int dd = cfg.dim;
  const Grid g = cfg.grid();
  const Eigen::MatrixXd d4 = fourth_difference_matrix(g.m, g.h);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(g.m, g.m);

  std::vector<std::vector<Eigen::MatrixXd>> terms;
  for (int i = 0; i < dd; ++i) {
    std::vector<Eigen::MatrixXd> t(static_cast<std::size_t>(2 * dd), id);
    t[static_cast<std::size_t>(i)] = d4;
    terms.push_back(std::move(t));
  }
  return op_round(op_from_kron_terms(terms), 1e-13);
}

BgkOperators build_bgk_operators(const BgkConfig& cfg) { return build_bgk_operators(cfg, cfg.dt); }

BgkOperators build_bgk_operators(const BgkConfig& cfg, double dt) {
  const int dd = cfg.dim;
  const Grid g = cfg.grid();
  const UpwindMatrices u = build_upwind_matrices(g.m, g.nodes);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(g.m, g.m);

  // I -/+ dt*L assembled directly as 2D+1 Kronecker terms, then rounded.
  auto cnlf = [&](double sign) {
    std::vector<std::vector<Eigen::MatrixXd>> terms;
    terms.emplace_back(static_cast<std::size_t>(2 * dd), id);
    for (int i = 0; i < dd; ++i) {
      std::vector<Eigen::MatrixXd> plus(static_cast<std::size_t>(2 * dd), id);
      plus[static_cast<std::size_t>(i)] = sign * dt * u.dplus;
      plus[static_cast<std::size_t>(dd + i)] = u.vplus;
      terms.push_back(std::move(plus));
      std::vector<Eigen::MatrixXd> minus(static_cast<std::size_t>(2 * dd), id);
      minus[static_cast<std::size_t>(i)] = sign * dt * u.dminus;
      minus[static_cast<std::size_t>(dd + i)] = u.vminus;
      terms.push_back(std::move(minus));
    }
    return op_round(op_from_kron_terms(terms), 1e-13);
  };

  BgkOperators ops;
  ops.transport = build_transport_operator(cfg);
  ops.cnlf_lhs = cnlf(+1.0);  // I - dt*L carries +dt*D since L = -sum(V D)
  ops.cnlf_rhs = cnlf(-1.0);
  if (cfg.eps_diss > 0.0) {
    ops.dissipation = build_dissipation_operator(cfg);
    ops.has_dissipation = true;
  }
  return ops;
}

ConservedQuantities conserved_quantities(const TtTensor& f, const BgkConfig& cfg) {
  const int dd = cfg.dim;
  const Grid g = cfg.grid();
  const double w = std::pow(g.h, 2 * dd);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.m);

  ConservedQuantities c;
  std::vector<Eigen::VectorXd> weights(static_cast<std::size_t>(2 * dd), ones);
  c.mass = w * tt_weighted_sum(f, weights);
  c.momentum.resize(static_cast<std::size_t>(dd));
  c.energy = 0.0;
  for (int i = 0; i < dd; ++i) {
    weights.assign(static_cast<std::size_t>(2 * dd), ones);
    weights[static_cast<std::size_t>(dd + i)] = g.nodes;
    c.momentum[static_cast<std::size_t>(i)] = w * tt_weighted_sum(f, weights);
    weights[static_cast<std::size_t>(dd + i)] = g.nodes.array().square();
    c.energy += 0.5 * w * tt_weighted_sum(f, weights);
  }
  return c;
}

}  // namespace aptt
