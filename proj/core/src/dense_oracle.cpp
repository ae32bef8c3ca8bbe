#include "aptt/dense_oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "aptt/errors.hpp"
#include "aptt/gmres.hpp"

namespace aptt {

DenseOracle::DenseOracle(const BgkConfig& cfg, std::int64_t max_entries) : cfg_(cfg) {
  cfg_.validate();
  const std::int64_t total = shape_size(cfg_.phase_dims());
  if (total > max_entries)
    throw std::invalid_argument("dense oracle refuses " + std::to_string(total) +
                                " entries (guard " + std::to_string(max_entries) + ")");
  grid_ = cfg_.grid();
  upwind_ = build_upwind_matrices(grid_.m, grid_.nodes);
  d4_ = fourth_difference_matrix(grid_.m, grid_.h);
}

MacroFields DenseOracle::moments(const DenseTensor& f) const {
  const int dd = cfg_.dim;
  const int m = grid_.m;
  const double hd = std::pow(grid_.h, dd);
  const std::int64_t nx = static_cast<std::int64_t>(std::pow(m, dd));
  const std::int64_t nv = f.size() / nx;

  MacroFields mf;
  std::vector<int> xdims(static_cast<std::size_t>(dd), m);
  mf.rho = DenseTensor(xdims);
  mf.temp = DenseTensor(xdims);
  mf.u.assign(static_cast<std::size_t>(dd), DenseTensor(xdims));

  std::vector<Eigen::VectorXd> mom(static_cast<std::size_t>(dd),
                                   Eigen::VectorXd::Zero(nx));
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(nx);
  std::vector<int> l(static_cast<std::size_t>(dd));
  for (std::int64_t lv = 0; lv < nv; ++lv) {
    std::int64_t rem = lv;
    for (int i = 0; i < dd; ++i) {
      l[static_cast<std::size_t>(i)] = static_cast<int>(rem % m);
      rem /= m;
    }
    Eigen::Map<const Eigen::VectorXd> slab(f.data() + lv * nx, nx);
    rho += slab;
    for (int i = 0; i < dd; ++i)
      mom[static_cast<std::size_t>(i)] += grid_.nodes(l[static_cast<std::size_t>(i)]) * slab;
  }
  rho *= hd;
  for (std::int64_t k = 0; k < nx; ++k)
    if (!(rho(k) > 0.0))
      throw PositivityError("density not strictly positive at node " + std::to_string(k),
                            mf.rho.multi_index(k));
  Eigen::Map<Eigen::VectorXd>(mf.rho.data(), nx) = rho;
  for (int i = 0; i < dd; ++i)
    Eigen::Map<Eigen::VectorXd>(mf.u[static_cast<std::size_t>(i)].data(), nx) =
        hd * mom[static_cast<std::size_t>(i)].cwiseQuotient(rho);

  // Second pass with the subtracted mean velocity, as the formula is written.
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(nx);
  for (std::int64_t lv = 0; lv < nv; ++lv) {
    std::int64_t rem = lv;
    for (int i = 0; i < dd; ++i) {
      l[static_cast<std::size_t>(i)] = static_cast<int>(rem % m);
      rem /= m;
    }
    Eigen::Map<const Eigen::VectorXd> slab(f.data() + lv * nx, nx);
    for (std::int64_t k = 0; k < nx; ++k) {
      double w = 0.0;
      for (int i = 0; i < dd; ++i) {
        const double dv = grid_.nodes(l[static_cast<std::size_t>(i)]) -
                          mf.u[static_cast<std::size_t>(i)][k];
        w += dv * dv;
      }
      acc(k) += w * slab(k);
    }
  }
  for (std::int64_t k = 0; k < nx; ++k) {
    const double t = cfg_.bo * hd * acc(k) / (dd * rho(k));
    if (!(t > 0.0))
      throw PositivityError("temperature not strictly positive at node " + std::to_string(k),
                            mf.temp.multi_index(k));
    mf.temp[k] = t;
  }
  return mf;
}

DenseTensor DenseOracle::equilibrium(const MacroFields& mf) const {
  const int dd = cfg_.dim;
  const int m = grid_.m;
  const std::int64_t nx = mf.rho.size();
  DenseTensor out(cfg_.phase_dims());
  const std::int64_t nv = out.size() / nx;
  std::vector<int> l(static_cast<std::size_t>(dd));
  for (std::int64_t lv = 0; lv < nv; ++lv) {
    std::int64_t rem = lv;
    for (int i = 0; i < dd; ++i) {
      l[static_cast<std::size_t>(i)] = static_cast<int>(rem % m);
      rem /= m;
    }
    double* dst = out.data() + lv * nx;
    for (std::int64_t k = 0; k < nx; ++k) {
      const double t = mf.temp[k];
      double e = 0.0;
      for (int i = 0; i < dd; ++i) {
        const double dv = grid_.nodes(l[static_cast<std::size_t>(i)]) -
                          mf.u[static_cast<std::size_t>(i)][k];
        e += dv * dv;
      }
      dst[k] = mf.rho[k] / std::pow(2.0 * std::numbers::pi * t / cfg_.bo, 0.5 * dd) *
               std::exp(-cfg_.bo * e / (2.0 * t));
    }
  }
  return out;
}

DenseTensor DenseOracle::collision(const DenseTensor& f) const {
  const MacroFields mf = moments(f);
  const DenseTensor feq = equilibrium(mf);
  const DenseTensor nu = collision_frequency(mf, cfg_);
  const std::int64_t nx = nu.size();
  DenseTensor out(f.dims());
  const std::int64_t nv = f.size() / nx;
  for (std::int64_t lv = 0; lv < nv; ++lv) {
    const double* pf = f.data() + lv * nx;
    const double* pe = feq.data() + lv * nx;
    double* dst = out.data() + lv * nx;
    for (std::int64_t k = 0; k < nx; ++k)
      dst[k] = nu[k] / cfg_.kn * (pe[k] - pf[k]);
  }
  return out;
}

DenseTensor DenseOracle::apply_transport(const DenseTensor& f) const {
  const int dd = cfg_.dim;
  DenseTensor acc(f.dims());
  const Eigen::VectorXd vplus = upwind_.vplus.diagonal();
  const Eigen::VectorXd vminus = upwind_.vminus.diagonal();
  for (int i = 0; i < dd; ++i) {
    DenseTensor gp = apply_mode_matrix(f, upwind_.dplus, i);
    scale_mode(gp, vplus, dd + i);
    DenseTensor gm = apply_mode_matrix(f, upwind_.dminus, i);
    scale_mode(gm, vminus, dd + i);
    acc.vec() -= gp.vec() + gm.vec();
  }
  return acc;
}

DenseTensor DenseOracle::apply_dissipation(const DenseTensor& f) const {
  DenseTensor acc(f.dims());
  for (int i = 0; i < cfg_.dim; ++i)
    acc.vec() += apply_mode_matrix(f, d4_, i).vec();
  return acc;
}

DenseTensor DenseOracle::bootstrap(const DenseTensor& f0) const {
  const double dt = cfg_.dt;
  DenseTensor fhat(f0.dims());
  fhat.vec() = f0.vec() + dt * (apply_transport(f0).vec() + collision(f0).vec());
  DenseTensor f1(f0.dims());
  f1.vec() = 0.5 * f0.vec() + 0.5 * fhat.vec() +
             0.5 * dt * (apply_transport(fhat).vec() + collision(fhat).vec());
  return f1;
}

DenseTensor DenseOracle::cnlf_step(const DenseTensor& f_prev, const DenseTensor& f_curr) const {
  const double dt = cfg_.dt;
  DenseTensor rhs(f_prev.dims());
  rhs.vec() = f_prev.vec() + dt * apply_transport(f_prev).vec() +
              2.0 * dt * collision(f_curr).vec();
  if (cfg_.eps_diss > 0.0) {
    const double h = grid_.h;
    rhs.vec() -= cfg_.eps_diss * h * h * h * h / 16.0 * apply_dissipation(f_prev).vec();
  }

  DenseTensor x = f_curr;  // warm start from the current level
  const auto apply = [&](const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::VectorXd& out) {
    DenseTensor tmp(f_prev.dims(), std::vector<double>(in.data(), in.data() + in.size()));
    out = in - dt * apply_transport(tmp).vec();
  };
  GmresOptions opt;
  opt.tol_abs = gmres_tol_rel * rhs.frobenius_norm();
  opt.restart = 60;
  opt.max_iter = 4000;
  Eigen::VectorXd xv = x.vec();
  const GmresResult res = gmres(apply, rhs.vec(), xv, opt);
  if (!res.converged)
    throw SolverError("reference linear solve stagnated (residual " +
                      std::to_string(res.residual) + ")");
  x.vec() = xv;
  return x;
}

void DenseOracle::run(const DenseTensor& f0, int n_steps,
                      const std::function<void(int, const DenseTensor&)>& callback) const {
  DenseTensor f_prev = f0;
  if (callback) callback(0, f_prev);
  if (n_steps < 1) return;
  DenseTensor f_curr = bootstrap(f_prev);
  if (callback) callback(1, f_curr);
  for (int n = 1; n < n_steps; ++n) {
    DenseTensor f_next = cnlf_step(f_prev, f_curr);
    f_prev = std::move(f_curr);
    f_curr = std::move(f_next);
    if (callback) callback(n + 1, f_curr);
  }
}

ConservedQuantities DenseOracle::conserved(const DenseTensor& f) const {
  const int dd = cfg_.dim;
  const int m = grid_.m;
  const double w = std::pow(grid_.h, 2 * dd);
  const std::int64_t nx = static_cast<std::int64_t>(std::pow(m, dd));
  const std::int64_t nv = f.size() / nx;

  ConservedQuantities c;
  c.momentum.assign(static_cast<std::size_t>(dd), 0.0);
  std::vector<int> l(static_cast<std::size_t>(dd));
  for (std::int64_t lv = 0; lv < nv; ++lv) {
    std::int64_t rem = lv;
    for (int i = 0; i < dd; ++i) {
      l[static_cast<std::size_t>(i)] = static_cast<int>(rem % m);
      rem /= m;
    }
    Eigen::Map<const Eigen::VectorXd> slab(f.data() + lv * nx, nx);
    const double s = slab.sum();
    c.mass += s;
    double v2 = 0.0;
    for (int i = 0; i < dd; ++i) {
      const double vi = grid_.nodes(l[static_cast<std::size_t>(i)]);
      c.momentum[static_cast<std::size_t>(i)] += vi * s;
      v2 += vi * vi;
    }
    c.energy += 0.5 * v2 * s;
  }
  c.mass *= w;
  for (double& p : c.momentum) p *= w;
  c.energy *= w;
  return c;
}

}  // namespace aptt
