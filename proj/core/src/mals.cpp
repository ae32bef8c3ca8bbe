#include "aptt/mals.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "aptt/errors.hpp"
#include "aptt/gmres.hpp"

namespace aptt {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using StridedMap = Eigen::Map<MatrixXd, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
using ConstStridedMap = Eigen::Map<const MatrixXd, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;

/// Operator environment over a contiguous run of modes, with the operator
/// sandwiched between two copies of the iterate (bra row, ket column):
/// storage index = bra + rb*(op + s*ket).  The contiguous matrix view is
/// (bra, op) x ket.
struct Env3 {
  int rb = 1, s = 1, rk = 1;
  std::vector<double> v;
  Env3() : v(1, 1.0) {}
  Env3(int rb_, int s_, int rk_)
      : rb(rb_), s(s_), rk(rk_), v(static_cast<std::size_t>(rb_) * s_ * rk_, 0.0) {}
  Eigen::Map<const MatrixXd> mat() const {
    return {v.data(), static_cast<Index>(rb) * s, rk};
  }
};

/// Right-hand-side environment: bra x rhs-rank matrix.
struct Env2 {
  MatrixXd m = MatrixXd::Ones(1, 1);
};

Env3 update_env_left(const Env3& l, const TtCore& x, const TtOpCore& w,
                     const std::vector<OpCoreEntry>& nz) {
  const int ra = l.rb, s = l.s, n = x.n, rp = x.r_right, sn = w.s_right;
  // t1((bra,s), (j_in, ket')) = sum_ket l(bra,s,ket) x(ket,j_in,ket')
  MatrixXd t1 = l.mat() * x.right_unfold();
  // t2((bra,j_out), (s', ket')) += w * t1 slices
  MatrixXd t2 = MatrixXd::Zero(static_cast<Index>(ra) * n, static_cast<Index>(sn) * rp);
  for (const auto& e : nz) {
    ConstStridedMap src(t1.data() + static_cast<std::ptrdiff_t>(ra) * e.s_left +
                            static_cast<std::ptrdiff_t>(ra) * s * e.ji,
                        ra, rp, {static_cast<Index>(ra) * s * n, 1});
    StridedMap dst(t2.data() + static_cast<std::ptrdiff_t>(ra) * e.jo +
                       static_cast<std::ptrdiff_t>(ra) * n * e.s_right,
                   ra, rp, {static_cast<Index>(ra) * n * sn, 1});
    dst += e.w * src;
  }
  // out(bra', s', ket') = sum_(bra,j_out) x(bra,j_out,bra') t2((bra,j_out),(s',ket'))
  Env3 out(x.r_right, sn, rp);
  Eigen::Map<MatrixXd>(out.v.data(), x.r_right, static_cast<Index>(sn) * rp).noalias() =
      x.left_unfold().transpose() * t2;
  return out;
}

Env3 update_env_right(const Env3& r, const TtCore& x, const TtOpCore& w,
                      const std::vector<OpCoreEntry>& nz) {
  const int ra = r.rb, s = r.s, n = x.n, rp = x.r_left;
  // t1((bra,s), (ket, j_in)) = sum_ket' r(bra,s,ket') x(ket,j_in,ket')
  MatrixXd t1(static_cast<Index>(ra) * s, static_cast<Index>(rp) * n);
  t1.noalias() = r.mat() * x.left_unfold().transpose();
  // t3((j_out, bra), (s_left, ket)) += w * t1 slices
  const int sl = w.s_left;
  MatrixXd t3 = MatrixXd::Zero(static_cast<Index>(n) * ra, static_cast<Index>(sl) * rp);
  for (const auto& e : nz) {
    ConstStridedMap src(t1.data() + static_cast<std::ptrdiff_t>(ra) * e.s_right +
                            static_cast<std::ptrdiff_t>(ra) * s * rp * e.ji,
                        ra, rp, {static_cast<Index>(ra) * s, 1});
    StridedMap dst(t3.data() + e.jo + static_cast<std::ptrdiff_t>(n) * ra * e.s_left, ra, rp,
                   {static_cast<Index>(n) * ra * sl, static_cast<Index>(n)});
    dst += e.w * src;
  }
  // out(bra', s_left, ket') = sum_(j_out, bra) x(bra',j_out,bra) t3((j_out,bra),(s_left,ket'))
  Env3 out(rp, sl, rp);
  Eigen::Map<MatrixXd>(out.v.data(), rp, static_cast<Index>(sl) * rp).noalias() =
      x.right_unfold() * t3;
  return out;
}

Env2 update_rhs_left(const Env2& l, const TtCore& x, const TtCore& b) {
  // t1(bra, (j, rb')) = l * b.right_unfold()
  MatrixXd t1 = l.m * b.right_unfold();
  Eigen::Map<const MatrixXd> t1v(t1.data(), static_cast<Index>(x.r_left) * x.n, b.r_right);
  Env2 out;
  out.m.noalias() = x.left_unfold().transpose() * t1v;
  return out;
}

Env2 update_rhs_right(const Env2& r, const TtCore& x, const TtCore& b) {
  // t1((rb, j), bra') = b.left_unfold() * r.m^T
  MatrixXd t1 = b.left_unfold() * r.m.transpose();
  // reorder to t2((j, bra'), rb)
  MatrixXd t2(static_cast<Index>(b.n) * x.r_right, b.r_left);
  for (int q = 0; q < b.r_left; ++q)
    for (int a = 0; a < x.r_right; ++a)
      for (int j = 0; j < b.n; ++j)
        t2(j + static_cast<Index>(b.n) * a, q) = t1(q + static_cast<Index>(b.r_left) * j, a);
  Env2 out;
  out.m.noalias() = x.right_unfold() * t2;
  return out;
}

/// Local two-site operator y = H w with H = L . W_i . W_{i+1} . R.
struct LocalOp {
  const Env3* L;
  const Env3* R;
  const TtOpCore* w1;
  const TtOpCore* w2;
  const std::vector<OpCoreEntry>* nz1;
  const std::vector<OpCoreEntry>* nz2;
  int rl, n1, n2, rr;

  Index dim() const { return static_cast<Index>(rl) * n1 * n2 * rr; }

  void apply(const Eigen::Ref<const VectorXd>& win, VectorXd& yout) const {
    const int S = L->s, S1 = w1->s_right, S2 = w2->s_right;
    // t1((bra,s) x (j1,j2,ket_r)) = L_mat * w
    Eigen::Map<const MatrixXd> wmat(win.data(), rl, static_cast<Index>(n1) * n2 * rr);
    MatrixXd t1 = L->mat() * wmat;
    // t2: (bra + rl*(j1o + n1*(s1 + S1*(j2 + n2*r))))
    MatrixXd t2 = MatrixXd::Zero(static_cast<Index>(rl) * n1 * S1, static_cast<Index>(n2) * rr);
    for (const auto& e : *nz1) {
      ConstStridedMap src(t1.data() + static_cast<std::ptrdiff_t>(rl) * e.s_left +
                              static_cast<std::ptrdiff_t>(rl) * S * e.ji,
                          rl, static_cast<Index>(n2) * rr, {static_cast<Index>(rl) * S * n1, 1});
      StridedMap dst(t2.data() + static_cast<std::ptrdiff_t>(rl) * e.jo +
                         static_cast<std::ptrdiff_t>(rl) * n1 * e.s_right,
                     rl, static_cast<Index>(n2) * rr, {static_cast<Index>(rl) * n1 * S1, 1});
      dst += e.w * src;
    }
    // t3: (bra + rl*(j1 + n1*(j2o + n2*(s2 + S2*r))))
    MatrixXd t3 = MatrixXd::Zero(static_cast<Index>(rl) * n1 * n2, static_cast<Index>(S2) * rr);
    const Index rln1 = static_cast<Index>(rl) * n1;
    for (const auto& e : *nz2) {
      ConstStridedMap src(t2.data() + rln1 * e.s_left + rln1 * S1 * e.ji, rln1, rr,
                          {rln1 * S1 * n2, 1});
      StridedMap dst(t3.data() + rln1 * n2 * e.s_right + rln1 * e.jo, rln1, rr,
                     {rln1 * n2 * S2, 1});
      dst += e.w * src;
    }
    // y((bra,j1,j2) x bra_r) = t3 * R_view^T, R_view = (bra_r x (s2, ket_r))
    Eigen::Map<const MatrixXd> rview(R->v.data(), R->rb, static_cast<Index>(R->s) * R->rk);
    yout.resize(dim());
    Eigen::Map<MatrixXd> ymat(yout.data(), static_cast<Index>(rl) * n1 * n2, rr);
    ymat.noalias() = t3 * rview.transpose();
  }
};

int split_rank(const VectorXd& s, double delta, int cap) {
  const double d2 = delta * delta;
  double tail = 0.0;
  int keep = static_cast<int>(s.size());
  while (keep > 1) {
    const double c = tail + s[keep - 1] * s[keep - 1];
    if (c < d2) {
      tail = c;
      --keep;
    } else {
      break;
    }
  }
  if (cap > 0) keep = std::min(keep, cap);
  return keep;
}

}  // namespace

double residual_norm(const TtOperator& a, const TtTensor& x, const TtTensor& rhs) {
  if (a.dims() != x.dims() || x.dims() != rhs.dims())
    throw std::invalid_argument("residual_norm: mode sizes differ");
  TtTensor z = tt_add(op_apply(a, x), tt_scale(rhs, -1.0));
  return tt_norm(z);
}

std::pair<TtTensor, MalsReport> mals_solve(const TtOperator& a, const TtTensor& rhs,
                                           const TtTensor& x0, const MalsSettings& settings) {
  if (a.dims() != rhs.dims() || rhs.dims() != x0.dims())
    throw std::invalid_argument("mals_solve: mode sizes differ");
  const int d = x0.order();
  if (d < 2) throw std::invalid_argument("mals_solve: need at least two modes");
  if (!(settings.eps_d > 0.0)) throw std::invalid_argument("mals_solve: eps_d must be positive");
  if (settings.max_sweeps < 1) throw std::invalid_argument("mals_solve: max_sweeps must be >= 1");

  const double rhs_norm = tt_norm(rhs);
  const double local_trunc = settings.local_trunc > 0.0
                                 ? settings.local_trunc
                                 : 0.05 * settings.eps_d / std::max(rhs_norm, 1e-300);

  TtTensor x = tt_orthogonalize_right(x0);

  std::vector<std::vector<OpCoreEntry>> nz(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) nz[static_cast<std::size_t>(i)] = op_core_nonzeros(a.core(i));

  // Environments: lenv[i] / lrhs[i] cover cores 0..i-1, renv[i] / rrhs[i]
  // cover cores i..d-1.
  std::vector<Env3> lenv(static_cast<std::size_t>(d) + 1), renv(static_cast<std::size_t>(d) + 1);
  std::vector<Env2> lrhs(static_cast<std::size_t>(d) + 1), rrhs(static_cast<std::size_t>(d) + 1);
  for (int i = d - 1; i >= 1; --i) {
    renv[static_cast<std::size_t>(i)] =
        update_env_right(renv[static_cast<std::size_t>(i) + 1], x.core(i), a.core(i),
                         nz[static_cast<std::size_t>(i)]);
    rrhs[static_cast<std::size_t>(i)] =
        update_rhs_right(rrhs[static_cast<std::size_t>(i) + 1], x.core(i), rhs.core(i));
  }

  MalsReport report;
  double res = residual_norm(a, x, rhs);
  report.residual_history.push_back(res);
  report.rank_history.push_back(x.ranks());
  if (res <= settings.eps_d) {
    report.converged = true;
    report.final_residual = res;
    return {std::move(x), report};
  }

  auto solve_bond = [&](int i) {
    const TtCore& xc1 = x.core(i);
    const TtCore& xc2 = x.core(i + 1);
    const int rl = xc1.r_left, n1 = xc1.n, n2 = xc2.n, rr = xc2.r_right;
    const Index dim = static_cast<Index>(rl) * n1 * n2 * rr;

    // Warm start: merge the two current cores.
    VectorXd w(dim);
    Eigen::Map<MatrixXd>(w.data(), static_cast<Index>(rl) * n1, static_cast<Index>(n2) * rr)
        .noalias() = xc1.left_unfold() * xc2.right_unfold();

    // Local right-hand side.
    const TtCore& b1 = rhs.core(i);
    const TtCore& b2 = rhs.core(i + 1);
    MatrixXd g1 = lrhs[static_cast<std::size_t>(i)].m * b1.right_unfold();
    Eigen::Map<const MatrixXd> g1v(g1.data(), static_cast<Index>(rl) * n1, b1.r_right);
    MatrixXd g2 = g1v * b2.right_unfold();
    Eigen::Map<const MatrixXd> g2v(g2.data(), static_cast<Index>(rl) * n1 * n2, b2.r_right);
    MatrixXd gm = g2v * rrhs[static_cast<std::size_t>(i) + 2].m.transpose();
    Eigen::Map<const VectorXd> g(gm.data(), dim);

    LocalOp H{&lenv[static_cast<std::size_t>(i)], &renv[static_cast<std::size_t>(i) + 2],
              &a.core(i), &a.core(i + 1), &nz[static_cast<std::size_t>(i)],
              &nz[static_cast<std::size_t>(i) + 1], rl, n1, n2, rr};

    if (dim <= settings.direct_dim_threshold) {
      MatrixXd hmat(dim, dim);
      VectorXd e = VectorXd::Zero(dim), col(dim);
      for (Index k = 0; k < dim; ++k) {
        e(k) = 1.0;
        H.apply(e, col);
        hmat.col(k) = col;
        e(k) = 0.0;
      }
      Eigen::ColPivHouseholderQR<MatrixXd> qr(hmat);
      qr.setThreshold(1e-13);
      if (qr.rank() < dim)
        throw SolverError("local system singular at bond " + std::to_string(i));
      w = qr.solve(g);
    } else {
      GmresOptions opt;
      opt.tol_abs = std::max(0.1 * settings.eps_d, 5e-15 * g.norm());
      opt.restart = settings.inner_restart;
      opt.max_iter = settings.inner_max_iter;
      const auto apply = [&H](const Eigen::Ref<const VectorXd>& in, VectorXd& out) {
        H.apply(in, out);
      };
      gmres(apply, g, w, opt);
    }
    if (!w.allFinite())
      throw SolverError("local solve produced non-finite values at bond " + std::to_string(i));
    return std::make_pair(std::move(w), dim);
  };

  auto split_and_store = [&](int i, const VectorXd& w, bool left_orth) {
    const TtCore& xc1 = x.core(i);
    const TtCore& xc2 = x.core(i + 1);
    const int rl = xc1.r_left, n1 = xc1.n, n2 = xc2.n, rr = xc2.r_right;
    Eigen::Map<const MatrixXd> wmat(w.data(), static_cast<Index>(rl) * n1,
                                    static_cast<Index>(n2) * rr);
    Eigen::BDCSVD<MatrixXd> svd(wmat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double delta = local_trunc * svd.singularValues().norm();
    const int k = split_rank(svd.singularValues(), delta, settings.max_local_rank);

    TtCore c1(rl, n1, k), c2(k, n2, rr);
    if (left_orth) {
      Eigen::Map<MatrixXd>(c1.v.data(), static_cast<Index>(rl) * n1, k) = svd.matrixU().leftCols(k);
      Eigen::Map<MatrixXd>(c2.v.data(), k, static_cast<Index>(n2) * rr).noalias() =
          svd.singularValues().head(k).asDiagonal() * svd.matrixV().leftCols(k).transpose();
    } else {
      Eigen::Map<MatrixXd>(c1.v.data(), static_cast<Index>(rl) * n1, k).noalias() =
          svd.matrixU().leftCols(k) * svd.singularValues().head(k).asDiagonal();
      Eigen::Map<MatrixXd>(c2.v.data(), k, static_cast<Index>(n2) * rr) =
          svd.matrixV().leftCols(k).transpose();
    }
    x.core(i) = std::move(c1);
    x.core(i + 1) = std::move(c2);
  };

  bool forward = true;
  for (int sweep = 1; sweep <= settings.max_sweeps; ++sweep) {
    if (forward) {
      for (int i = 0; i <= d - 2; ++i) {
        auto [w, dim] = solve_bond(i);
        (void)dim;
        split_and_store(i, w, /*left_orth=*/true);
        lenv[static_cast<std::size_t>(i) + 1] = update_env_left(
            lenv[static_cast<std::size_t>(i)], x.core(i), a.core(i), nz[static_cast<std::size_t>(i)]);
        lrhs[static_cast<std::size_t>(i) + 1] =
            update_rhs_left(lrhs[static_cast<std::size_t>(i)], x.core(i), rhs.core(i));
      }
    } else {
      for (int i = d - 2; i >= 0; --i) {
        auto [w, dim] = solve_bond(i);
        (void)dim;
        split_and_store(i, w, /*left_orth=*/false);
        renv[static_cast<std::size_t>(i) + 1] =
            update_env_right(renv[static_cast<std::size_t>(i) + 2], x.core(i + 1), a.core(i + 1),
                             nz[static_cast<std::size_t>(i) + 1]);
        rrhs[static_cast<std::size_t>(i) + 1] =
            update_rhs_right(rrhs[static_cast<std::size_t>(i) + 2], x.core(i + 1), rhs.core(i + 1));
      }
    }
    forward = !forward;
    ++report.sweeps_used;

    res = residual_norm(a, x, rhs);
    report.residual_history.push_back(res);
    report.rank_history.push_back(x.ranks());
    if (res <= settings.eps_d) {
      report.converged = true;
      break;
    }
  }
  report.final_residual = res;
  return {std::move(x), report};
}

}  // namespace aptt
