#pragma once

#include <cmath>
#include <functional>

#include <Eigen/Core>

namespace aptt {

struct GmresOptions {
  double tol_abs = 1e-12;  // on ||b - A x||_2
  int restart = 60;
  int max_iter = 2000;
};

struct GmresResult {
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Restarted GMRES with Givens rotations, matrix-free.  `apply(x, y)` must
/// write A*x into y.  `x` carries the initial guess in and the solution out.
template <typename Apply>
GmresResult gmres(const Apply& apply, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                  const GmresOptions& opt) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const Eigen::Index n = b.size();
  const int m = std::max(1, std::min<int>(opt.restart, static_cast<int>(n)));

  GmresResult res;
  VectorXd w(n), r(n);
  MatrixXd v(n, m + 1);
  MatrixXd h = MatrixXd::Zero(m + 1, m);
  VectorXd cs(m), sn(m), g(m + 1);

  apply(x, w);
  r = b - w;
  double beta = r.norm();
  res.residual = beta;
  if (beta <= opt.tol_abs) {
    res.converged = true;
    return res;
  }

  while (res.iterations < opt.max_iter) {
    v.col(0) = r / beta;
    g.setZero();
    g(0) = beta;
    int k = 0;
    for (; k < m && res.iterations < opt.max_iter;) {
      apply(v.col(k), w);
      for (int j = 0; j <= k; ++j) {
        h(j, k) = w.dot(v.col(j));
        w -= h(j, k) * v.col(j);
      }
      const double hk1 = w.norm();
      h(k + 1, k) = hk1;
      if (hk1 > 0.0) v.col(k + 1) = w / hk1;
      for (int j = 0; j < k; ++j) {
        const double t = cs(j) * h(j, k) + sn(j) * h(j + 1, k);
        h(j + 1, k) = -sn(j) * h(j, k) + cs(j) * h(j + 1, k);
        h(j, k) = t;
      }
      const double denom = std::hypot(h(k, k), h(k + 1, k));
      if (denom == 0.0) {
        cs(k) = 1.0;
        sn(k) = 0.0;
      } else {
        cs(k) = h(k, k) / denom;
        sn(k) = h(k + 1, k) / denom;
      }
      h(k, k) = denom;
      h(k + 1, k) = 0.0;
      g(k + 1) = -sn(k) * g(k);
      g(k) = cs(k) * g(k);
      ++k;
      ++res.iterations;
      // Converged in exact arithmetic, or lucky breakdown.
      if (std::abs(g(k)) <= opt.tol_abs || hk1 == 0.0) break;
    }
    // Solve the triangular system and update x.
    VectorXd y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    x += v.leftCols(k) * y;

    apply(x, w);
    r = b - w;
    beta = r.norm();
    res.residual = beta;
    if (beta <= opt.tol_abs) {
      res.converged = true;
      return res;
    }
    if (beta == 0.0) break;
  }
  return res;
}

}  // namespace aptt
