#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "aptt/tt_operator.hpp"
#include "aptt/tt_tensor.hpp"

namespace aptt {

struct MalsSettings {
  /// Absolute Frobenius residual target: ||A x - rhs||_F <= eps_d.
  double eps_d = 1e-6;
  /// One sweep = one directional pass over all bonds.
  int max_sweeps = 20;
  /// Relative SVD cut when splitting the optimized two-site block.
  /// 0 picks 0.05 * eps_d / ||rhs||_F automatically.
  double local_trunc = 0.0;
  /// Optional cap on the bond rank produced by a split (0 = uncapped).
  int max_local_rank = 0;
  /// Local systems up to this dimension are solved directly, larger ones
  /// iteratively to 0.1 * eps_d.
  int direct_dim_threshold = 1024;
  int inner_max_iter = 300;
  int inner_restart = 60;
};

struct MalsReport {
  int sweeps_used = 0;
  double final_residual = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  /// Interior bond ranks of the iterate after each sweep.
  std::vector<std::vector<int>> rank_history;
  /// Residual after each sweep (index 0 = residual of the initial guess).
  std::vector<double> residual_history;
};

/// Residual ||op_apply(a, x) - rhs||_F evaluated entirely in TT form.
double residual_norm(const TtOperator& a, const TtTensor& x, const TtTensor& rhs);

/// Two-site alternating (DMRG-style) solve of a x = rhs.  Optimizes two
/// adjacent cores at a time in forward/backward passes, splitting the merged
/// block by SVD.  Returns the iterate and a report; non-convergence within
/// max_sweeps is reported, not thrown.
std::pair<TtTensor, MalsReport> mals_solve(const TtOperator& a, const TtTensor& rhs,
                                           const TtTensor& x0, const MalsSettings& settings);

}  // namespace aptt
