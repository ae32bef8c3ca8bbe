#pragma once

#include <functional>

#include "aptt/bgk.hpp"

namespace aptt {

/// Brute-force dense reference of the identical discretization: same grid and
/// stencils (shared with the train pipeline through grid.hpp), same trapezoid
/// moments, same collision formula, same two-step time scheme.  Linear
/// systems are solved iteratively to a tight relative residual.  Intended for
/// small instances only; the constructor enforces a size guard.
class DenseOracle {
 public:
  explicit DenseOracle(const BgkConfig& cfg, std::int64_t max_entries = 10'000'000);

  const BgkConfig& config() const { return cfg_; }

  /// Literal h^D-weighted sums of the discrete moment formulas (two passes;
  /// no factorization shortcuts).
  MacroFields moments(const DenseTensor& f) const;

  /// Direct evaluation of the Maxwellian formula on the full phase grid.
  DenseTensor equilibrium(const MacroFields& mf) const;

  /// nu/Kn * (f_eq - f).
  DenseTensor collision(const DenseTensor& f) const;

  /// Transport operator action L f = -sum_i (V_i^+ D_i^+ + V_i^- D_i^-) f.
  DenseTensor apply_transport(const DenseTensor& f) const;

  /// Fourth-difference damping along the spatial modes.
  DenseTensor apply_dissipation(const DenseTensor& f) const;

  /// Explicit second-order two-stage first step.
  DenseTensor bootstrap(const DenseTensor& f0) const;

  /// One semi-implicit leap-frog step; the implicit system is solved by
  /// restarted GMRES to gmres_tol_rel * ||rhs||.
  DenseTensor cnlf_step(const DenseTensor& f_prev, const DenseTensor& f_curr) const;

  /// Run n_steps steps from f0 (step 1 is the explicit bootstrap); the
  /// callback sees every level including n = 0.
  void run(const DenseTensor& f0, int n_steps,
           const std::function<void(int n, const DenseTensor& f)>& callback) const;

  ConservedQuantities conserved(const DenseTensor& f) const;

  double gmres_tol_rel = 1e-12;

 private:
  BgkConfig cfg_;
  Grid grid_;
  UpwindMatrices upwind_;
  Eigen::MatrixXd d4_;
};

}  // namespace aptt
