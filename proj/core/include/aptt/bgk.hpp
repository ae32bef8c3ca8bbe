#pragma once

#include <vector>

#include "aptt/dense_tensor.hpp"
#include "aptt/grid.hpp"
#include "aptt/tt_operator.hpp"
#include "aptt/tt_tensor.hpp"

namespace aptt {

/// Grid, physics and tolerance parameters of a kinetic run.  The mesh size
/// h = 2*pi/m is always derived from m, never stored separately.
struct BgkConfig {
  int dim = 2;        // spatial dimension D (1, 2 or 3)
  int m = 16;         // points per mode
  double dt = 0.01;   // time step
  double t_star = 1.0;
  double kn = 1.0;    // Knudsen number
  double bo = 3.65;   // Boltzmann number
  double k_coll = 1.0;  // collision frequency pre-factor
  double mu = 0.5;      // viscosity exponent
  double eps_b = 1e-6;  // compression tolerance
  double eps_d = 1e-6;  // solver residual tolerance
  double eps_diss = 0.0;  // artificial viscosity coefficient, 0 disables
  int mals_max_sweeps = 20;

  double h() const;
  int order() const { return 2 * dim; }
  std::vector<int> phase_dims() const { return std::vector<int>(static_cast<std::size_t>(order()), m); }
  Grid grid() const { return Grid::uniform(m); }

  /// Throws ConfigError naming the violated constraint.
  void validate() const;
};

/// Macroscopic density, mean velocity (D components) and temperature on the
/// spatial grid.  Density and temperature must stay strictly positive: the
/// model assumes no vacuum and no absolute-zero state.
struct MacroFields {
  DenseTensor rho;
  std::vector<DenseTensor> u;
  DenseTensor temp;

  /// Throws PositivityError with the offending node if rho or temp <= 0.
  void validate() const;
};

/// Trapezoid-rule moments of a phase-space train, evaluated through the
/// partial spatial reduction (the full 2D-mode tensor is never materialized).
MacroFields compute_moments(const TtTensor& f, const BgkConfig& cfg);

/// nu = K * rho * T^(1-mu), entrywise.
DenseTensor collision_frequency(const MacroFields& mf, const BgkConfig& cfg);

/// Maxwellian built factor-by-factor: each (D+1)-mode velocity factor is
/// evaluated densely, compressed at eps_b, expanded with identity cores to
/// the full 2D modes, and the D factors are Hadamard-multiplied with
/// intermediate rounding at eps_b.
TtTensor build_equilibrium(const MacroFields& mf, const BgkConfig& cfg, double eps_b);

/// Dense (D+1)-mode factor i of the equilibrium, before compression.
DenseTensor equilibrium_factor_dense(const MacroFields& mf, const BgkConfig& cfg, int i);

/// Generic factorized compression: factor i is a (D+1)-mode tensor over
/// (x_1..x_D, v_i).  Each factor is compressed at eps_b, expanded with
/// identity cores to the full 2D modes, and the factors are multiplied
/// entrywise with rounding after each product.
TtTensor compress_velocity_factor_product(const std::vector<DenseTensor>& factors,
                                          const BgkConfig& cfg, double eps_b);

/// Collision term Q = (1/Kn) * nu ⊙ (F_eq - F) in TT form, rounded at eps_b.
TtTensor build_collision_term(const TtTensor& f, const BgkConfig& cfg);

/// Transport operator: -sum_i (V_i^+ D_{x_i}^+ + V_i^- D_{x_i}^-), with the
/// difference factors on the spatial modes and the velocity diagonals on the
/// matching velocity modes.  Rank <= 2D after rounding.
TtOperator build_transport_operator(const BgkConfig& cfg);

/// Fourth-difference damping acting on the spatial modes only (identity on
/// the velocity modes).  Rank <= D after rounding.
TtOperator build_dissipation_operator(const BgkConfig& cfg);

/// Prebuilt operators for the semi-implicit time loop.
struct BgkOperators {
  TtOperator transport;    // L
  TtOperator cnlf_lhs;     // I - dt*L
  TtOperator cnlf_rhs;     // I + dt*L
  TtOperator dissipation;  // M (built only when eps_diss > 0)
  bool has_dissipation = false;
};

BgkOperators build_bgk_operators(const BgkConfig& cfg);
BgkOperators build_bgk_operators(const BgkConfig& cfg, double dt);

/// Conserved functionals of a phase-space train: mass h^D<rho>,
/// momentum h^D<rho u_i>, kinetic energy h^D<W>.  Evaluated by direct TT
/// contraction with the quadrature weights.
struct ConservedQuantities {
  double mass = 0.0;
  std::vector<double> momentum;
  double energy = 0.0;
};

ConservedQuantities conserved_quantities(const TtTensor& f, const BgkConfig& cfg);

}  // namespace aptt
