#pragma once

#include <Eigen/Core>

namespace aptt {

/// Uniform periodic grid on [-pi, pi): m nodes at h*k - pi, h = 2*pi/m.
/// The same nodes discretize both space (periodic) and velocity (truncated).
struct Grid {
  int m = 0;
  double h = 0.0;
  Eigen::VectorXd nodes;

  static Grid uniform(int m);
};

struct UpwindMatrices {
  Eigen::MatrixXd dplus;   // one-sided difference, circulant (3, -4, 1)/2h
  Eigen::MatrixXd dminus;  // -dplus^T
  Eigen::MatrixXd vplus;   // diag(max(v, 0))
  Eigen::MatrixXd vminus;  // diag(min(v, 0))
};

/// Second-order upwind stencil matrices on the periodic grid plus the
/// positive/negative velocity diagonals for the given nodes.
UpwindMatrices build_upwind_matrices(int m, const Eigen::VectorXd& nodes);

/// Circulant fourth difference with stencil (1, -4, 6, -4, 1)/h^4.
Eigen::MatrixXd fourth_difference_matrix(int m, double h);

}  // namespace aptt
