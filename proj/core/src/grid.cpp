#include "aptt/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aptt {

Grid Grid::uniform(int m) {
  if (m < 4 || m % 2 != 0) throw std::invalid_argument("grid size m must be even and >= 4");
  Grid g;
  g.m = m;
  g.h = 2.0 * std::numbers::pi / m;
  g.nodes.resize(m);
  for (int k = 0; k < m; ++k) g.nodes(k) = g.h * k - std::numbers::pi;
  return g;
}

UpwindMatrices build_upwind_matrices(int m, const Eigen::VectorXd& nodes) {
  if (m < 4) throw std::invalid_argument("upwind stencil needs m >= 4");
  if (nodes.size() != m) throw std::invalid_argument("node count does not match m");
  const double h = 2.0 * std::numbers::pi / m;

  UpwindMatrices u;
  u.dplus = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    u.dplus(k, k) = 3.0 / (2.0 * h);
    u.dplus(k, (k - 1 + m) % m) = -4.0 / (2.0 * h);
    u.dplus(k, (k - 2 + m) % m) = 1.0 / (2.0 * h);
  }
  u.dminus = -u.dplus.transpose();

  u.vplus = Eigen::MatrixXd::Zero(m, m);
  u.vminus = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    u.vplus(k, k) = std::max(nodes(k), 0.0);
    u.vminus(k, k) = std::min(nodes(k), 0.0);
  }
  return u;
}

Eigen::MatrixXd fourth_difference_matrix(int m, double h) {
  if (m < 4) throw std::invalid_argument("fourth difference stencil needs m >= 4");
  const double h4 = h * h * h * h;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    d(k, k) = 6.0 / h4;
    d(k, (k - 1 + m) % m) += -4.0 / h4;
    d(k, (k + 1) % m) += -4.0 / h4;
    d(k, (k - 2 + m) % m) += 1.0 / h4;
    d(k, (k + 2) % m) += 1.0 / h4;
  }
  return d;
}

}  // namespace aptt
