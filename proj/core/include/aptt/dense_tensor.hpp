#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace aptt {

/// Dense d-mode tensor over doubles.
///
/// Linearization convention (used everywhere in this project, including the
/// binary field dumps): the FIRST mode index varies fastest, i.e.
///   linear = i_1 + n_1*(i_2 + n_2*(i_3 + ...)).
/// This is Fortran/column-major order, so mode-k unfoldings are contiguous
/// Eigen maps.
class DenseTensor {
 public:
  DenseTensor() = default;
  explicit DenseTensor(std::vector<int> dims);
  DenseTensor(std::vector<int> dims, std::vector<double> values);

  int order() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  std::int64_t size() const { return static_cast<std::int64_t>(v_.size()); }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  double& operator[](std::int64_t i) { return v_[static_cast<std::size_t>(i)]; }
  double operator[](std::int64_t i) const { return v_[static_cast<std::size_t>(i)]; }

  std::int64_t linear_index(const std::vector<int>& idx) const;
  /// Inverse of linear_index.
  std::vector<int> multi_index(std::int64_t linear) const;

  double& at(const std::vector<int>& idx) { return v_[static_cast<std::size_t>(linear_index(idx))]; }
  double at(const std::vector<int>& idx) const { return v_[static_cast<std::size_t>(linear_index(idx))]; }

  double frobenius_norm() const;

  Eigen::Map<Eigen::VectorXd> vec() { return {v_.data(), size()}; }
  Eigen::Map<const Eigen::VectorXd> vec() const { return {v_.data(), size()}; }

 private:
  std::vector<int> dims_;
  std::vector<double> v_;
};

/// Number of elements of a shape, with overflow check.
std::int64_t shape_size(const std::vector<int>& dims);

/// out[..., i, ...] = sum_j M(i, j) * t[..., j, ...] along `mode` (0-based).
DenseTensor apply_mode_matrix(const DenseTensor& t, const Eigen::MatrixXd& m, int mode);

/// In-place diagonal scaling along `mode`: t[..., j, ...] *= w[j].
void scale_mode(DenseTensor& t, const Eigen::VectorXd& w, int mode);

/// sum over mode `mode` weighted by w: returns tensor of order d-1.
DenseTensor contract_mode(const DenseTensor& t, const Eigen::VectorXd& w, int mode);

}  // namespace aptt
