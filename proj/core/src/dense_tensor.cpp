#include "aptt/dense_tensor.hpp"

#include <limits>
#include <stdexcept>

namespace aptt {

std::int64_t shape_size(const std::vector<int>& dims) {
  std::int64_t n = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("tensor mode sizes must be positive");
    if (n > std::numeric_limits<std::int64_t>::max() / d)
      throw std::invalid_argument("tensor size overflows 64-bit index");
    n *= d;
  }
  return n;
}

DenseTensor::DenseTensor(std::vector<int> dims)
    : dims_(std::move(dims)), v_(static_cast<std::size_t>(shape_size(dims_)), 0.0) {}

DenseTensor::DenseTensor(std::vector<int> dims, std::vector<double> values)
    : dims_(std::move(dims)), v_(std::move(values)) {
  if (shape_size(dims_) != static_cast<std::int64_t>(v_.size()))
    throw std::invalid_argument("value count does not match mode sizes");
}

std::int64_t DenseTensor::linear_index(const std::vector<int>& idx) const {
  if (idx.size() != dims_.size()) throw std::invalid_argument("index order mismatch");
  std::int64_t lin = 0;
  std::int64_t stride = 1;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= dims_[k]) throw std::out_of_range("tensor index out of range");
    lin += stride * idx[k];
    stride *= dims_[k];
  }
  return lin;
}

std::vector<int> DenseTensor::multi_index(std::int64_t linear) const {
  std::vector<int> idx(dims_.size());
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    idx[k] = static_cast<int>(linear % dims_[k]);
    linear /= dims_[k];
  }
  return idx;
}

double DenseTensor::frobenius_norm() const { return vec().norm(); }

DenseTensor apply_mode_matrix(const DenseTensor& t, const Eigen::MatrixXd& m, int mode) {
  const auto& dims = t.dims();
  if (mode < 0 || mode >= t.order()) throw std::invalid_argument("mode out of range");
  const int n = dims[static_cast<std::size_t>(mode)];
  if (m.cols() != n) throw std::invalid_argument("matrix width does not match mode size");

  std::vector<int> out_dims = dims;
  out_dims[static_cast<std::size_t>(mode)] = static_cast<int>(m.rows());
  DenseTensor out(out_dims);

  std::int64_t prefix = 1;
  for (int k = 0; k < mode; ++k) prefix *= dims[static_cast<std::size_t>(k)];
  std::int64_t suffix = t.size() / (prefix * n);

  const std::int64_t in_slab = prefix * n;
  const std::int64_t out_slab = prefix * m.rows();
  for (std::int64_t s = 0; s < suffix; ++s) {
    Eigen::Map<const Eigen::MatrixXd> in(t.data() + s * in_slab, prefix, n);
    Eigen::Map<Eigen::MatrixXd> dst(out.data() + s * out_slab, prefix, m.rows());
    dst.noalias() = in * m.transpose();
  }
  return out;
}

void scale_mode(DenseTensor& t, const Eigen::VectorXd& w, int mode) {
  const auto& dims = t.dims();
  if (mode < 0 || mode >= t.order()) throw std::invalid_argument("mode out of range");
  const int n = dims[static_cast<std::size_t>(mode)];
  if (w.size() != n) throw std::invalid_argument("weight length does not match mode size");

  std::int64_t prefix = 1;
  for (int k = 0; k < mode; ++k) prefix *= dims[static_cast<std::size_t>(k)];
  std::int64_t suffix = t.size() / (prefix * n);

  for (std::int64_t s = 0; s < suffix; ++s) {
    Eigen::Map<Eigen::MatrixXd> slab(t.data() + s * prefix * n, prefix, n);
    slab *= w.asDiagonal();
  }
}

DenseTensor contract_mode(const DenseTensor& t, const Eigen::VectorXd& w, int mode) {
  const auto& dims = t.dims();
  if (mode < 0 || mode >= t.order()) throw std::invalid_argument("mode out of range");
  const int n = dims[static_cast<std::size_t>(mode)];
  if (w.size() != n) throw std::invalid_argument("weight length does not match mode size");

  std::vector<int> out_dims;
  for (int k = 0; k < t.order(); ++k)
    if (k != mode) out_dims.push_back(dims[static_cast<std::size_t>(k)]);
  if (out_dims.empty()) out_dims.push_back(1);

  std::int64_t prefix = 1;
  for (int k = 0; k < mode; ++k) prefix *= dims[static_cast<std::size_t>(k)];
  std::int64_t suffix = t.size() / (prefix * n);

  DenseTensor out(out_dims);
  for (std::int64_t s = 0; s < suffix; ++s) {
    Eigen::Map<const Eigen::MatrixXd> slab(t.data() + s * prefix * n, prefix, n);
    Eigen::Map<Eigen::VectorXd> dst(out.data() + s * prefix, prefix);
    dst.noalias() += slab * w;
  }
  return out;
}

}  // namespace aptt
