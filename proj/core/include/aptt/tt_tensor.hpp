#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "aptt/dense_tensor.hpp"

namespace aptt {

/// One 3-index tensor-train core of shape (r_left, n, r_right), stored with
/// the left rank index fastest: value(a, j, b) = v[a + r_left*(j + n*b)].
/// Both standard unfoldings are therefore contiguous:
///   left_unfold  : (r_left*n) x r_right
///   right_unfold : r_left x (n*r_right)
struct TtCore {
  int r_left = 0;
  int n = 0;
  int r_right = 0;
  std::vector<double> v;

  TtCore() = default;
  TtCore(int rl, int nn, int rr)
      : r_left(rl), n(nn), r_right(rr),
        v(static_cast<std::size_t>(rl) * nn * rr, 0.0) {}

  std::int64_t size() const { return static_cast<std::int64_t>(v.size()); }
  double& at(int a, int j, int b) {
    return v[static_cast<std::size_t>(a) + static_cast<std::size_t>(r_left) * (j + static_cast<std::size_t>(n) * b)];
  }
  double at(int a, int j, int b) const {
    return v[static_cast<std::size_t>(a) + static_cast<std::size_t>(r_left) * (j + static_cast<std::size_t>(n) * b)];
  }

  Eigen::Map<const Eigen::MatrixXd> left_unfold() const {
    return {v.data(), static_cast<Eigen::Index>(r_left) * n, r_right};
  }
  Eigen::Map<const Eigen::MatrixXd> right_unfold() const {
    return {v.data(), r_left, static_cast<Eigen::Index>(n) * r_right};
  }
  /// Mode slice j as a (r_left x r_right) matrix (outer stride r_left*n).
  Eigen::Map<const Eigen::MatrixXd, 0, Eigen::OuterStride<>> slice(int j) const {
    return {v.data() + static_cast<std::size_t>(r_left) * j, r_left, r_right,
            Eigen::OuterStride<>(static_cast<Eigen::Index>(r_left) * n)};
  }
};

/// Tensor in tensor-train format: a chain of d cores with boundary ranks 1.
/// The represented element at multi-index (i_1, ..., i_d) is the product of
/// the corresponding core slices, contracted over the bond (rank) indices.
class TtTensor {
 public:
  TtTensor() = default;
  explicit TtTensor(std::vector<TtCore> cores);

  static TtTensor zero(const std::vector<int>& dims);
  static TtTensor constant(const std::vector<int>& dims, double value);
  /// Rank-one tensor: outer product of the given mode vectors.
  static TtTensor rank_one(const std::vector<Eigen::VectorXd>& factors);

  int order() const { return static_cast<int>(cores_.size()); }
  std::vector<int> dims() const;
  /// Interior bond ranks (r_1, ..., r_{d-1}).
  std::vector<int> ranks() const;
  int max_rank() const;
  double average_rank() const;

  const TtCore& core(int i) const { return cores_[static_cast<std::size_t>(i)]; }
  TtCore& core(int i) { return cores_[static_cast<std::size_t>(i)]; }
  const std::vector<TtCore>& cores() const { return cores_; }

  /// Total stored doubles, for memory diagnostics.
  std::int64_t storage_size() const;

  /// Plain-text dump of core shapes and ranks, for diagnostics.
  std::string shape_string() const;

 private:
  std::vector<TtCore> cores_;
};

/// Compress a dense tensor to TT with prescribed relative accuracy:
/// ||dense(out) - a||_F <= eps * ||a||_F.  Sequential SVD truncation with a
/// per-unfolding budget of eps*||a||_F/sqrt(d-1).  A zero tensor yields the
/// exact rank-one zero train.
TtTensor tt_from_dense(const DenseTensor& a, double eps);

/// Reconstruct the dense tensor (guarded; refuses > max_entries).
DenseTensor tt_to_dense(const TtTensor& t, std::int64_t max_entries = (1 << 26));

/// Recompress: ||dense(out) - dense(t)||_F <= eps * ||dense(t)||_F, and every
/// output rank is <= the corresponding input rank.
TtTensor tt_round(const TtTensor& t, double eps);

/// dense(out) = dense(a) + dense(b); output ranks are the component-wise sums.
TtTensor tt_add(const TtTensor& a, const TtTensor& b);

TtTensor tt_scale(TtTensor a, double c);

/// Element-wise product; output ranks are the component-wise products.
TtTensor tt_hadamard(const TtTensor& a, const TtTensor& b);

/// Frobenius inner product.
double tt_dot(const TtTensor& a, const TtTensor& b);

/// Frobenius norm, computed via an orthogonalization sweep.  Stable even for
/// trains built as differences of nearly equal tensors, where the Gram-chain
/// formula sqrt(<t,t>) loses all accuracy to cancellation.
double tt_norm(const TtTensor& t);

/// Element at a multi-index via the chained core products.
double tt_value_at(const TtTensor& t, const std::vector<int>& idx);

/// Insert a new mode of size m at `position` (1-based, in 1..d+1).  Slices of
/// the result along the new mode all equal the original tensor; the ranks are
/// unchanged with the bond value at the insertion point duplicated.
TtTensor expand(const TtTensor& t, int position, int m);

/// Contract the first half of the cores of an order-2D train into a dense
/// (D+1)-mode tensor of shape (n_1, ..., n_D, r_D).
DenseTensor partial_reduce_spatial(const TtTensor& f);

/// Full contraction with one weight vector per mode:
/// sum_i w_1(i_1)...w_d(i_d) * t(i_1,...,i_d).
double tt_weighted_sum(const TtTensor& t, const std::vector<Eigen::VectorXd>& weights);

/// Keep every stride-th slice of each mode (grid restriction onto a coarser
/// nested grid). Ranks are unchanged.
TtTensor tt_subsample(const TtTensor& t, int stride);

/// Same tensor, re-represented with cores 1..d-1 right-orthogonal (all norm
/// concentrated in core 0).
TtTensor tt_orthogonalize_right(const TtTensor& t);

}  // namespace aptt
