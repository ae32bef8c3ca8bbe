#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "aptt/tt_tensor.hpp"

namespace aptt {

/// One 4-index operator core of shape (s_left, n_out, n_in, s_right), stored
/// with the left rank fastest:
///   value(a, jo, ji, b) = v[a + s_left*(jo + n_out*(ji + n_in*b))].
struct TtOpCore {
  int s_left = 0;
  int n_out = 0;
  int n_in = 0;
  int s_right = 0;
  std::vector<double> v;

  TtOpCore() = default;
  TtOpCore(int sl, int no, int ni, int sr)
      : s_left(sl), n_out(no), n_in(ni), s_right(sr),
        v(static_cast<std::size_t>(sl) * no * ni * sr, 0.0) {}

  std::int64_t size() const { return static_cast<std::int64_t>(v.size()); }
  double& at(int a, int jo, int ji, int b) {
    return v[static_cast<std::size_t>(a) +
             static_cast<std::size_t>(s_left) *
                 (jo + static_cast<std::size_t>(n_out) * (ji + static_cast<std::size_t>(n_in) * b))];
  }
  double at(int a, int jo, int ji, int b) const {
    return v[static_cast<std::size_t>(a) +
             static_cast<std::size_t>(s_left) *
                 (jo + static_cast<std::size_t>(n_out) * (ji + static_cast<std::size_t>(n_in) * b))];
  }

  /// (s_left x s_right) matrix slice for a fixed physical entry (jo, ji).
  Eigen::Map<const Eigen::MatrixXd, 0, Eigen::OuterStride<>> slice(int jo, int ji) const {
    return {v.data() + static_cast<std::size_t>(s_left) * (jo + static_cast<std::size_t>(n_out) * ji),
            s_left, s_right,
            Eigen::OuterStride<>(static_cast<Eigen::Index>(s_left) * n_out * n_in)};
  }
};

/// Structural nonzero of an operator core, precomputed for sparse stencils.
struct OpCoreEntry {
  int s_left, jo, ji, s_right;
  double w;
};

std::vector<OpCoreEntry> op_core_nonzeros(const TtOpCore& c);

/// Linear operator in tensor-train (matrix-product-operator) form.  Square
/// physical indices per mode; boundary operator ranks are 1.
class TtOperator {
 public:
  TtOperator() = default;
  explicit TtOperator(std::vector<TtOpCore> cores);

  static TtOperator identity(const std::vector<int>& dims);

  int order() const { return static_cast<int>(cores_.size()); }
  std::vector<int> dims() const;
  /// Interior operator ranks (s_1, ..., s_{d-1}).
  std::vector<int> op_ranks() const;
  int max_rank() const;

  const TtOpCore& core(int i) const { return cores_[static_cast<std::size_t>(i)]; }
  TtOpCore& core(int i) { return cores_[static_cast<std::size_t>(i)]; }

  std::string shape_string() const;

 private:
  std::vector<TtOpCore> cores_;
};

/// Sum of Kronecker products: term t contributes factor `terms[t][i]` acting
/// on mode i.  All factors must be square and mode sizes consistent across
/// terms.  Operator ranks of the result are at most the number of terms.
TtOperator op_from_kron_terms(const std::vector<std::vector<Eigen::MatrixXd>>& terms);

/// Apply to a TT tensor.  Output ranks are bounded by op_rank * rank
/// component-wise; no rounding is performed here.
TtTensor op_apply(const TtOperator& op, const TtTensor& t);

/// Recompress the operator by TT-rounding its cores with the two physical
/// indices flattened into one mode.
TtOperator op_round(const TtOperator& op, double eps);

TtOperator op_scale(TtOperator op, double c);

/// Dense matrix of the operator in the same linearization as DenseTensor
/// (guarded; refuses > max_entries total matrix entries).
Eigen::MatrixXd op_to_dense_matrix(const TtOperator& op, std::int64_t max_entries = (1 << 26));

}  // namespace aptt
