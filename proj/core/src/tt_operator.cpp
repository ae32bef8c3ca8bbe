#include "aptt/tt_operator.hpp"

#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace aptt {

namespace {

void check_valid(const std::vector<TtOpCore>& cores) {
  if (cores.empty()) throw std::invalid_argument("operator train needs at least one core");
  if (cores.front().s_left != 1 || cores.back().s_right != 1)
    throw std::invalid_argument("boundary operator ranks must be 1");
  for (std::size_t i = 0; i + 1 < cores.size(); ++i)
    if (cores[i].s_right != cores[i + 1].s_left)
      throw std::invalid_argument("operator core rank chain is broken");
  for (const auto& c : cores)
    if (c.n_out != c.n_in) throw std::invalid_argument("operator cores must be square per mode");
}

}  // namespace

std::vector<OpCoreEntry> op_core_nonzeros(const TtOpCore& c) {
  std::vector<OpCoreEntry> nz;
  for (int b = 0; b < c.s_right; ++b)
    for (int ji = 0; ji < c.n_in; ++ji)
      for (int jo = 0; jo < c.n_out; ++jo)
        for (int a = 0; a < c.s_left; ++a) {
          const double w = c.at(a, jo, ji, b);
          if (w != 0.0) nz.push_back({a, jo, ji, b, w});
        }
  return nz;
}

TtOperator::TtOperator(std::vector<TtOpCore> cores) : cores_(std::move(cores)) {
  check_valid(cores_);
}

TtOperator TtOperator::identity(const std::vector<int>& dims) {
  std::vector<TtOpCore> cores;
  cores.reserve(dims.size());
  for (int n : dims) {
    TtOpCore c(1, n, n, 1);
    for (int j = 0; j < n; ++j) c.at(0, j, j, 0) = 1.0;
    cores.push_back(std::move(c));
  }
  return TtOperator(std::move(cores));
}

std::vector<int> TtOperator::dims() const {
  std::vector<int> d;
  d.reserve(cores_.size());
  for (const auto& c : cores_) d.push_back(c.n_out);
  return d;
}

std::vector<int> TtOperator::op_ranks() const {
  std::vector<int> r;
  for (std::size_t i = 0; i + 1 < cores_.size(); ++i) r.push_back(cores_[i].s_right);
  return r;
}

int TtOperator::max_rank() const {
  int m = 1;
  for (int r : op_ranks()) m = std::max(m, r);
  return m;
}

std::string TtOperator::shape_string() const {
  std::ostringstream os;
  os << "ttop[";
  for (std::size_t i = 0; i < cores_.size(); ++i) {
    if (i) os << " ";
    os << cores_[i].s_left << ":" << cores_[i].n_out << "x" << cores_[i].n_in << ":"
       << cores_[i].s_right;
  }
  os << "]";
  return os.str();
}

TtOperator op_from_kron_terms(const std::vector<std::vector<Eigen::MatrixXd>>& terms) {
  if (terms.empty()) throw std::invalid_argument("op_from_kron_terms: no terms");
  const int d = static_cast<int>(terms.front().size());
  if (d == 0) throw std::invalid_argument("op_from_kron_terms: empty term");
  const int nt = static_cast<int>(terms.size());
  for (const auto& t : terms) {
    if (static_cast<int>(t.size()) != d)
      throw std::invalid_argument("op_from_kron_terms: inconsistent factor count");
    for (int i = 0; i < d; ++i) {
      if (t[static_cast<std::size_t>(i)].rows() != t[static_cast<std::size_t>(i)].cols() ||
          t[static_cast<std::size_t>(i)].rows() != terms.front()[static_cast<std::size_t>(i)].rows())
        throw std::invalid_argument("op_from_kron_terms: factor size mismatch");
    }
  }

  std::vector<TtOpCore> cores;
  cores.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const int n = static_cast<int>(terms.front()[static_cast<std::size_t>(i)].rows());
    const int sl = (i == 0 || d == 1) ? 1 : nt;
    const int sr = (i == d - 1) ? 1 : nt;
    TtOpCore c(sl, n, n, sr);
    for (int t = 0; t < nt; ++t) {
      const Eigen::MatrixXd& f = terms[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
      const int a = (sl == 1) ? 0 : t;
      const int b = (sr == 1) ? 0 : t;
      for (int ji = 0; ji < n; ++ji)
        for (int jo = 0; jo < n; ++jo) c.at(a, jo, ji, b) += f(jo, ji);
    }
    cores.push_back(std::move(c));
  }
  return TtOperator(std::move(cores));
}

TtTensor op_apply(const TtOperator& op, const TtTensor& t) {
  if (op.dims() != t.dims()) throw std::invalid_argument("op_apply: mode sizes differ");
  const int d = t.order();
  std::vector<TtCore> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const TtOpCore& w = op.core(i);
    const TtCore& x = t.core(i);
    // Combined ranks (x fastest): out rank = r_x * s.
    TtCore y(x.r_left * w.s_left, x.n, x.r_right * w.s_right);
    const auto nz = op_core_nonzeros(w);
    for (const auto& e : nz) {
      auto xs = x.slice(e.ji);
      Eigen::Map<Eigen::MatrixXd, 0, Eigen::OuterStride<>> ys(
          y.v.data() + static_cast<std::size_t>(y.r_left) * e.jo, y.r_left, y.r_right,
          Eigen::OuterStride<>(static_cast<Eigen::Index>(y.r_left) * y.n));
      ys.block(static_cast<Eigen::Index>(e.s_left) * x.r_left,
               static_cast<Eigen::Index>(e.s_right) * x.r_right, x.r_left, x.r_right) += e.w * xs;
    }
    out.push_back(std::move(y));
  }
  return TtTensor(std::move(out));
}

TtOperator op_round(const TtOperator& op, double eps) {
  // Flatten the two physical indices of each core and reuse tensor rounding.
  std::vector<TtCore> flat;
  flat.reserve(static_cast<std::size_t>(op.order()));
  for (int i = 0; i < op.order(); ++i) {
    const TtOpCore& c = op.core(i);
    TtCore f(c.s_left, c.n_out * c.n_in, c.s_right);
    f.v = c.v;  // same layout: (jo, ji) combined with jo fastest
    flat.push_back(std::move(f));
  }
  TtTensor rounded = tt_round(TtTensor(std::move(flat)), eps);
  std::vector<TtOpCore> out;
  out.reserve(static_cast<std::size_t>(op.order()));
  for (int i = 0; i < op.order(); ++i) {
    const TtCore& f = rounded.core(i);
    const TtOpCore& c = op.core(i);
    TtOpCore o(f.r_left, c.n_out, c.n_in, f.r_right);
    o.v = f.v;
    out.push_back(std::move(o));
  }
  return TtOperator(std::move(out));
}

TtOperator op_scale(TtOperator op, double c) {
  TtOpCore& first = op.core(0);
  Eigen::Map<Eigen::VectorXd>(first.v.data(), first.size()) *= c;
  return op;
}

Eigen::MatrixXd op_to_dense_matrix(const TtOperator& op, std::int64_t max_entries) {
  const std::int64_t n = shape_size(op.dims());
  if (n * n > max_entries)
    throw std::invalid_argument("op_to_dense_matrix: operator too large to densify");
  // Fold cores left to right over the combined (row, col) Kronecker index.
  // Running block: (rows_so_far * cols_so_far) x s, with row index fastest.
  Eigen::MatrixXd block = Eigen::MatrixXd::Ones(1, 1);
  std::int64_t rows = 1, cols = 1;
  for (int i = 0; i < op.order(); ++i) {
    const TtOpCore& c = op.core(i);
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(rows * c.n_out * cols * c.n_in, c.s_right);
    for (int b = 0; b < c.s_right; ++b)
      for (int ji = 0; ji < c.n_in; ++ji)
        for (int jo = 0; jo < c.n_out; ++jo)
          for (int a = 0; a < c.s_left; ++a) {
            const double w = c.at(a, jo, ji, b);
            if (w == 0.0) continue;
            // next[(r, jo), (q, ji)][b] += w * block[r, q][a]
            for (std::int64_t q = 0; q < cols; ++q) {
              const std::int64_t dst_col = q + cols * ji;
              const std::int64_t dst0 = (rows * c.n_out) * dst_col + rows * jo;
              const std::int64_t src0 = rows * q;
              next.block(dst0, b, rows, 1) += w * block.block(src0, a, rows, 1);
            }
          }
    block = std::move(next);
    rows *= c.n_out;
    cols *= c.n_in;
  }
  Eigen::MatrixXd m(rows, cols);
  for (std::int64_t q = 0; q < cols; ++q) m.col(q) = block.block(rows * q, 0, rows, 1);
  return m;
}

}  // namespace aptt
