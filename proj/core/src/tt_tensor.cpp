#include "aptt/tt_tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace aptt {

namespace {

void check_valid(const std::vector<TtCore>& cores) {
  if (cores.empty()) throw std::invalid_argument("tensor train needs at least one core");
  if (cores.front().r_left != 1 || cores.back().r_right != 1)
    throw std::invalid_argument("boundary TT ranks must be 1");
  for (std::size_t i = 0; i + 1 < cores.size(); ++i)
    if (cores[i].r_right != cores[i + 1].r_left)
      throw std::invalid_argument("TT core rank chain is broken");
}

/// Economy SVD; BDC for larger blocks, Jacobi for tiny ones.
void svd_economy(const Eigen::MatrixXd& m, Eigen::MatrixXd& u, Eigen::VectorXd& s,
                 Eigen::MatrixXd& v) {
  if (m.rows() <= 16 || m.cols() <= 16) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    s = svd.singularValues();
    v = svd.matrixV();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    s = svd.singularValues();
    v = svd.matrixV();
  }
}

/// Smallest kept rank whose discarded tail satisfies sum(sigma^2) < delta^2.
/// A singular value landing exactly on the budget is kept (inclusive cut).
int truncation_rank(const Eigen::VectorXd& s, double delta) {
  const double d2 = delta * delta;
  double tail = 0.0;
  int keep = static_cast<int>(s.size());
  while (keep > 1) {
    const double c = tail + s[keep - 1] * s[keep - 1];
    if (c < d2) {
      tail = c;
      --keep;
    } else {
      break;
    }
  }
  return keep;
}

/// Thin QR: m = q * r with q (rows x k), r (k x cols), k = min(rows, cols).
void qr_thin(const Eigen::MatrixXd& m, Eigen::MatrixXd& q, Eigen::MatrixXd& r) {
  const Eigen::Index k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), k);
  r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
}

/// Right-to-left orthogonalization (all cores except the first get
/// row-orthonormal right unfoldings).  After this, the Frobenius norm of the
/// train equals the Frobenius norm of core 0.
void orthogonalize_rl(std::vector<TtCore>& cores) {
  for (int i = static_cast<int>(cores.size()) - 1; i >= 1; --i) {
    TtCore& c = cores[static_cast<std::size_t>(i)];
    Eigen::MatrixXd mt = c.right_unfold().transpose();  // (n*r_right) x r_left
    Eigen::MatrixXd q, r;
    qr_thin(mt, q, r);
    const int k = static_cast<int>(q.cols());
    TtCore nc(k, c.n, c.r_right);
    Eigen::Map<Eigen::MatrixXd>(nc.v.data(), k, static_cast<Eigen::Index>(c.n) * c.r_right) =
        q.transpose();
    TtCore& p = cores[static_cast<std::size_t>(i - 1)];
    TtCore np(p.r_left, p.n, k);
    Eigen::Map<Eigen::MatrixXd>(np.v.data(), static_cast<Eigen::Index>(p.r_left) * p.n, k).noalias() =
        p.left_unfold() * r.transpose();
    cores[static_cast<std::size_t>(i)] = std::move(nc);
    cores[static_cast<std::size_t>(i - 1)] = std::move(np);
  }
}

}  // namespace

TtTensor::TtTensor(std::vector<TtCore> cores) : cores_(std::move(cores)) { check_valid(cores_); }

TtTensor TtTensor::zero(const std::vector<int>& dims) {
  std::vector<TtCore> cores;
  cores.reserve(dims.size());
  for (int n : dims) cores.emplace_back(1, n, 1);
  return TtTensor(std::move(cores));
}

TtTensor TtTensor::constant(const std::vector<int>& dims, double value) {
  TtTensor t = zero(dims);
  for (auto& c : t.cores_) std::fill(c.v.begin(), c.v.end(), 1.0);
  for (double& x : t.cores_.front().v) x = value;
  return t;
}

TtTensor TtTensor::rank_one(const std::vector<Eigen::VectorXd>& factors) {
  if (factors.empty()) throw std::invalid_argument("rank_one needs at least one factor");
  std::vector<TtCore> cores;
  cores.reserve(factors.size());
  for (const auto& f : factors) {
    TtCore c(1, static_cast<int>(f.size()), 1);
    Eigen::Map<Eigen::VectorXd>(c.v.data(), f.size()) = f;
    cores.push_back(std::move(c));
  }
  return TtTensor(std::move(cores));
}

std::vector<int> TtTensor::dims() const {
  std::vector<int> d;
  d.reserve(cores_.size());
  for (const auto& c : cores_) d.push_back(c.n);
  return d;
}

std::vector<int> TtTensor::ranks() const {
  std::vector<int> r;
  for (std::size_t i = 0; i + 1 < cores_.size(); ++i) r.push_back(cores_[i].r_right);
  return r;
}

int TtTensor::max_rank() const {
  int m = 1;
  for (int r : ranks()) m = std::max(m, r);
  return m;
}

double TtTensor::average_rank() const {
  const auto r = ranks();
  if (r.empty()) return 1.0;
  return static_cast<double>(std::accumulate(r.begin(), r.end(), 0LL)) / static_cast<double>(r.size());
}

std::int64_t TtTensor::storage_size() const {
  std::int64_t s = 0;
  for (const auto& c : cores_) s += c.size();
  return s;
}

std::string TtTensor::shape_string() const {
  std::ostringstream os;
  os << "tt[";
  for (std::size_t i = 0; i < cores_.size(); ++i) {
    if (i) os << " ";
    os << cores_[i].r_left << ":" << cores_[i].n << ":" << cores_[i].r_right;
  }
  os << "]";
  return os.str();
}

TtTensor tt_from_dense(const DenseTensor& a, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0, 1]");
  if (a.size() == 0) throw std::invalid_argument("cannot compress an empty tensor");
  const int d = a.order();
  const double nrm = a.frobenius_norm();
  if (nrm == 0.0) return TtTensor::zero(a.dims());
  if (d == 1) {
    TtCore c(1, a.dims()[0], 1);
    c.v = a.values();
    return TtTensor({std::move(c)});
  }

  const double delta = eps * nrm / std::sqrt(static_cast<double>(d - 1));
  std::vector<TtCore> cores(static_cast<std::size_t>(d));
  std::vector<double> carry(a.values());
  int r = 1;
  std::int64_t remaining = a.size();  // elements of carry = r * remaining_modes
  for (int i = 0; i + 1 < d; ++i) {
    const int n = a.dims()[static_cast<std::size_t>(i)];
    const std::int64_t rows = static_cast<std::int64_t>(r) * n;
    const std::int64_t cols = remaining / n;
    Eigen::Map<const Eigen::MatrixXd> m(carry.data(), rows, cols);
    Eigen::MatrixXd u, v;
    Eigen::VectorXd s;
    svd_economy(m, u, s, v);
    const int k = truncation_rank(s, delta);
    TtCore c(r, n, k);
    Eigen::Map<Eigen::MatrixXd>(c.v.data(), rows, k) = u.leftCols(k);
    cores[static_cast<std::size_t>(i)] = std::move(c);
    Eigen::MatrixXd next = s.head(k).asDiagonal() * v.leftCols(k).transpose();  // k x cols
    carry.assign(next.data(), next.data() + next.size());
    r = k;
    remaining = cols;
  }
  TtCore last(r, a.dims().back(), 1);
  last.v = carry;
  cores[static_cast<std::size_t>(d - 1)] = std::move(last);
  return TtTensor(std::move(cores));
}

DenseTensor tt_to_dense(const TtTensor& t, std::int64_t max_entries) {
  const std::int64_t total = shape_size(t.dims());
  if (total > max_entries)
    throw std::invalid_argument("tt_to_dense: tensor too large to densify (" + std::to_string(total) +
                                " entries)");
  // Fold cores left to right; the running block keeps earlier modes fastest.
  Eigen::MatrixXd block = Eigen::Map<const Eigen::MatrixXd>(
      t.core(0).v.data(), t.core(0).n, t.core(0).r_right);
  for (int i = 1; i < t.order(); ++i) {
    const TtCore& c = t.core(i);
    Eigen::MatrixXd next = block * c.right_unfold();  // (prod_n) x (n*r_right)
    block = Eigen::Map<const Eigen::MatrixXd>(next.data(), next.rows() * c.n, c.r_right);
  }
  DenseTensor out(t.dims());
  Eigen::Map<Eigen::VectorXd>(out.data(), out.size()) =
      Eigen::Map<const Eigen::VectorXd>(block.data(), block.size());
  return out;
}

TtTensor tt_round(const TtTensor& t, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("eps must lie in (0, 1]");
  const int d = t.order();
  if (d == 1) return t;

  std::vector<TtCore> cores = t.cores();
  orthogonalize_rl(cores);
  const double nrm = Eigen::Map<const Eigen::VectorXd>(cores[0].v.data(), cores[0].size()).norm();
  if (nrm == 0.0) return TtTensor::zero(t.dims());
  const double delta = eps * nrm / std::sqrt(static_cast<double>(d - 1));

  for (int i = 0; i + 1 < d; ++i) {
    TtCore& c = cores[static_cast<std::size_t>(i)];
    Eigen::MatrixXd u, v;
    Eigen::VectorXd s;
    svd_economy(c.left_unfold(), u, s, v);
    int k = truncation_rank(s, delta);
    // Input ranks are never exceeded (the SVD rank is bounded by them already).
    TtCore nc(c.r_left, c.n, k);
    Eigen::Map<Eigen::MatrixXd>(nc.v.data(), static_cast<Eigen::Index>(c.r_left) * c.n, k) =
        u.leftCols(k);
    Eigen::MatrixXd carry = s.head(k).asDiagonal() * v.leftCols(k).transpose();  // k x r_right
    TtCore& nx = cores[static_cast<std::size_t>(i + 1)];
    TtCore nn(k, nx.n, nx.r_right);
    Eigen::Map<Eigen::MatrixXd>(nn.v.data(), k, static_cast<Eigen::Index>(nx.n) * nx.r_right)
        .noalias() = carry * nx.right_unfold();
    cores[static_cast<std::size_t>(i)] = std::move(nc);
    cores[static_cast<std::size_t>(i + 1)] = std::move(nn);
  }
  return TtTensor(std::move(cores));
}

TtTensor tt_add(const TtTensor& a, const TtTensor& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("tt_add: mode sizes differ");
  const int d = a.order();
  if (d == 1) {
    TtCore c = a.core(0);
    Eigen::Map<Eigen::VectorXd>(c.v.data(), c.size()) +=
        Eigen::Map<const Eigen::VectorXd>(b.core(0).v.data(), b.core(0).size());
    return TtTensor({std::move(c)});
  }
  // Boundary cores concatenate, interior cores go block-diagonal.
  std::vector<TtCore> cores;
  cores.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const TtCore& ca = a.core(i);
    const TtCore& cb = b.core(i);
    const int row_off = (i == 0) ? 0 : ca.r_left;
    const int col_off = (i == d - 1) ? 0 : ca.r_right;
    TtCore c(row_off + cb.r_left, ca.n, col_off + cb.r_right);
    for (int j = 0; j < ca.n; ++j) {
      for (int bb = 0; bb < ca.r_right; ++bb)
        for (int aa = 0; aa < ca.r_left; ++aa) c.at(aa, j, bb) += ca.at(aa, j, bb);
      for (int bb = 0; bb < cb.r_right; ++bb)
        for (int aa = 0; aa < cb.r_left; ++aa)
          c.at(row_off + aa, j, col_off + bb) += cb.at(aa, j, bb);
    }
    cores.push_back(std::move(c));
  }
  return TtTensor(std::move(cores));
}

TtTensor tt_scale(TtTensor a, double c) {
  TtCore& first = a.core(0);
  Eigen::Map<Eigen::VectorXd>(first.v.data(), first.size()) *= c;
  return a;
}

TtTensor tt_hadamard(const TtTensor& a, const TtTensor& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("tt_hadamard: mode sizes differ");
  const int d = a.order();
  std::vector<TtCore> cores;
  cores.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const TtCore& ca = a.core(i);
    const TtCore& cb = b.core(i);
    TtCore c(ca.r_left * cb.r_left, ca.n, ca.r_right * cb.r_right);
    for (int j = 0; j < ca.n; ++j) {
      auto sa = ca.slice(j);
      auto sb = cb.slice(j);
      Eigen::Map<Eigen::MatrixXd, 0, Eigen::OuterStride<>> sc(
          c.v.data() + static_cast<std::size_t>(c.r_left) * j, c.r_left, c.r_right,
          Eigen::OuterStride<>(static_cast<Eigen::Index>(c.r_left) * c.n));
      for (int br = 0; br < cb.r_right; ++br)
        for (int bl = 0; bl < cb.r_left; ++bl)
          sc.block(static_cast<Eigen::Index>(bl) * ca.r_left, static_cast<Eigen::Index>(br) * ca.r_right,
                   ca.r_left, ca.r_right) = sb(bl, br) * sa;
    }
    cores.push_back(std::move(c));
  }
  return TtTensor(std::move(cores));
}

double tt_dot(const TtTensor& a, const TtTensor& b) {
  if (a.dims() != b.dims()) throw std::invalid_argument("tt_dot: mode sizes differ");
  Eigen::MatrixXd g = Eigen::MatrixXd::Ones(1, 1);  // (ra x rb)
  for (int i = 0; i < a.order(); ++i) {
    const TtCore& ca = a.core(i);
    const TtCore& cb = b.core(i);
    Eigen::MatrixXd t = g * cb.right_unfold();  // ra x (n*rb')
    Eigen::Map<const Eigen::MatrixXd> tr(t.data(), static_cast<Eigen::Index>(ca.r_left) * ca.n,
                                         cb.r_right);
    g.noalias() = ca.left_unfold().transpose() * tr;  // ra' x rb'
  }
  return g(0, 0);
}

double tt_norm(const TtTensor& t) {
  if (t.order() == 1)
    return Eigen::Map<const Eigen::VectorXd>(t.core(0).v.data(), t.core(0).size()).norm();
  std::vector<TtCore> cores = t.cores();
  orthogonalize_rl(cores);
  return Eigen::Map<const Eigen::VectorXd>(cores[0].v.data(), cores[0].size()).norm();
}

double tt_value_at(const TtTensor& t, const std::vector<int>& idx) {
  if (static_cast<int>(idx.size()) != t.order())
    throw std::invalid_argument("tt_value_at: index order mismatch");
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Ones(1);
  for (int i = 0; i < t.order(); ++i) {
    const TtCore& c = t.core(i);
    if (idx[static_cast<std::size_t>(i)] < 0 || idx[static_cast<std::size_t>(i)] >= c.n)
      throw std::out_of_range("tt_value_at: index out of range");
    acc = acc * c.slice(idx[static_cast<std::size_t>(i)]);
  }
  return acc(0);
}

TtTensor expand(const TtTensor& t, int position, int m) {
  const int d = t.order();
  if (position < 1 || position > d + 1)
    throw std::invalid_argument("expand: position must lie in 1..d+1");
  if (m <= 0) throw std::invalid_argument("expand: mode size must be positive");
  const int r = (position == d + 1) ? 1 : t.core(position - 1).r_left;
  TtCore id(r, m, r);
  for (int j = 0; j < m; ++j)
    for (int a = 0; a < r; ++a) id.at(a, j, a) = 1.0;
  std::vector<TtCore> cores = t.cores();
  cores.insert(cores.begin() + (position - 1), std::move(id));
  return TtTensor(std::move(cores));
}

DenseTensor partial_reduce_spatial(const TtTensor& f) {
  const int d = f.order();
  if (d % 2 != 0)
    throw std::invalid_argument("partial_reduce_spatial: tensor order must be even (x modes then v modes)");
  const int half = d / 2;
  Eigen::MatrixXd block = Eigen::Map<const Eigen::MatrixXd>(
      f.core(0).v.data(), f.core(0).n, f.core(0).r_right);
  for (int i = 1; i < half; ++i) {
    const TtCore& c = f.core(i);
    Eigen::MatrixXd next = block * c.right_unfold();
    block = Eigen::Map<const Eigen::MatrixXd>(next.data(), next.rows() * c.n, c.r_right);
  }
  std::vector<int> dims;
  for (int i = 0; i < half; ++i) dims.push_back(f.core(i).n);
  dims.push_back(static_cast<int>(block.cols()));
  DenseTensor out(dims);
  Eigen::Map<Eigen::VectorXd>(out.data(), out.size()) =
      Eigen::Map<const Eigen::VectorXd>(block.data(), block.size());
  return out;
}

double tt_weighted_sum(const TtTensor& t, const std::vector<Eigen::VectorXd>& weights) {
  if (static_cast<int>(weights.size()) != t.order())
    throw std::invalid_argument("tt_weighted_sum: one weight vector per mode required");
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Ones(1);
  for (int i = 0; i < t.order(); ++i) {
    const TtCore& c = t.core(i);
    const Eigen::VectorXd& w = weights[static_cast<std::size_t>(i)];
    if (w.size() != c.n) throw std::invalid_argument("tt_weighted_sum: weight length mismatch");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(c.r_left, c.r_right);
    for (int j = 0; j < c.n; ++j) m += w(j) * c.slice(j);
    acc = acc * m;
  }
  return acc(0);
}

TtTensor tt_orthogonalize_right(const TtTensor& t) {
  std::vector<TtCore> cores = t.cores();
  orthogonalize_rl(cores);
  return TtTensor(std::move(cores));
}

TtTensor tt_subsample(const TtTensor& t, int stride) {
  if (stride <= 0) throw std::invalid_argument("tt_subsample: stride must be positive");
  std::vector<TtCore> cores;
  cores.reserve(static_cast<std::size_t>(t.order()));
  for (int i = 0; i < t.order(); ++i) {
    const TtCore& c = t.core(i);
    if (c.n % stride != 0) throw std::invalid_argument("tt_subsample: mode size not divisible by stride");
    TtCore nc(c.r_left, c.n / stride, c.r_right);
    for (int j = 0; j * stride < c.n; ++j)
      for (int b = 0; b < c.r_right; ++b)
        for (int a = 0; a < c.r_left; ++a) nc.at(a, j, b) = c.at(a, j * stride, b);
    cores.push_back(std::move(nc));
  }
  return TtTensor(std::move(cores));
}

}  // namespace aptt
