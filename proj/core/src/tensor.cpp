#include "lightray/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace lightray {

std::size_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

std::size_t sym_count(int axes, int m) {
  if (axes < 1 || m < 0) throw std::invalid_argument("sym_count: need axes >= 1, m >= 0");
  return binomial(axes + m - 1, m);
}

std::size_t dim_sym(int n, int m) {
  if (n < 1 || m < 0) throw std::invalid_argument("dim_sym: need n >= 1, m >= 0");
  return binomial(n + m, m);
}

// ---------------------------------------------------------------------------

IndexTable::IndexTable(int axes, int rank) : axes_(axes), rank_(rank) {
  count_.assign(static_cast<std::size_t>(rank + 1) * static_cast<std::size_t>(axes + 1), 0);
  for (int r = 0; r <= rank; ++r)
    for (int lo = 0; lo <= axes; ++lo)
      count_[static_cast<std::size_t>(r) * (axes + 1) + lo] = lo == axes ? (r == 0 ? 1 : 0) : sym_count(axes - lo, r);

  const std::size_t total = sym_count(axes, rank);
  entries_.reserve(total * rank);
  multiplicity_.reserve(total);
  std::vector<int> idx(rank, 0);
  double m_fact = std::tgamma(rank + 1.0);
  for (std::size_t pos = 0; pos < total; ++pos) {
    entries_.insert(entries_.end(), idx.begin(), idx.end());
    double denom = 1.0;
    for (int i = 0; i < rank;) {
      int j = i;
      while (j < rank && idx[j] == idx[i]) ++j;
      denom *= std::tgamma(j - i + 1.0);
      i = j;
    }
    multiplicity_.push_back(std::round(m_fact / denom));
    // next non-decreasing sequence
    int i = rank - 1;
    while (i >= 0 && idx[i] == axes - 1) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < rank; ++j) idx[j] = idx[i];
  }
}

const IndexTable& IndexTable::get(int axes, int rank) {
  if (axes < 1 || rank < 0) throw std::invalid_argument("IndexTable: need axes >= 1, rank >= 0");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<IndexTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{axes, rank}];
  if (!slot) slot.reset(new IndexTable(axes, rank));
  return *slot;
}

std::size_t IndexTable::rank_sorted(std::span<const int> a) const {
  std::size_t pos = 0;
  int prev = 0;
  for (int i = 0; i < rank_; ++i) {
    const std::size_t row = static_cast<std::size_t>(rank_ - i - 1) * (axes_ + 1);
    for (int v = prev; v < a[i]; ++v) pos += count_[row + v];
    prev = a[i];
  }
  return pos;
}

std::size_t IndexTable::offset(std::span<const int> idx) const {
  if (static_cast<int>(idx.size()) != rank_)
    throw std::invalid_argument("multi-index length " + std::to_string(idx.size()) + " does not match rank " +
                                std::to_string(rank_));
  int buf[16];
  if (rank_ > 16) throw std::invalid_argument("rank above 16 not supported");
  for (int i = 0; i < rank_; ++i) {
    if (idx[i] < 0 || idx[i] >= axes_) throw std::out_of_range("multi-index entry out of range");
    buf[i] = idx[i];
  }
  std::sort(buf, buf + rank_);
  return rank_sorted({buf, static_cast<std::size_t>(rank_)});
}

// ---------------------------------------------------------------------------

template <typename T>
SymTensor<T>::SymTensor(int axes, int rank)
    : axes_(axes), rank_(rank), table_(&IndexTable::get(axes, rank)), comp_(table_->size(), T{}) {}

template <typename T>
double SymTensor<T>::max_abs() const {
  double m = 0.0;
  for (const auto& v : comp_) m = std::max(m, std::abs(v));
  return m;
}

namespace {
template <typename T>
void require_same_shape(const SymTensor<T>& a, const SymTensor<T>& b) {
  if (a.axes() != b.axes() || a.rank() != b.rank()) throw std::invalid_argument("tensor shape mismatch");
}
}  // namespace

template <typename T>
SymTensor<T>& SymTensor<T>::operator+=(const SymTensor& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < comp_.size(); ++i) comp_[i] += other.comp_[i];
  return *this;
}

template <typename T>
SymTensor<T>& SymTensor<T>::operator-=(const SymTensor& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < comp_.size(); ++i) comp_[i] -= other.comp_[i];
  return *this;
}

template <typename T>
SymTensor<T>& SymTensor<T>::operator*=(T scale) {
  for (auto& v : comp_) v *= scale;
  return *this;
}

ComplexTensor to_complex(const RealTensor& t) {
  ComplexTensor out(t.axes(), t.rank());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i];
  return out;
}

// ---------------------------------------------------------------------------

template <typename T>
SymTensor<T> symmetrize(int axes, int rank, std::span<const T> raw) {
  std::size_t full = 1;
  for (int i = 0; i < rank; ++i) full *= static_cast<std::size_t>(axes);
  if (raw.size() != full)
    throw std::invalid_argument("symmetrize: expected " + std::to_string(full) + " entries, got " +
                                std::to_string(raw.size()));
  SymTensor<T> out(axes, rank);
  std::vector<double> hits(out.size(), 0.0);
  std::vector<int> idx(rank, 0);
  for (std::size_t flat = 0; flat < full; ++flat) {
    std::size_t rem = flat;
    for (int i = rank - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rem % axes);
      rem /= axes;
    }
    const std::size_t pos = out.table().offset(idx);
    out[pos] += raw[flat];
    hits[pos] += 1.0;
  }
  for (std::size_t pos = 0; pos < out.size(); ++pos) out[pos] /= hits[pos];
  return out;
}

template <typename T>
std::vector<T> expand(const SymTensor<T>& t) {
  const int axes = t.axes(), rank = t.rank();
  std::size_t full = 1;
  for (int i = 0; i < rank; ++i) full *= static_cast<std::size_t>(axes);
  std::vector<T> out(full);
  std::vector<int> idx(rank, 0);
  for (std::size_t flat = 0; flat < full; ++flat) {
    std::size_t rem = flat;
    for (int i = rank - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(rem % axes);
      rem /= axes;
    }
    out[flat] = t.at(idx);
  }
  return out;
}

template <typename T>
SymTensor<T> i_v(const RealTensor& v, const SymTensor<T>& u) {
  if (v.rank() != 2) throw std::invalid_argument("i_v: v must have rank 2");
  if (v.axes() != u.axes()) throw std::invalid_argument("i_v: dimension mismatch");
  const int m = u.rank() + 2;
  SymTensor<T> out(u.axes(), m);
  const double pairs = static_cast<double>(binomial(m, 2));
  std::vector<int> rest(m - 2);
  for (std::size_t pos = 0; pos < out.size(); ++pos) {
    auto alpha = out.table().index(pos);
    T acc{};
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        int r = 0;
        for (int i = 0; i < m; ++i)
          if (i != a && i != b) rest[r++] = alpha[i];
        acc += v.at({alpha[a], alpha[b]}) * u.at(rest);
      }
    out[pos] = acc / pairs;
  }
  return out;
}

template <typename T>
SymTensor<T> j_v(const RealTensor& v, const SymTensor<T>& u) {
  if (v.rank() != 2) throw std::invalid_argument("j_v: v must have rank 2");
  if (u.rank() < 2) throw std::invalid_argument("j_v: u must have rank >= 2");
  if (v.axes() != u.axes()) throw std::invalid_argument("j_v: dimension mismatch");
  const int m = u.rank();
  SymTensor<T> out(u.axes(), m - 2);
  std::vector<int> idx(m);
  for (std::size_t pos = 0; pos < out.size(); ++pos) {
    auto beta = out.table().index(pos);
    std::copy(beta.begin(), beta.end(), idx.begin());
    T acc{};
    for (int p = 0; p < u.axes(); ++p)
      for (int q = 0; q < u.axes(); ++q) {
        const double w = v.at({p, q});
        if (w == 0.0) continue;
        idx[m - 2] = p;
        idx[m - 1] = q;
        acc += u.at(idx) * w;
      }
    out[pos] = acc;
  }
  return out;
}

template <typename T>
SymTensor<T> J_op(const SymTensor<T>& u, double c) {
  if (u.rank() < 2) throw std::invalid_argument("J_op: rank must be >= 2");
  const int m = u.rank();
  SymTensor<T> out(u.axes(), m - 2);
  std::vector<int> idx(m);
  for (std::size_t pos = 0; pos < out.size(); ++pos) {
    auto beta = out.table().index(pos);
    std::copy(beta.begin(), beta.end(), idx.begin());
    idx[m - 2] = idx[m - 1] = 0;
    T acc = u.at(idx) * (-c * c);
    for (int p = 1; p < u.axes(); ++p) {
      idx[m - 2] = idx[m - 1] = p;
      acc += u.at(idx);
    }
    out[pos] = acc;
  }
  return out;
}

RealTensor kronecker(int axes) {
  RealTensor d(axes, 2);
  for (int p = 0; p < axes; ++p) d.at({p, p}) = 1.0;
  return d;
}

template <typename T>
SymTensor<T> i_delta(const SymTensor<T>& u) {
  return i_v(kronecker(u.axes()), u);
}

template <typename T>
SymTensor<T> j_delta(const SymTensor<T>& u) {
  if (u.rank() < 2) throw std::invalid_argument("j_delta: rank must be >= 2");
  return j_v(kronecker(u.axes()), u);
}

RealTensor minkowski_metric(int n, double c) {
  if (c <= 0.0) throw std::invalid_argument("minkowski_metric: c must be positive");
  RealTensor g = RealTensor::spacetime(n, 2);
  g.at({0, 0}) = -1.0 / (c * c);
  for (int p = 1; p <= n; ++p) g.at({p, p}) = 1.0;
  return g;
}

template <typename T>
T contract_power(const SymTensor<T>& u, const Vec& v) {
  if (v.size() != u.axes()) throw std::invalid_argument("contract_power: dimension mismatch");
  const auto& table = u.table();
  T acc{};
  for (std::size_t pos = 0; pos < u.size(); ++pos) {
    double prod = table.multiplicity(pos);
    for (int i : table.index(pos)) prod *= v(i);
    acc += u[pos] * prod;
  }
  return acc;
}

RealTensor outer_power(const Vec& v, int m) {
  RealTensor out(static_cast<int>(v.size()), m);
  for (std::size_t pos = 0; pos < out.size(); ++pos) {
    double prod = 1.0;
    for (int i : out.table().index(pos)) prod *= v(i);
    out[pos] = prod;
  }
  return out;
}

template <typename T>
SymTensor<T> column(const SymTensor<T>& u, int p) {
  if (u.rank() < 1) throw std::invalid_argument("column: rank must be >= 1");
  if (p < 0 || p >= u.axes()) throw std::out_of_range("column: index out of range");
  SymTensor<T> out(u.axes(), u.rank() - 1);
  std::vector<int> idx(u.rank());
  for (std::size_t pos = 0; pos < out.size(); ++pos) {
    auto beta = out.table().index(pos);
    std::copy(beta.begin(), beta.end(), idx.begin());
    idx.back() = p;
    out[pos] = u.at(idx);
  }
  return out;
}

CommutatorConstants commutator_constants(int m, int n) {
  if (m < 2) throw std::invalid_argument("commutator_constants: m must be >= 2");
  const double pairs = static_cast<double>(binomial(m, 2));
  // Of the binom(m,2) slot pairs in i_g u, the contracted pair gives (n+1) u,
  // the 2(m-2) pairs sharing one contracted slot give u each, and the rest
  // give i_g J u.
  return {static_cast<double>(binomial(m - 2, 2)) / pairs, static_cast<double>(n + 2 * m - 3) / pairs};
}

namespace {

// Solves alpha X + beta i_g(J X) = R for X of the same rank as R. Applying J
// to the equation and using the commutator gives the same form one level down.
template <typename T>
SymTensor<T> solve_trace_system(double alpha, double beta, const SymTensor<T>& R, const RealTensor& g, double c) {
  const int r = R.rank();
  if (r < 2 || beta == 0.0) return R * T(1.0 / alpha);
  const auto k = commutator_constants(r, R.n());
  SymTensor<T> H = solve_trace_system(alpha + beta * k.C, beta * k.D, J_op(R, c), g, c);
  SymTensor<T> X = R - i_v(g, H) * T(beta);
  return X * T(1.0 / alpha);
}

}  // namespace

template <typename T>
Decomposition<T> decompose(const SymTensor<T>& u, double c) {
  if (u.rank() < 2) throw std::invalid_argument("decompose: rank must be >= 2");
  const RealTensor g = minkowski_metric(u.n(), c);
  const auto k = commutator_constants(u.rank(), u.n());
  SymTensor<T> lower = solve_trace_system(k.C, k.D, J_op(u, c), g, c);
  SymTensor<T> trace_free = u - i_v(g, lower);
  return {std::move(trace_free), std::move(lower)};
}

Eigen::MatrixXd i_g_matrix(int n, int m, double c) {
  if (m < 2) throw std::invalid_argument("i_g_matrix: output rank must be >= 2");
  const RealTensor g = minkowski_metric(n, c);
  RealTensor basis = RealTensor::spacetime(n, m - 2);
  const auto cols = basis.size();
  const auto rows = dim_sym(n, m);
  Eigen::MatrixXd out(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    basis[j] = 1.0;
    RealTensor image = i_v(g, basis);
    for (std::size_t i = 0; i < rows; ++i) out(i, j) = image[i];
    basis[j] = 0.0;
  }
  return out;
}

double i_g_min_singular_value(int n, int m, double c) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(i_g_matrix(n, m, c));
  return svd.singularValues().minCoeff();
}

// ---------------------------------------------------------------------------

#define LIGHTRAY_INSTANTIATE(T)                                                  \
  template class SymTensor<T>;                                                   \
  template SymTensor<T> symmetrize<T>(int, int, std::span<const T>);             \
  template std::vector<T> expand<T>(const SymTensor<T>&);                        \
  template SymTensor<T> i_v<T>(const RealTensor&, const SymTensor<T>&);          \
  template SymTensor<T> j_v<T>(const RealTensor&, const SymTensor<T>&);          \
  template SymTensor<T> J_op<T>(const SymTensor<T>&, double);                    \
  template SymTensor<T> i_delta<T>(const SymTensor<T>&);                         \
  template SymTensor<T> j_delta<T>(const SymTensor<T>&);                         \
  template T contract_power<T>(const SymTensor<T>&, const Vec&);                 \
  template SymTensor<T> column<T>(const SymTensor<T>&, int);                     \
  template Decomposition<T> decompose<T>(const SymTensor<T>&, double);

LIGHTRAY_INSTANTIATE(double)
LIGHTRAY_INSTANTIATE(std::complex<double>)

#undef LIGHTRAY_INSTANTIATE

}  // namespace lightray
