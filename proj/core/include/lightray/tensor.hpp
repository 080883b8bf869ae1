#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "lightray/linalg.hpp"

namespace lightray {

using MultiIndex = std::vector<int>;

// Number of canonical multi-indices of a rank-m symmetric tensor over
// R^{1+n}, i.e. binomial(n+m, m).
std::size_t dim_sym(int n, int m);

// Same count for an index set of arbitrary size (axes values per slot).
std::size_t sym_count(int axes, int m);

std::size_t binomial(int n, int k);

// Enumeration of the canonical (non-decreasing) multi-indices of one
// (axes, rank) pair, in lexicographic order. Tables are built once and shared.
class IndexTable {
 public:
  static const IndexTable& get(int axes, int rank);

  int axes() const { return axes_; }
  int rank() const { return rank_; }
  std::size_t size() const { return multiplicity_.size(); }

  std::span<const int> index(std::size_t pos) const {
    return {entries_.data() + pos * static_cast<std::size_t>(rank_), static_cast<std::size_t>(rank_)};
  }
  // Number of distinct permutations of the multi-index at pos (multinomial).
  double multiplicity(std::size_t pos) const { return multiplicity_[pos]; }

  // Position of an arbitrary (not necessarily sorted) multi-index.
  std::size_t offset(std::span<const int> idx) const;

 private:
  IndexTable(int axes, int rank);
  std::size_t rank_sorted(std::span<const int> sorted) const;

  int axes_;
  int rank_;
  std::vector<int> entries_;
  std::vector<double> multiplicity_;
  // count_[r * (axes+1) + lo]: non-decreasing sequences of length r over [lo, axes).
  std::vector<std::size_t> count_;
};

// Dense symmetric tensor stored by canonical multi-index.
template <typename T>
class SymTensor {
 public:
  using value_type = T;

  SymTensor() = default;
  SymTensor(int axes, int rank);

  // Tensor over R^{1+n}.
  static SymTensor spacetime(int n, int m) { return SymTensor(n + 1, m); }

  int axes() const { return axes_; }
  int n() const { return axes_ - 1; }
  int rank() const { return rank_; }
  std::size_t size() const { return comp_.size(); }
  const IndexTable& table() const { return *table_; }

  T& operator[](std::size_t pos) { return comp_[pos]; }
  const T& operator[](std::size_t pos) const { return comp_[pos]; }

  T& at(std::span<const int> idx) { return comp_[table_->offset(idx)]; }
  const T& at(std::span<const int> idx) const { return comp_[table_->offset(idx)]; }
  T& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
  const T& at(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }

  std::span<T> data() { return comp_; }
  std::span<const T> data() const { return comp_; }

  double max_abs() const;

  SymTensor& operator+=(const SymTensor& other);
  SymTensor& operator-=(const SymTensor& other);
  SymTensor& operator*=(T scale);

  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(SymTensor a, T s) { return a *= s; }
  friend SymTensor operator*(T s, SymTensor a) { return a *= s; }

 private:
  int axes_ = 0;
  int rank_ = 0;
  const IndexTable* table_ = nullptr;
  std::vector<T> comp_;
};

using RealTensor = SymTensor<double>;
using ComplexTensor = SymTensor<std::complex<double>>;

ComplexTensor to_complex(const RealTensor& t);

// Average of a full (axes^rank, row-major) array over all index permutations.
template <typename T>
SymTensor<T> symmetrize(int axes, int rank, std::span<const T> raw);

// Full row-major (axes^rank) expansion of a symmetric tensor.
template <typename T>
std::vector<T> expand(const SymTensor<T>& t);

// Symmetrized product with a rank-2 tensor: rank(u) + 2.
template <typename T>
SymTensor<T> i_v(const RealTensor& v, const SymTensor<T>& u);

// Contraction of the last two slots against a rank-2 tensor: rank(u) - 2.
template <typename T>
SymTensor<T> j_v(const RealTensor& v, const SymTensor<T>& u);

// -c^2 u_{..00} + sum_{p>=1} u_{..pp}.
template <typename T>
SymTensor<T> J_op(const SymTensor<T>& u, double c);

// Kronecker delta over all axes of u (use with spatial tensors).
RealTensor kronecker(int axes);
template <typename T>
SymTensor<T> i_delta(const SymTensor<T>& u);
template <typename T>
SymTensor<T> j_delta(const SymTensor<T>& u);

// g_{1/c} = diag(-1/c^2, 1, ..., 1) over R^{1+n}.
RealTensor minkowski_metric(int n, double c);

// Full contraction u_{i1..im} v_{i1} ... v_{im}.
template <typename T>
T contract_power(const SymTensor<T>& u, const Vec& v);

// v (x) v (x) ... (x) v, m times.
RealTensor outer_power(const Vec& v, int m);

// Slice of the last slot: (u_p)_{i1..i(m-1)} = u_{i1..i(m-1) p}.
template <typename T>
SymTensor<T> column(const SymTensor<T>& u, int p);

struct CommutatorConstants {
  double D;
  double C;
};

// J i_g u = D i_g J u + C u for u of rank m - 2.
CommutatorConstants commutator_constants(int m, int n);

template <typename T>
struct Decomposition {
  SymTensor<T> trace_free;  // A with J A = 0
  SymTensor<T> lower;       // f_low, rank m - 2
};

// u = A + i_{g_{1/c}} f_low with J_op(A, c) = 0.
template <typename T>
Decomposition<T> decompose(const SymTensor<T>& u, double c);

// Matrix of u -> i_{g_{1/c}} u between canonical component vectors.
Eigen::MatrixXd i_g_matrix(int n, int m, double c);

// Smallest singular value of i_g_matrix(n, m, c).
double i_g_min_singular_value(int n, int m, double c);

}  // namespace lightray
