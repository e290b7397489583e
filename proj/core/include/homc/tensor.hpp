#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "homc/rational.hpp"

namespace homc {

/// Default tolerance for stochasticity checks in floating-point mode.
/// Construction recipes produce entries like 1/(n-k) whose sums land within
/// a few ulps of 1; exact-rational tensors are checked with zero tolerance.
inline constexpr double kDefaultValidationTol = 1e-12;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr const char* mode_name = "float";
  static double from_ratio(std::int64_t p, std::int64_t q) {
    return static_cast<double>(p) / static_cast<double>(q);
  }
  static double to_double(double v) { return v; }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* mode_name = "rational";
  static Rational from_ratio(std::int64_t p, std::int64_t q) { return Rational(p, q); }
  static double to_double(const Rational& v) { return v.to_double(); }
};

inline double abs_value(double v) { return v < 0 ? -v : v; }
inline Rational abs_value(const Rational& v) { return abs(v); }

/// n^m with an overflow/capacity guard. Dense storage is the point of this
/// library; anything past a few million columns is out of scope.
std::int64_t column_count(int n, int m);

/// Ordered tuple (i_1, ..., i_m) of past states, each in {1, ..., n}.
/// States are 1-based at this interface.
struct MultiIndex {
  int n = 0;
  int m = 0;
  std::vector<int> parts;

  MultiIndex() = default;
  MultiIndex(int n_, std::vector<int> parts_);
};

/// Position of the multi-index among all m-tuples in lexicographic order,
/// 1-based in [1, n^m].
std::int64_t col_index(const MultiIndex& idx);

/// Inverse of col_index.
MultiIndex col_unindex(int n, int m, std::int64_t pos);

/// Decodes a 0-based flat column into 0-based digits (no allocation).
void decode_column(std::int64_t col, int n, int m, std::span<int> digits_out);

/// Point of the probability simplex: nonnegative entries summing to 1
/// (within `tol` for double, exactly for Rational). Immutable.
template <class S>
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<S> entries, double tol = kDefaultValidationTol)
      : entries_(std::move(entries)) {
    check(tol);
  }

  int size() const { return static_cast<int>(entries_.size()); }
  const S& operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<S>& entries() const { return entries_; }
  std::span<const S> span() const { return entries_; }

  friend bool operator==(const ProbabilityVector& a, const ProbabilityVector& b) {
    return a.entries_ == b.entries_;
  }

 private:
  void check(double tol) const;
  std::vector<S> entries_;
};

/// Transition law of an order-m chain on n states, stored as the dense
/// n x n^m hypermatrix with columns in lexicographic multi-index order
/// (column-major storage). Immutable after construction; construction
/// checks shape only, so invalid laws can be represented and then
/// diagnosed with validate().
template <class S>
class TransitionTensor {
 public:
  TransitionTensor(int n, int m, std::vector<S> column_major);

  int states() const { return n_; }
  int order() const { return m_; }
  std::int64_t columns() const { return cols_; }

  /// 0-based row, 0-based flat column.
  const S& at(int row, std::int64_t col) const {
    return data_[static_cast<std::size_t>(col) * n_ + row];
  }
  std::span<const S> column(std::int64_t col) const {
    return {data_.data() + static_cast<std::size_t>(col) * n_, static_cast<std::size_t>(n_)};
  }
  const std::vector<S>& data() const { return data_; }

  /// Entry addressed the external way: 1-based row and multi-index.
  const S& entry(int row, const MultiIndex& idx) const;

  friend bool operator==(const TransitionTensor& a, const TransitionTensor& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.data_ == b.data_;
  }

 private:
  int n_;
  int m_;
  std::int64_t cols_;
  std::vector<S> data_;
};

struct TensorViolation {
  enum class Kind { negative_entry, entry_above_one, column_sum };
  Kind kind;
  int row = 0;               // 1-based; 0 when not applicable
  std::int64_t column = 0;   // 1-based
  double magnitude = 0.0;
  std::string describe(int n, int m) const;
};

/// m-fold Kronecker power of x, length n^m, entries in lexicographic order:
/// the entry at col_index((i_1,...,i_m)) is x_{i_1}...x_{i_m}.
template <class S>
std::vector<S> kron_power(const ProbabilityVector<S>& x, int m);

/// One chain step: P applied to the rank-one power of x. Column
/// stochasticity makes the result a probability vector again.
template <class S>
ProbabilityVector<S> apply(const TransitionTensor<S>& P, const ProbabilityVector<S>& x);

/// Same map evaluated through the order-2 slice decomposition
/// (x_1 P_1 + ... + x_n P_n) x. Only defined for m = 2; kept as an
/// independent evaluation route for cross-checks.
template <class S>
ProbabilityVector<S> apply_via_slices(const TransitionTensor<S>& P, const ProbabilityVector<S>& x);

/// Max-norm of apply(P, x) - x; zero exactly at stationary points.
template <class S>
S residual(const TransitionTensor<S>& P, const ProbabilityVector<S>& x);

/// Reports every invariant violation (range and column sums); empty result
/// means the tensor is a valid transition law at the given tolerance.
template <class S>
std::vector<TensorViolation> validate(const TransitionTensor<S>& P,
                                      double tol = kDefaultValidationTol);

// -- allocation-free kernels for hot paths (double only) --------------------

struct ApplyWorkspace {
  std::vector<double> kron;
  std::vector<double> out;
  std::vector<int> digits;
};

/// Writes P x^(m) into ws.out. x must have size n and be a simplex point;
/// no checks are performed.
void apply_into(const TransitionTensor<double>& P, std::span<const double> x, ApplyWorkspace& ws);

double residual_into(const TransitionTensor<double>& P, std::span<const double> x,
                     ApplyWorkspace& ws);

// -- conveniences ------------------------------------------------------------

/// Standard basis vector e_i (i 1-based).
template <class S>
ProbabilityVector<S> basis_vector(int n, int i);

/// Barycenter f_k = (e_1 + ... + e_k)/k of the face on the first k vertices.
template <class S>
ProbabilityVector<S> face_barycenter(int n, int k);

TransitionTensor<double> to_double_tensor(const TransitionTensor<Rational>& P);
ProbabilityVector<double> to_double_vector(const ProbabilityVector<Rational>& x);

}  // namespace homc
