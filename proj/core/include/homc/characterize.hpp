#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homc/tensor.hpp"

namespace homc {

/// Set of hypermatrix columns whose multi-indexes share a multiset, i.e.
/// whose Kronecker-power weights are the same monomial x_1^{m_1}...x_n^{m_n}.
struct MonomialClass {
  std::vector<int> exponent;           // (m_1, ..., m_n), sums to m
  std::vector<std::int64_t> columns;   // 1-based positions, ascending
  std::uint64_t size = 0;              // multinomial coefficient m!/(m_1!...m_n!)
};

/// Partition of [1, n^m] into monomial classes, ordered by first column.
std::vector<MonomialClass> monomial_classes(int n, int m);

/// Number of column rearrangements available inside each class: size(α)!.
/// Throws std::overflow_error for classes larger than 20 (factorial would
/// not fit in 64 bits).
std::map<std::vector<int>, std::uint64_t> count_class_permutations(int n, int m);

/// Row sums of P over each monomial class: result[class][row].
template <class S>
std::vector<std::vector<S>> class_sums(const TransitionTensor<S>& P);

/// Outcome of the universal-stationarity decision. When false, carries the
/// first violated (row, class) pair with both sides of the failed identity.
template <class S>
struct UniversalCheck {
  bool universal = false;
  int failing_row = 0;                // 1-based
  std::vector<int> failing_class;     // exponent vector
  S lhs{};                            // actual class sum
  S rhs{};                            // required value (m_i / m) * size
};

/// Decides whether every simplex point is stationary for P. The chain map
/// and the identity agree on the whole simplex exactly when, for every row i
/// and class α, the row-i sum over the class equals (α_i / m) · size(α):
/// both sides are degree-m forms, and matching monomial coefficients of
/// x_i (x_1 + ... + x_n)^{m-1} gives that target. Exact for Rational;
/// tolerance-per-class-sum for double.
template <class S>
UniversalCheck<S> is_universally_stationary(const TransitionTensor<S>& P, double tol = 1e-12);

/// Parameters of the order-2 universal family: one coupling weight per
/// unordered state pair. The slice form is
///   P_i = I_n - diag(v_i) + e_i v_i^t,  v_ii = 0.
/// Symmetry v_ij = v_ji is enforced: the asymmetric slice form fails the
/// universal test (the pair-class sum for rows i, j forces v_ij = v_ji), so
/// only symmetric parameters describe universal chains.
template <class S>
class ThmOneParams {
 public:
  ThmOneParams(int n, std::vector<S> v_row_major);

  int states() const { return n_; }
  const S& v(int i, int j) const {  // 1-based
    return v_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)];
  }
  const std::vector<S>& raw() const { return v_; }

  friend bool operator==(const ThmOneParams& a, const ThmOneParams& b) {
    return a.n_ == b.n_ && a.v_ == b.v_;
  }

 private:
  int n_;
  std::vector<S> v_;
};

/// Builds the order-2 tensor of the universal family from its parameters.
/// The output is universally stationary, exactly so in rational mode.
template <class S>
TransitionTensor<S> build_theorem1(const ThmOneParams<S>& params);

/// Raw slice-form builder: P_i = I - diag(v_i) + e_i v_i^t without the
/// symmetry requirement (v_ii = 0 and entries in [0,1] still required).
/// Asymmetric inputs produce valid transition tensors that are NOT
/// universally stationary; kept public so that claim stays testable.
template <class S>
TransitionTensor<S> build_theorem1_slices(int n, const std::vector<S>& v_row_major);

struct Theorem1Mismatch {
  int slice = 0;    // 1-based P_i
  int row = 0;      // 1-based
  int column = 0;   // 1-based column inside the slice
  double expected = 0.0;
  double actual = 0.0;
  std::string reason;
};

template <class S>
struct Theorem1Match {
  std::optional<ThmOneParams<S>> params;
  std::optional<Theorem1Mismatch> mismatch;
  bool ok() const { return params.has_value(); }
};

/// Recovers the family parameters from an order-2 tensor when its slices
/// match the displayed form (symmetry included) within tol; otherwise
/// reports the first offending entry in slice/column/row scan order.
template <class S>
Theorem1Match<S> is_theorem1_form(const TransitionTensor<S>& P, double tol = 1e-12);

struct IrreducibilityResult {
  bool irreducible = false;
  std::vector<int> witness;  // 1-based minimal blocking subset when reducible
};

/// Checks for a nonempty proper subset I of states with p_{i,i_1..i_m} = 0
/// for all i in I and all conditioning indexes outside I. Witness subsets
/// are searched by cardinality, then lexicographically, so the reported
/// witness is minimal and deterministic. Capacity-limited to n <= 20.
template <class S>
IrreducibilityResult is_irreducible(const TransitionTensor<S>& P);

}  // namespace homc
