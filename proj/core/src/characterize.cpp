#include "homc/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace homc {

std::vector<MonomialClass> monomial_classes(int n, int m) {
  const std::int64_t cols = column_count(n, m);
  std::vector<MonomialClass> classes;
  std::map<std::vector<int>, std::size_t> index_of;
  std::vector<int> digits(static_cast<std::size_t>(m));
  std::vector<int> exponent(static_cast<std::size_t>(n));
  for (std::int64_t c = 0; c < cols; ++c) {
    decode_column(c, n, m, digits);
    std::fill(exponent.begin(), exponent.end(), 0);
    for (int d : digits) ++exponent[static_cast<std::size_t>(d)];
    auto [it, inserted] = index_of.try_emplace(exponent, classes.size());
    if (inserted) {
      MonomialClass mc;
      mc.exponent = exponent;
      classes.push_back(std::move(mc));
    }
    classes[it->second].columns.push_back(c + 1);
  }
  for (auto& mc : classes) mc.size = mc.columns.size();
  return classes;
}

std::map<std::vector<int>, std::uint64_t> count_class_permutations(int n, int m) {
  std::map<std::vector<int>, std::uint64_t> out;
  for (const MonomialClass& mc : monomial_classes(n, m)) {
    if (mc.size > 20) {
      throw std::overflow_error("count_class_permutations: class of size " +
                                std::to_string(mc.size) + " has a factorial beyond 64 bits");
    }
    std::uint64_t fact = 1;
    for (std::uint64_t i = 2; i <= mc.size; ++i) fact *= i;
    out.emplace(mc.exponent, fact);
  }
  return out;
}

template <class S>
std::vector<std::vector<S>> class_sums(const TransitionTensor<S>& P) {
  const int n = P.states();
  std::vector<MonomialClass> classes = monomial_classes(n, P.order());
  std::vector<std::vector<S>> sums(classes.size(), std::vector<S>(static_cast<std::size_t>(n), S{}));
  for (std::size_t k = 0; k < classes.size(); ++k) {
    for (std::int64_t col : classes[k].columns) {
      std::span<const S> column = P.column(col - 1);
      for (int r = 0; r < n; ++r) sums[k][static_cast<std::size_t>(r)] += column[static_cast<std::size_t>(r)];
    }
  }
  return sums;
}

template <class S>
UniversalCheck<S> is_universally_stationary(const TransitionTensor<S>& P, double tol) {
  const int n = P.states();
  const int m = P.order();
  std::vector<MonomialClass> classes = monomial_classes(n, m);
  std::vector<std::vector<S>> sums = class_sums(P);
  UniversalCheck<S> check;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const MonomialClass& mc = classes[k];
    for (int r = 0; r < n; ++r) {
      const S lhs = sums[k][static_cast<std::size_t>(r)];
      const S rhs = scalar_traits<S>::from_ratio(
          static_cast<std::int64_t>(mc.exponent[static_cast<std::size_t>(r)]) *
              static_cast<std::int64_t>(mc.size),
          m);
      bool equal;
      if constexpr (scalar_traits<S>::exact) {
        equal = lhs == rhs;
      } else {
        equal = abs_value(lhs - rhs) <= tol;
      }
      if (!equal) {
        check.universal = false;
        check.failing_row = r + 1;
        check.failing_class = mc.exponent;
        check.lhs = lhs;
        check.rhs = rhs;
        return check;
      }
    }
  }
  check.universal = true;
  return check;
}

template <class S>
ThmOneParams<S>::ThmOneParams(int n, std::vector<S> v_row_major) : n_(n), v_(std::move(v_row_major)) {
  if (n < 1) throw std::invalid_argument("ThmOneParams: need n >= 1");
  if (v_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("ThmOneParams: expected n*n entries");
  }
  const S zero{};
  const S one(1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const S& e = v_[static_cast<std::size_t>(i) * n_ + j];
      if (i == j && !(e == zero)) {
        throw std::invalid_argument("ThmOneParams: diagonal entry v_" + std::to_string(i + 1) +
                                    std::to_string(i + 1) + " must be 0");
      }
      if (e < zero || e > one) {
        throw std::invalid_argument("ThmOneParams: entry v_" + std::to_string(i + 1) +
                                    std::to_string(j + 1) + " outside [0, 1]");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!(v_[static_cast<std::size_t>(i) * n_ + j] == v_[static_cast<std::size_t>(j) * n_ + i])) {
        throw std::invalid_argument("ThmOneParams: asymmetric parameters v_" +
                                    std::to_string(i + 1) + std::to_string(j + 1) + " != v_" +
                                    std::to_string(j + 1) + std::to_string(i + 1));
      }
    }
  }
}

template <class S>
TransitionTensor<S> build_theorem1_slices(int n, const std::vector<S>& v_row_major) {
  if (n < 1) throw std::invalid_argument("build_theorem1_slices: need n >= 1");
  if (v_row_major.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("build_theorem1_slices: expected n*n entries");
  }
  const S zero{};
  const S one(1);
  for (int i = 0; i < n; ++i) {
    const S& d = v_row_major[static_cast<std::size_t>(i) * n + i];
    if (!(d == zero)) throw std::invalid_argument("build_theorem1_slices: nonzero diagonal");
    for (int j = 0; j < n; ++j) {
      const S& e = v_row_major[static_cast<std::size_t>(i) * n + j];
      if (e < zero || e > one) throw std::invalid_argument("build_theorem1_slices: entry outside [0, 1]");
    }
  }
  const std::int64_t cols = column_count(n, 2);
  std::vector<S> data(static_cast<std::size_t>(cols) * n, S{});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // slice i, column j: (1 - v_ij) e_j + v_ij e_i
      S* col = data.data() + (static_cast<std::size_t>(i) * n + j) * n;
      const S& vij = v_row_major[static_cast<std::size_t>(i) * n + j];
      col[j] = one - vij;
      col[i] += vij;
    }
  }
  return TransitionTensor<S>(n, 2, std::move(data));
}

template <class S>
TransitionTensor<S> build_theorem1(const ThmOneParams<S>& params) {
  return build_theorem1_slices(params.states(), params.raw());
}

template <class S>
Theorem1Match<S> is_theorem1_form(const TransitionTensor<S>& P, double tol) {
  if (P.order() != 2) {
    throw std::invalid_argument("is_theorem1_form: defined for order-2 tensors only");
  }
  const int n = P.states();
  const S zero{};
  Theorem1Match<S> result;
  std::vector<S> v(static_cast<std::size_t>(n) * n, S{});

  auto close = [tol](const S& a, const S& b) {
    if constexpr (scalar_traits<S>::exact) {
      return a == b;
    } else {
      return abs_value(a - b) <= tol;
    }
  };
  auto fail = [&](int slice, int row, int col, const S& expected, const S& actual,
                  std::string reason) {
    Theorem1Mismatch mm;
    mm.slice = slice + 1;
    mm.row = row + 1;
    mm.column = col + 1;
    mm.expected = scalar_traits<S>::to_double(expected);
    mm.actual = scalar_traits<S>::to_double(actual);
    mm.reason = std::move(reason);
    result.mismatch = mm;
  };

  for (int i = 0; i < n && !result.mismatch; ++i) {
    for (int j = 0; j < n && !result.mismatch; ++j) {
      std::span<const S> col = P.column(static_cast<std::int64_t>(i) * n + j);
      const S& w = col[static_cast<std::size_t>(i)];
      if (i != j) {
        bool in_range;
        if constexpr (scalar_traits<S>::exact) {
          in_range = !(w < zero) && !(S(1) < w);
        } else {
          in_range = w >= -tol && w <= 1.0 + tol;
        }
        if (!in_range) {
          fail(i, i, j, zero, w, "coupling v_ij outside [0, 1]");
          break;
        }
      }
      for (int r = 0; r < n; ++r) {
        const S& e = col[static_cast<std::size_t>(r)];
        S expected = zero;
        if (i == j) {
          expected = (r == i) ? S(1) : zero;
        } else if (r == i) {
          expected = w;  // the off-diagonal weight itself
        } else if (r == j) {
          expected = S(1) - w;
        }
        if (!close(e, expected)) {
          fail(i, r, j, expected, e, "slice column is not (1-v)e_j + v e_i");
          break;
        }
      }
      if (!result.mismatch && i != j) v[static_cast<std::size_t>(i) * n + j] = w;
    }
  }
  if (!result.mismatch) {
    for (int i = 0; i < n && !result.mismatch; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const S& a = v[static_cast<std::size_t>(i) * n + j];
        const S& b = v[static_cast<std::size_t>(j) * n + i];
        if (!close(a, b)) {
          fail(i, i, j, b, a, "asymmetric couplings v_ij != v_ji");
          break;
        }
      }
    }
  }
  if (!result.mismatch) {
    if constexpr (!scalar_traits<S>::exact) {
      // canonicalize: symmetry holds within tol, store the average
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          S avg = (v[static_cast<std::size_t>(i) * n + j] + v[static_cast<std::size_t>(j) * n + i]) / 2.0;
          if (avg < 0.0) avg = 0.0;
          if (avg > 1.0) avg = 1.0;
          v[static_cast<std::size_t>(i) * n + j] = avg;
          v[static_cast<std::size_t>(j) * n + i] = avg;
        }
      }
    }
    result.params.emplace(n, std::move(v));
  }
  return result;
}

template <class S>
IrreducibilityResult is_irreducible(const TransitionTensor<S>& P) {
  const int n = P.states();
  if (n > 20) {
    throw std::invalid_argument("is_irreducible: subset enumeration is capped at n <= 20 states");
  }
  IrreducibilityResult result;
  if (n == 1) {
    result.irreducible = true;  // no nonempty proper subset exists
    return result;
  }
  const int m = P.order();
  const std::int64_t cols = P.columns();
  const S zero{};

  // For each row, the distinct state masks of columns carrying positive mass.
  std::vector<std::vector<std::uint32_t>> row_masks(static_cast<std::size_t>(n));
  std::vector<int> digits(static_cast<std::size_t>(m));
  for (std::int64_t c = 0; c < cols; ++c) {
    decode_column(c, n, m, digits);
    std::uint32_t mask = 0;
    for (int d : digits) mask |= (1u << d);
    std::span<const S> col = P.column(c);
    for (int r = 0; r < n; ++r) {
      if (!(col[static_cast<std::size_t>(r)] == zero)) {
        row_masks[static_cast<std::size_t>(r)].push_back(mask);
      }
    }
  }
  for (auto& masks : row_masks) {
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
  }

  // A subset I blocks iff no row in I keeps mass on columns indexed entirely
  // outside I. Order: cardinality, then lexicographic on sorted members.
  std::vector<int> members;
  auto blocked = [&](std::uint32_t subset) {
    for (int r = 0; r < n; ++r) {
      if (!(subset & (1u << r))) continue;
      for (std::uint32_t mask : row_masks[static_cast<std::size_t>(r)]) {
        if ((mask & subset) == 0) return false;  // escape column found
      }
    }
    return true;
  };
  // enumerate k-subsets in lexicographic member order
  std::vector<int> comb;
  for (int k = 1; k <= n - 1; ++k) {
    comb.assign(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
    while (true) {
      std::uint32_t subset = 0;
      for (int idx : comb) subset |= (1u << idx);
      if (blocked(subset)) {
        result.irreducible = false;
        for (int idx : comb) result.witness.push_back(idx + 1);
        return result;
      }
      int i = k - 1;
      while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i) --i;
      if (i < 0) break;
      ++comb[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  result.irreducible = true;
  return result;
}

// explicit instantiations
template std::vector<std::vector<double>> class_sums(const TransitionTensor<double>&);
template std::vector<std::vector<Rational>> class_sums(const TransitionTensor<Rational>&);
template UniversalCheck<double> is_universally_stationary(const TransitionTensor<double>&, double);
template UniversalCheck<Rational> is_universally_stationary(const TransitionTensor<Rational>&,
                                                            double);
template class ThmOneParams<double>;
template class ThmOneParams<Rational>;
template TransitionTensor<double> build_theorem1(const ThmOneParams<double>&);
template TransitionTensor<Rational> build_theorem1(const ThmOneParams<Rational>&);
template TransitionTensor<double> build_theorem1_slices(int, const std::vector<double>&);
template TransitionTensor<Rational> build_theorem1_slices(int, const std::vector<Rational>&);
template Theorem1Match<double> is_theorem1_form(const TransitionTensor<double>&, double);
template Theorem1Match<Rational> is_theorem1_form(const TransitionTensor<Rational>&, double);
template IrreducibilityResult is_irreducible(const TransitionTensor<double>&);
template IrreducibilityResult is_irreducible(const TransitionTensor<Rational>&);

}  // namespace homc
