#include "homc/constructions.hpp"

#include <algorithm>
#include <stdexcept>

#include "homc/characterize.hpp"
#include "homc/rng.hpp"

namespace homc {

const char* variant_name(ConstructionVariant v) {
  switch (v) {
    case ConstructionVariant::base: return "base";
    case ConstructionVariant::two_points: return "two_points";
    case ConstructionVariant::k_points: return "k_points";
    case ConstructionVariant::n_plus_1_points: return "n_plus_1_points";
    case ConstructionVariant::face: return "face";
    case ConstructionVariant::disconnected: return "disconnected";
  }
  return "?";
}

ConstructionVariant variant_from_name(std::string_view name) {
  std::string canon(name);
  std::replace(canon.begin(), canon.end(), '-', '_');
  if (canon == "base") return ConstructionVariant::base;
  if (canon == "two_points") return ConstructionVariant::two_points;
  if (canon == "k_points") return ConstructionVariant::k_points;
  if (canon == "n_plus_1_points") return ConstructionVariant::n_plus_1_points;
  if (canon == "face") return ConstructionVariant::face;
  if (canon == "disconnected") return ConstructionVariant::disconnected;
  throw std::invalid_argument("unknown construction variant '" + std::string(name) + "'");
}

void ConstructionSpec::validate() const {
  if (n < 2) throw std::invalid_argument("construction: need n >= 2");
  if (m < 2) throw std::invalid_argument("construction: need order m >= 2");
  if (k < 1 || k > n) throw std::invalid_argument("construction: need k in [1, n]");
  switch (variant) {
    case ConstructionVariant::base:
      break;
    case ConstructionVariant::two_points:
      if (k != 2) throw std::invalid_argument("construction: variant two_points requires k = 2");
      break;
    case ConstructionVariant::k_points:
      if (!(k > 2 && k <= n)) {
        throw std::invalid_argument("construction: variant k_points requires 2 < k <= n");
      }
      break;
    case ConstructionVariant::n_plus_1_points:
      if (k != n) {
        throw std::invalid_argument("construction: variant n_plus_1_points requires k = n");
      }
      if (n <= 2) {
        // at n = 2 the recipe degenerates into the universal family and the
        // finite-set claim fails
        throw std::invalid_argument("construction: variant n_plus_1_points requires n > 2");
      }
      break;
    case ConstructionVariant::face:
    case ConstructionVariant::disconnected:
      if (n <= 2) throw std::invalid_argument("construction: face/disconnected require n > 2");
      if (!(k >= 2 && k <= n - 1)) {
        throw std::invalid_argument("construction: face/disconnected require 2 <= k <= n-1");
      }
      break;
  }
}

namespace {

template <class S>
void write_column(std::vector<S>& data, int n, std::int64_t col, std::span<const S> value) {
  std::copy(value.begin(), value.end(), data.begin() + static_cast<std::ptrdiff_t>(col) * n);
}

}  // namespace

template <class S>
TransitionTensor<S> build_construction(const ConstructionSpec& spec) {
  spec.validate();
  const int n = spec.n;
  const int m = spec.m;
  const int k = spec.k;
  const std::int64_t cols = column_count(n, m);
  const std::int64_t slice_cols = cols / n;

  const std::vector<S> fk = face_barycenter<S>(n, k).entries();
  const std::vector<S> fn = face_barycenter<S>(n, n).entries();
  std::vector<std::vector<S>> basis(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) basis[static_cast<std::size_t>(i)] = basis_vector<S>(n, i + 1).entries();

  // start from the base: every column of every slice equals f_k
  std::vector<S> data;
  data.reserve(static_cast<std::size_t>(cols) * n);
  for (std::int64_t c = 0; c < cols; ++c) data.insert(data.end(), fk.begin(), fk.end());

  // the column of slice i whose conditioning indexes are all i
  auto diagonal_column = [&](int i) {
    std::int64_t pos = 0;
    for (int j = 0; j < m; ++j) pos = pos * n + i;
    return pos;
  };

  switch (spec.variant) {
    case ConstructionVariant::base:
      break;

    case ConstructionVariant::two_points:
      // slice 1: column (1,...,1) becomes e_1; slice 2: every column e_2
      write_column<S>(data, n, diagonal_column(0), basis[0]);
      for (std::int64_t c = 0; c < slice_cols; ++c) {
        write_column<S>(data, n, slice_cols + c, basis[1]);
      }
      break;

    case ConstructionVariant::k_points:
      // slice i <= k: column (i,...,i) becomes e_i, all other columns e_k
      for (int i = 0; i < k; ++i) {
        for (std::int64_t c = 0; c < slice_cols; ++c) {
          write_column<S>(data, n, i * slice_cols + c, basis[static_cast<std::size_t>(k - 1)]);
        }
        write_column<S>(data, n, diagonal_column(i), basis[static_cast<std::size_t>(i)]);
      }
      break;

    case ConstructionVariant::n_plus_1_points:
      for (int i = 0; i < n; ++i) {
        write_column<S>(data, n, diagonal_column(i), basis[static_cast<std::size_t>(i)]);
      }
      break;

    case ConstructionVariant::face: {
      // slice i <= k: columns whose conditioning indexes all lie in
      // {1,...,k} become e_i
      std::vector<int> digits(static_cast<std::size_t>(m - 1));
      for (std::int64_t rest = 0; rest < slice_cols; ++rest) {
        decode_column(rest, n, m - 1, digits);
        const bool all_in_face =
            std::all_of(digits.begin(), digits.end(), [&](int d) { return d < k; });
        if (!all_in_face) continue;
        for (int i = 0; i < k; ++i) {
          write_column<S>(data, n, i * slice_cols + rest, basis[static_cast<std::size_t>(i)]);
        }
      }
      break;
    }

    case ConstructionVariant::disconnected: {
      // every slice: face-indexed columns get v_i, everything else f_n
      std::vector<std::vector<S>> v(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        if (i < k) {
          v[static_cast<std::size_t>(i)] = basis[static_cast<std::size_t>(i)];
        } else {
          std::vector<S> tail(static_cast<std::size_t>(n), S{});
          for (int j = k; j < n; ++j) tail[static_cast<std::size_t>(j)] = scalar_traits<S>::from_ratio(1, n - k);
          v[static_cast<std::size_t>(i)] = std::move(tail);
        }
      }
      std::vector<int> digits(static_cast<std::size_t>(m - 1));
      for (std::int64_t rest = 0; rest < slice_cols; ++rest) {
        decode_column(rest, n, m - 1, digits);
        const bool all_in_face =
            std::all_of(digits.begin(), digits.end(), [&](int d) { return d < k; });
        for (int i = 0; i < n; ++i) {
          write_column<S>(data, n, i * slice_cols + rest,
                          all_in_face ? v[static_cast<std::size_t>(i)] : fn);
        }
      }
      break;
    }
  }
  return TransitionTensor<S>(n, m, std::move(data));
}

template <class S>
TransitionTensor<S> lift(const TransitionTensor<S>& P) {
  const int n = P.states();
  column_count(n, P.order() + 1);  // capacity guard
  std::vector<S> data;
  data.reserve(P.data().size() * static_cast<std::size_t>(n));
  for (int copy = 0; copy < n; ++copy) data.insert(data.end(), P.data().begin(), P.data().end());
  return TransitionTensor<S>(n, P.order() + 1, std::move(data));
}

template <class S>
TransitionTensor<S> permute_within_classes(const TransitionTensor<S>& P,
                                           std::span<const std::int64_t> perm) {
  const int n = P.states();
  const int m = P.order();
  const std::int64_t cols = P.columns();
  if (static_cast<std::int64_t>(perm.size()) != cols) {
    throw std::invalid_argument("permute_within_classes: permutation must cover all " +
                                std::to_string(cols) + " columns");
  }
  std::vector<char> seen(static_cast<std::size_t>(cols), 0);
  std::vector<int> digits(static_cast<std::size_t>(m));
  std::vector<int> exp_a(static_cast<std::size_t>(n));
  std::vector<int> exp_b(static_cast<std::size_t>(n));
  auto exponent_of = [&](std::int64_t c, std::vector<int>& out) {
    decode_column(c, n, m, digits);
    std::fill(out.begin(), out.end(), 0);
    for (int d : digits) ++out[static_cast<std::size_t>(d)];
  };
  for (std::int64_t c = 0; c < cols; ++c) {
    const std::int64_t src = perm[static_cast<std::size_t>(c)];
    if (src < 0 || src >= cols) {
      throw std::invalid_argument("permute_within_classes: source column out of range");
    }
    if (seen[static_cast<std::size_t>(src)]++) {
      throw std::invalid_argument("permute_within_classes: not a permutation (duplicate source)");
    }
    exponent_of(c, exp_a);
    exponent_of(src, exp_b);
    if (exp_a != exp_b) {
      throw std::invalid_argument(
          "permute_within_classes: move crosses monomial-class boundaries at column " +
          std::to_string(c + 1));
    }
  }
  std::vector<S> data(P.data().size());
  for (std::int64_t c = 0; c < cols; ++c) {
    std::span<const S> src = P.column(perm[static_cast<std::size_t>(c)]);
    std::copy(src.begin(), src.end(), data.begin() + static_cast<std::ptrdiff_t>(c) * n);
  }
  return TransitionTensor<S>(n, m, std::move(data));
}

std::vector<std::int64_t> random_within_class_permutation(int n, int m, std::uint64_t seed) {
  const std::int64_t cols = column_count(n, m);
  std::vector<std::int64_t> perm(static_cast<std::size_t>(cols));
  for (std::int64_t c = 0; c < cols; ++c) perm[static_cast<std::size_t>(c)] = c;
  Rng rng(seed);
  for (const MonomialClass& mc : monomial_classes(n, m)) {
    // Fisher-Yates over this class's column list
    for (std::size_t i = mc.columns.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(perm[static_cast<std::size_t>(mc.columns[i - 1] - 1)],
                perm[static_cast<std::size_t>(mc.columns[j] - 1)]);
    }
  }
  return perm;
}

template <class S>
TransitionTensor<S> convex_combine(std::span<const TransitionTensor<S>> tensors,
                                   const ProbabilityVector<S>& weights) {
  if (tensors.empty()) throw std::invalid_argument("convex_combine: need at least one tensor");
  if (weights.size() != static_cast<int>(tensors.size())) {
    throw std::invalid_argument("convex_combine: weights must match the tensor count");
  }
  const int n = tensors[0].states();
  const int m = tensors[0].order();
  for (const auto& t : tensors) {
    if (t.states() != n || t.order() != m) {
      throw std::invalid_argument("convex_combine: all tensors must share (n, m)");
    }
  }
  std::vector<S> data(tensors[0].data().size(), S{});
  for (std::size_t t = 0; t < tensors.size(); ++t) {
    const S& w = weights[static_cast<int>(t)];
    const std::vector<S>& src = tensors[t].data();
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += w * src[i];
  }
  return TransitionTensor<S>(n, m, std::move(data));
}

// explicit instantiations
template TransitionTensor<double> build_construction<double>(const ConstructionSpec&);
template TransitionTensor<Rational> build_construction<Rational>(const ConstructionSpec&);
template TransitionTensor<double> lift(const TransitionTensor<double>&);
template TransitionTensor<Rational> lift(const TransitionTensor<Rational>&);
template TransitionTensor<double> permute_within_classes(const TransitionTensor<double>&,
                                                         std::span<const std::int64_t>);
template TransitionTensor<Rational> permute_within_classes(const TransitionTensor<Rational>&,
                                                           std::span<const std::int64_t>);
template TransitionTensor<double> convex_combine(std::span<const TransitionTensor<double>>,
                                                 const ProbabilityVector<double>&);
template TransitionTensor<Rational> convex_combine(std::span<const TransitionTensor<Rational>>,
                                                   const ProbabilityVector<Rational>&);

}  // namespace homc
