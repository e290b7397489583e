#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "homc/tensor.hpp"

namespace homc {

/// Families of chains with prescribed stationary sets, built on the all-f_k
/// base (every column equal to the face barycenter f_k):
///   base            : f_k is the unique stationary vector
///   two_points      : {e_1, e_2}                        (k = 2)
///   k_points        : {e_1, ..., e_k}                   (2 < k <= n)
///   n_plus_1_points : {e_1, ..., e_n, f_n}              (k = n, n > 2)
///   face            : conv{e_1, ..., e_k}               (2 <= k <= n-1, n > 2)
///   disconnected    : {f_n} ∪ conv{e_1, ..., e_k}       (2 <= k <= n-1, n > 2)
enum class ConstructionVariant { base, two_points, k_points, n_plus_1_points, face, disconnected };

const char* variant_name(ConstructionVariant v);
ConstructionVariant variant_from_name(std::string_view name);  // accepts '-' or '_'

struct ConstructionSpec {
  int n = 0;
  int m = 2;
  int k = 0;
  ConstructionVariant variant = ConstructionVariant::base;

  /// Throws std::invalid_argument naming the violated precondition.
  void validate() const;
};

/// Builds the transition tensor of the requested family, for any order
/// m >= 2. For m > 2 the modified columns generalize the order-2 recipe:
/// point variants replace the column of slice i indexed by (i, ..., i);
/// face/disconnected variants replace the columns of every targeted slice
/// whose conditioning indexes all lie in {1, ..., k}.
template <class S>
TransitionTensor<S> build_construction(const ConstructionSpec& spec);

/// Raises the order by one: the output is [P | ... | P] (n copies), i.e.
/// output column (i_1, i_2, ..., i_{m+1}) equals input column
/// (i_2, ..., i_{m+1}). Universal stationarity is preserved.
template <class S>
TransitionTensor<S> lift(const TransitionTensor<S>& P);

/// Rearranges columns with perm (0-based, output column c takes input
/// column perm[c]). Every move must stay inside a monomial class; such
/// moves permute equal Kronecker weights, so the chain map on the simplex
/// is unchanged as a function of the class sums.
template <class S>
TransitionTensor<S> permute_within_classes(const TransitionTensor<S>& P,
                                           std::span<const std::int64_t> perm);

/// Uniformly random permutation of each monomial class, deterministic in
/// the seed. Suitable as the perm argument above.
std::vector<std::int64_t> random_within_class_permutation(int n, int m, std::uint64_t seed);

/// Entrywise convex combination of same-shape tensors.
template <class S>
TransitionTensor<S> convex_combine(std::span<const TransitionTensor<S>> tensors,
                                   const ProbabilityVector<S>& weights);

}  // namespace homc
