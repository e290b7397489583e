#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "homc/characterize.hpp"
#include "homc/constructions.hpp"
#include "homc/rng.hpp"
#include "support/test_helpers.hpp"

using namespace homc;
using homc::testing::random_stochastic_tensor;
using homc::testing::random_symmetric_couplings;
using homc::testing::random_universal_tensor;

TEST_CASE("monomial classes for n=2") {
  auto classes22 = monomial_classes(2, 2);
  REQUIRE(classes22.size() == 3);
  CHECK(classes22[0].exponent == std::vector<int>{2, 0});
  CHECK(classes22[0].columns == std::vector<std::int64_t>{1});
  CHECK(classes22[1].exponent == std::vector<int>{1, 1});
  CHECK(classes22[1].columns == std::vector<std::int64_t>{2, 3});
  CHECK(classes22[2].exponent == std::vector<int>{0, 2});
  CHECK(classes22[2].columns == std::vector<std::int64_t>{4});

  // x^(3) entries indexed by 112, 121, 211 share the monomial x1^2 x2
  auto classes23 = monomial_classes(2, 3);
  bool found = false;
  for (const auto& mc : classes23) {
    if (mc.exponent == std::vector<int>{2, 1}) {
      found = true;
      CHECK(mc.columns == std::vector<std::int64_t>{2, 3, 5});
      CHECK(mc.size == 3);
    }
  }
  CHECK(found);

  auto classes1 = monomial_classes(1, 3);
  REQUIRE(classes1.size() == 1);
  CHECK(classes1[0].size == 1);
}

TEST_CASE("class sizes are multinomial coefficients and partition the columns") {
  for (int n = 1; n <= 6; ++n) {
    for (int m = 1; m <= 4; ++m) {
      auto classes = monomial_classes(n, m);
      std::uint64_t total = 0;
      std::vector<char> seen(static_cast<std::size_t>(column_count(n, m)) + 1, 0);
      for (const auto& mc : classes) {
        // independent multinomial m! / prod(m_i!)
        double coeff = std::tgamma(m + 1.0);
        for (int e : mc.exponent) coeff /= std::tgamma(e + 1.0);
        CHECK(mc.size == static_cast<std::uint64_t>(std::llround(coeff)));
        CHECK(mc.size == mc.columns.size());
        total += mc.size;
        for (auto c : mc.columns) {
          CHECK(!seen[static_cast<std::size_t>(c)]);
          seen[static_cast<std::size_t>(c)] = 1;
        }
      }
      CHECK(total == static_cast<std::uint64_t>(column_count(n, m)));
    }
  }
}

TEST_CASE("count_class_permutations") {
  auto counts23 = count_class_permutations(2, 3);
  CHECK(counts23.at({3, 0}) == 1);
  CHECK(counts23.at({2, 1}) == 6);
  CHECK(counts23.at({1, 2}) == 6);
  CHECK(counts23.at({0, 3}) == 1);
  std::uint64_t total = 1;
  for (const auto& [exp, perms] : counts23) total *= perms;
  CHECK(total == 36);

  auto counts22 = count_class_permutations(2, 2);
  CHECK(counts22.at({1, 1}) == 2);
  CHECK(counts22.at({2, 0}) == 1);

  auto counts13 = count_class_permutations(1, 3);
  for (const auto& [exp, perms] : counts13) CHECK(perms == 1);

  // class (1,1,1,1) has size 24; 24! does not fit in 64 bits
  CHECK_THROWS_AS(count_class_permutations(4, 4), std::overflow_error);
}

TEST_CASE("theorem1 slices for n=2 match the displayed form") {
  auto P = build_theorem1(ThmOneParams<Rational>(
      2, {Rational(0), Rational(1, 2), Rational(1, 2), Rational(0)}));
  // P_1 = ((1, a), (0, 1-a)), P_2 = ((1-a, 0), (a, 1)) with a = 1/2
  CHECK(P.entry(1, MultiIndex(2, {1, 1})) == Rational(1));
  CHECK(P.entry(2, MultiIndex(2, {1, 1})) == Rational(0));
  CHECK(P.entry(1, MultiIndex(2, {1, 2})) == Rational(1, 2));
  CHECK(P.entry(2, MultiIndex(2, {1, 2})) == Rational(1, 2));
  CHECK(P.entry(1, MultiIndex(2, {2, 1})) == Rational(1, 2));
  CHECK(P.entry(2, MultiIndex(2, {2, 1})) == Rational(1, 2));
  CHECK(P.entry(1, MultiIndex(2, {2, 2})) == Rational(0));
  CHECK(P.entry(2, MultiIndex(2, {2, 2})) == Rational(1));
}

TEST_CASE("theorem1 slices for n=3 match the three displayed matrices") {
  const Rational a12(1, 4), a13(2, 5), a23(3, 7);
  std::vector<Rational> v = {Rational(0), a12, a13, a12, Rational(0), a23, a13, a23, Rational(0)};
  auto P = build_theorem1(ThmOneParams<Rational>(3, v));

  auto slice_entry = [&](int i, int r, int s) { return P.entry(r, MultiIndex(3, {i, s})); };
  // P_1 = ((1, a12, a13), (0, 1-a12, 0), (0, 0, 1-a13))
  CHECK(slice_entry(1, 1, 1) == Rational(1));
  CHECK(slice_entry(1, 1, 2) == a12);
  CHECK(slice_entry(1, 1, 3) == a13);
  CHECK(slice_entry(1, 2, 2) == Rational(1) - a12);
  CHECK(slice_entry(1, 3, 3) == Rational(1) - a13);
  CHECK(slice_entry(1, 2, 1) == Rational(0));
  CHECK(slice_entry(1, 3, 2) == Rational(0));
  // P_2 = ((1-a12, 0, 0), (a12, 1, a23), (0, 0, 1-a23))
  CHECK(slice_entry(2, 1, 1) == Rational(1) - a12);
  CHECK(slice_entry(2, 2, 1) == a12);
  CHECK(slice_entry(2, 2, 2) == Rational(1));
  CHECK(slice_entry(2, 2, 3) == a23);
  CHECK(slice_entry(2, 3, 3) == Rational(1) - a23);
  // P_3 = ((1-a13, 0, 0), (0, 1-a23, 0), (a13, a23, 1))
  CHECK(slice_entry(3, 1, 1) == Rational(1) - a13);
  CHECK(slice_entry(3, 2, 2) == Rational(1) - a23);
  CHECK(slice_entry(3, 3, 1) == a13);
  CHECK(slice_entry(3, 3, 2) == a23);
  CHECK(slice_entry(3, 3, 3) == Rational(1));

  CHECK(is_universally_stationary(P).universal);
}

TEST_CASE("zero couplings give identity slices") {
  auto P = build_theorem1(ThmOneParams<Rational>(3, std::vector<Rational>(9, Rational(0))));
  for (int i = 1; i <= 3; ++i) {
    for (int s = 1; s <= 3; ++s) {
      for (int r = 1; r <= 3; ++r) {
        CHECK(P.entry(r, MultiIndex(3, {i, s})) == (r == s ? Rational(1) : Rational(0)));
      }
    }
  }
}

TEST_CASE("theorem1 parameter validation") {
  CHECK_THROWS_AS(ThmOneParams<double>(2, {0.1, 0.5, 0.5, 0.0}), std::invalid_argument);  // diag
  CHECK_THROWS_AS(ThmOneParams<double>(2, {0.0, 1.5, 1.5, 0.0}), std::invalid_argument);  // range
  CHECK_THROWS_AS(ThmOneParams<double>(2, {0.0, 0.4, 0.6, 0.0}), std::invalid_argument);  // asym
  CHECK_NOTHROW(ThmOneParams<double>(2, {0.0, 0.4, 0.4, 0.0}));
}

TEST_CASE("is_theorem1_form round trip and rejections") {
  Rng rng(31);
  SUBCASE("round trip recovers the couplings exactly") {
    for (int n = 2; n <= 5; ++n) {
      auto v = random_symmetric_couplings(rng, n);
      auto P = build_theorem1(ThmOneParams<Rational>(n, v));
      auto match = is_theorem1_form(P);
      REQUIRE(match.ok());
      CHECK(match.params->raw() == v);
    }
  }
  SUBCASE("the n_plus_1_points family is not of the displayed form") {
    ConstructionSpec spec;
    spec.n = 3;
    spec.m = 2;
    spec.k = 3;
    spec.variant = ConstructionVariant::n_plus_1_points;
    auto match = is_theorem1_form(build_construction<Rational>(spec));
    CHECK(!match.ok());
    REQUIRE(match.mismatch.has_value());
  }
  SUBCASE("a perturbed entry is reported at its slice and column") {
    auto v = random_symmetric_couplings(rng, 3);
    auto P = to_double_tensor(build_theorem1(ThmOneParams<Rational>(3, v)));
    // bump the (row 3, slice 1, column 2) entry and renormalize that column
    std::vector<double> data = P.data();
    const std::int64_t col = 0 * 3 + 1;  // slice 1, column 2
    data[static_cast<std::size_t>(col) * 3 + 2] += 1e-3;
    double sum = 0.0;
    for (int r = 0; r < 3; ++r) sum += data[static_cast<std::size_t>(col) * 3 + r];
    for (int r = 0; r < 3; ++r) data[static_cast<std::size_t>(col) * 3 + r] /= sum;
    TransitionTensor<double> Q(3, 2, std::move(data));
    auto match = is_theorem1_form(Q, 1e-6);
    REQUIRE(!match.ok());
    CHECK(match.mismatch->slice == 1);
    CHECK(match.mismatch->column == 2);
  }
  SUBCASE("wrong order is an error") {
    ConstructionSpec spec;
    spec.n = 3;
    spec.m = 3;
    spec.k = 3;
    spec.variant = ConstructionVariant::base;
    CHECK_THROWS_AS(is_theorem1_form(build_construction<Rational>(spec)), std::invalid_argument);
  }
}

TEST_CASE("universal check on family members and their lifts") {
  Rng rng(37);
  for (int n = 2; n <= 4; ++n) {
    auto P = random_universal_tensor(rng, n);
    auto check = is_universally_stationary(P);
    CHECK(check.universal);
    auto lifted = lift(P);
    CHECK(is_universally_stationary(lifted).universal);
  }
}

TEST_CASE("universal check fails on the face family with a verifiable certificate") {
  ConstructionSpec spec;
  spec.n = 4;
  spec.m = 2;
  spec.k = 2;
  spec.variant = ConstructionVariant::face;
  auto P = build_construction<Rational>(spec);
  auto check = is_universally_stationary(P);
  REQUIRE(!check.universal);
  // recompute the failing class sum directly from the tensor
  Rational direct(0);
  for (const auto& mc : monomial_classes(4, 2)) {
    if (mc.exponent != check.failing_class) continue;
    for (auto c : mc.columns) direct += P.at(check.failing_row - 1, c - 1);
  }
  CHECK(direct == check.lhs);
  CHECK(!(check.lhs == check.rhs));
}

TEST_CASE("asymmetric couplings are not universally stationary") {
  std::vector<Rational> v = {Rational(0), Rational(1, 3), Rational(2, 3), Rational(0)};
  auto P = build_theorem1_slices(2, v);
  CHECK(validate(P).empty());  // still a valid transition law
  CHECK(!is_universally_stationary(P).universal);
  CHECK(!is_theorem1_form(P).ok());
}

TEST_CASE("class-sum criterion agrees with the sampling oracle") {
  Rng rng(41);
  int universal_seen = 0, non_universal_seen = 0;
  while (universal_seen < 100 || non_universal_seen < 100) {
    const int n = static_cast<int>(rng.uniform_int(2, 4));
    TransitionTensor<double> P = (universal_seen < 100)
                                     ? to_double_tensor(random_universal_tensor(rng, n))
                                     : random_stochastic_tensor(rng, n, 2);
    const bool claimed = is_universally_stationary(P).universal;
    double worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
      ProbabilityVector<double> x(sample_simplex(rng, n), 1e-9);
      worst = std::max(worst, residual(P, x));
    }
    if (claimed) {
      ++universal_seen;
      CHECK(worst <= 1e-12);
    } else {
      ++non_universal_seen;
      CHECK(worst > 1e-8);
    }
  }
}

TEST_CASE("theorem1 form succeeds exactly when the universal check passes (m=2)") {
  Rng rng(43);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(2, 5));
    const bool from_family = trial % 2 == 0;
    TransitionTensor<double> P = from_family ? to_double_tensor(random_universal_tensor(rng, n))
                                             : random_stochastic_tensor(rng, n, 2);
    CHECK(is_theorem1_form(P).ok() == is_universally_stationary(P).universal);
  }
}

TEST_CASE("irreducibility") {
  SUBCASE("all-positive tensors are irreducible (fuzz)") {
    Rng rng(47);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = static_cast<int>(rng.uniform_int(2, 5));
      auto P = random_stochastic_tensor(rng, n, static_cast<int>(rng.uniform_int(1, 3)));
      CHECK(is_irreducible(P).irreducible);
    }
  }
  SUBCASE("all-barycenter tensor is irreducible, by full enumeration at n=3") {
    ConstructionSpec spec;
    spec.n = 3;
    spec.m = 2;
    spec.k = 3;
    spec.variant = ConstructionVariant::base;
    auto P = build_construction<Rational>(spec);
    CHECK(is_irreducible(P).irreducible);
    // independent enumeration of all proper nonempty subsets
    for (std::uint32_t mask = 1; mask < 7; ++mask) {
      bool blocks = true;
      for (int i = 0; i < 3 && blocks; ++i) {
        if (!(mask & (1u << i))) continue;
        for (std::int64_t c = 0; c < 9 && blocks; ++c) {
          MultiIndex idx = col_unindex(3, 2, c + 1);
          bool outside = true;
          for (int part : idx.parts) {
            if (mask & (1u << (part - 1))) outside = false;
          }
          if (outside && !(P.at(i, c) == Rational(0))) blocks = false;
        }
      }
      CHECK(!blocks);
    }
  }
  SUBCASE("identity slices are reducible with minimal witness {1}") {
    auto P = build_theorem1(ThmOneParams<Rational>(3, std::vector<Rational>(9, Rational(0))));
    auto result = is_irreducible(P);
    CHECK(!result.irreducible);
    CHECK(result.witness == std::vector<int>{1});
  }
  SUBCASE("every universal-family member is reducible") {
    // slice j pins column j to e_j, so histories confined to {2..n} never
    // feed state 1: {1} always blocks
    Rng rng(49);
    for (int n = 2; n <= 5; ++n) {
      auto result = is_irreducible(random_universal_tensor(rng, n));
      CHECK(!result.irreducible);
      CHECK(result.witness == std::vector<int>{1});
    }
  }
  SUBCASE("single state is vacuously irreducible") {
    TransitionTensor<double> P(1, 2, {1.0});
    CHECK(is_irreducible(P).irreducible);
  }
  SUBCASE("capacity bound") {
    CHECK_THROWS_AS(is_irreducible(TransitionTensor<double>(
                        21, 1, std::vector<double>(21 * 21, 1.0 / 21))),
                    std::invalid_argument);
  }
}
