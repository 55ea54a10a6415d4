#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "betaenc/constants.hpp"
#include "betaenc/encoders.hpp"
#include "betaenc/errors.hpp"
#include "betaenc/invariant_geometry.hpp"
#include "betaenc/zero_structure.hpp"
#include "oracles.hpp"

using namespace betaenc;

namespace {

std::vector<Bit> bits_of(std::initializer_list<int> v) {
  std::vector<Bit> out;
  for (int b : v) out.push_back(Bit::from_positive(b > 0));
  return out;
}

// (1 - t - t^2) * sum_j s_j t^{3j} by explicit convolution.
std::vector<int> from_blocks(const std::vector<int>& signs) {
  std::vector<int> r(3 * signs.size() - 2, 0);
  for (std::size_t j = 0; j < signs.size(); ++j) r[3 * j] = signs[j];
  std::vector<int> p(r.size() + 2, 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    p[i] += r[i];
    p[i + 1] -= r[i];
    p[i + 2] -= r[i];
  }
  return p;
}

std::vector<int> random_signs(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> s(n);
  for (int& v : s) v = (rng() & 1) ? 1 : -1;
  return s;
}

}  // namespace

TEST_CASE("period-3 law") {
  CHECK(check_period3(bits_of({1, -1, -1, 1, -1, -1})));
  CHECK_FALSE(check_period3(bits_of({1, -1, 1})));
  CHECK(period3_alignment(bits_of({-1, 1, 1, 1, -1, -1})) == std::optional<std::size_t>(0));
  for (const auto& p : builtin_policies(3)) {
    const auto r = gre_encode(0.0, 300, {0.3, 2.0, p});
    CHECK(check_period3(r.bits));
    CHECK(period3_alignment(r.bits) == std::optional<std::size_t>(0));
  }
}

TEST_CASE("factorization by 1 - t - t^2") {
  SUBCASE("single block") {
    const auto f = factor_zero_poly(TernaryPolynomial::from_ints(std::vector<int>{1, -1, -1}));
    CHECK(f.r_coeffs == std::vector<std::int8_t>{1});
    CHECK(f.n_blocks == 1);
  }
  SUBCASE("two blocks") {
    const auto f =
        factor_zero_poly(TernaryPolynomial::from_ints(std::vector<int>{1, -1, -1, -1, 1, 1}));
    CHECK(f.r_coeffs == std::vector<std::int8_t>{1, 0, 0, -1});
  }
  SUBCASE("random blocks round trip through explicit convolution") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; ++i) {
      const auto signs = random_signs(rng, 1 + rng() % 20);
      const auto f = factor_zero_poly(TernaryPolynomial::from_ints(from_blocks(signs)));
      REQUIRE(f.n_blocks == signs.size());
      for (std::size_t j = 0; j < signs.size(); ++j) CHECK(f.r_coeffs[3 * j] == signs[j]);
    }
  }
  SUBCASE("48-bit zero expansion divides exactly") {
    const auto r = gre_encode(0.0, 48, {0.3, 2.0, FlakyPolicy::seeded_random(6)});
    const auto f = factor_zero_poly(TernaryPolynomial::from_bits(r.bits));
    CHECK(f.n_blocks == 16);
  }
  SUBCASE("non-factorable input") {
    CHECK_THROWS_AS(factor_zero_poly(TernaryPolynomial::from_ints(std::vector<int>{1, 1, -1})),
                    StructureViolation);
    CHECK_THROWS_AS(factor_zero_poly(TernaryPolynomial::from_ints(std::vector<int>{1, -1, -1, 1})),
                    StructureViolation);
  }
}

TEST_CASE("magnitude bound on R") {
  const FactoredZeroPoly one{{1}, 1};
  const auto at0 = rn_magnitude_bound(one, 0.0);
  CHECK(at0.value == 1.0);
  CHECK(at0.bound == 1.0);
  const auto edge = rn_magnitude_bound(one, kInvPhi - 1e-9);
  CHECK(edge.bound == doctest::Approx(0.691).epsilon(1e-3));
  CHECK_THROWS_AS(rn_magnitude_bound(one, kInvPhi), ParameterError);

  std::mt19937_64 rng(16);
  for (int i = 0; i < 20; ++i) {
    const auto signs = random_signs(rng, 16);
    const auto f = factor_zero_poly(TernaryPolynomial::from_ints(from_blocks(signs)));
    const auto m = rn_magnitude_bound(f, 0.5);
    CHECK(m.value >= 1.0 - 0.125 / 0.875 - 1e-12);
    // Value by explicit powers.
    std::vector<int> r(f.r_coeffs.begin(), f.r_coeffs.end());
    CHECK(m.value == doctest::Approx(std::abs(oracle::naive_poly(r, 0.5))));
  }
}

TEST_CASE("derivative at the golden root") {
  CHECK(derivative_bound_at_root(TernaryPolynomial::from_ints(std::vector<int>{1, -1, -1})) ==
        doctest::Approx(2.2360679775));
  std::mt19937_64 rng(10);
  for (int i = 0; i < 50; ++i) {
    const auto p = TernaryPolynomial::from_ints(from_blocks(random_signs(rng, 10)));
    CHECK(derivative_bound_at_root(p) >= kRootDerivativeFloor);
  }
}
