#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cliffrope/ga_core.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cliffrope::ga;
using testutil::max_abs_diff;

namespace {

Multivector e(int dim, std::initializer_list<int> indices) {
  return Multivector::basis_product(dim, indices);
}

// Truncated power series sum_{k<=terms} (t B)^k / k!, independent of the closed form.
Multivector exp_series(const Multivector& b, double t, int terms) {
  Multivector sum = Multivector::scalar(b.dim(), 1.0);
  Multivector term = Multivector::scalar(b.dim(), 1.0);
  for (int k = 1; k <= terms; ++k) {
    term = term * b * (t / k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("geometric product of basis blades") {
  CHECK(e(3, {1}) * e(3, {2}) == Multivector::blade(3, 0b011));
  CHECK(e(3, {2}) * e(3, {1}) == Multivector::blade(3, 0b011, -1.0));
  CHECK(e(3, {1, 2}) * e(3, {2, 3}) == Multivector::blade(3, 0b101));
  CHECK(e(3, {1, 2}) * e(3, {1, 2}) == Multivector::scalar(3, -1.0));
  CHECK(e(3, {2, 1}) == Multivector::blade(3, 0b011, -1.0));
}

TEST_CASE("product matches the even-subalgebra table cell by cell") {
  // Rows/columns: 1, e12, e23, e13.
  const BladeMask basis[4] = {0b000, 0b011, 0b110, 0b101};
  const struct { int sign; int index; } table[4][4] = {
      {{1, 0}, {1, 1}, {1, 2}, {1, 3}},
      {{1, 1}, {-1, 0}, {1, 3}, {-1, 2}},
      {{1, 2}, {-1, 3}, {-1, 0}, {1, 1}},
      {{1, 3}, {1, 2}, {-1, 1}, {-1, 0}},
  };
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const auto prod = Multivector::blade(3, basis[r]) * Multivector::blade(3, basis[c]);
      CHECK(prod == Multivector::blade(3, basis[table[r][c].index], table[r][c].sign));
    }
  }
}

TEST_CASE("blade product follows the XOR/sign law and basis blades square to +-1") {
  for (int dim = 1; dim <= 6; ++dim) {
    const auto n = BladeMask{1} << dim;
    for (BladeMask a = 0; a < n; ++a) {
      for (BladeMask b = 0; b < n; ++b) {
        const auto prod = Multivector::blade(dim, a) * Multivector::blade(dim, b);
        for (BladeMask k = 0; k < n; ++k) {
          if (k == (a ^ b)) {
            REQUIRE(std::abs(prod[k]) == 1.0);
          } else {
            REQUIRE(prod[k] == 0.0);
          }
        }
      }
      const auto square = Multivector::blade(dim, a) * Multivector::blade(dim, a);
      CHECK(square[0] == reverse_sign(std::popcount(a)));
    }
  }
}

TEST_CASE("sign matches explicit transposition counting") {
  // Bubble-sort the concatenated factor lists and count swaps.
  for (BladeMask a = 0; a < 32; ++a) {
    for (BladeMask b = 0; b < 32; ++b) {
      std::vector<int> factors;
      for (int k = 0; k < 5; ++k) if (a & (1u << k)) factors.push_back(k);
      for (int k = 0; k < 5; ++k) if (b & (1u << k)) factors.push_back(k);
      int swaps = 0;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        for (std::size_t j = 0; j + 1 < factors.size() - i; ++j) {
          if (factors[j] > factors[j + 1]) {
            std::swap(factors[j], factors[j + 1]);
            ++swaps;
          }
        }
      }
      REQUIRE(blade_product_sign(a, b) == (swaps % 2 ? -1 : 1));
    }
  }
}

TEST_CASE("dimension checks") {
  CHECK_THROWS_AS(geometric_product(Multivector(2), Multivector(3)), std::invalid_argument);
  CHECK_THROWS_AS(Multivector(13), std::invalid_argument);
  CHECK_THROWS_AS(Multivector(-1), std::invalid_argument);
  CHECK_NOTHROW(Multivector(12));
  CHECK_THROWS_AS(sandwich(Rotor(3), Multivector(4)), std::invalid_argument);
}

TEST_CASE("associativity on random triples") {
  std::mt19937_64 rng(11);
  for (int dim = 1; dim <= 5; ++dim) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto a = testutil::random_multivector(rng, dim);
      const auto b = testutil::random_multivector(rng, dim);
      const auto c = testutil::random_multivector(rng, dim);
      REQUIRE(max_abs_diff((a * b) * c, a * (b * c)) <= 1e-12);
    }
  }
}

TEST_CASE("reverse") {
  CHECK(reverse(Multivector::scalar(3, 1.0) + e(3, {1, 2})) ==
        Multivector::scalar(3, 1.0) - e(3, {1, 2}));
  CHECK(reverse(e(3, {1})) == e(3, {1}));
  CHECK(reverse(e(3, {1, 2, 3})) == -e(3, {1, 2, 3}));
}

TEST_CASE("grade projection") {
  const auto m = Multivector::scalar(3, 3.0) + 2.0 * e(3, {1}) + e(3, {1, 2});
  CHECK(grade_project(m, 1) == 2.0 * e(3, {1}));
  CHECK(grade_project(e(3, {1, 2, 3}), 3) == e(3, {1, 2, 3}));
  CHECK(grade_project(e(3, {1, 2, 3}), 0) == Multivector(3));
  CHECK_THROWS_AS(grade_project(m, 4), std::out_of_range);
  CHECK_THROWS_AS(grade_project(m, -1), std::out_of_range);
}

TEST_CASE("norm") {
  CHECK(mv_norm(Multivector(3)) == 0.0);
  CHECK(mv_norm(e(3, {1}) + e(3, {2})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  for (double t : {-2.0, 0.0, 0.4, 3.0}) {
    CHECK(mv_norm(rotor_exp(e(3, {1, 2}), t).value()) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("rotor exponential closed form") {
  CHECK(rotor_exp(e(3, {1, 2}), 0.0).value() == Multivector::scalar(3, 1.0));
  const double h = std::numbers::sqrt2 / 2;
  const auto expected = (Multivector::scalar(3, 1.0) + e(3, {1, 2})) * h;
  CHECK(max_abs_diff(rotor_exp(e(3, {1, 2}), std::numbers::pi / 4).value(), expected) <= 1e-15);
}

TEST_CASE("rotor exponential agrees with the power series") {
  const auto e23 = e(3, {2, 3});
  CHECK(max_abs_diff(rotor_exp(e23, 0.3).value(), exp_series(e23, 0.3, 20)) <= 1e-12);

  std::mt19937_64 rng(5);
  for (int dim = 2; dim <= 5; ++dim) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto b = testutil::random_unit_bivector(rng, dim);
      const double t = testutil::uniform(rng, -M_PI, M_PI);
      REQUIRE(max_abs_diff(rotor_exp(b, t).value(), exp_series(b, t, 30)) <= 1e-12);
    }
  }
}

TEST_CASE("rotor exponential rejects bad bivectors") {
  CHECK_THROWS_AS(rotor_exp(2.0 * e(3, {1, 2}), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(rotor_exp(e(3, {1}), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(rotor_exp(Multivector::scalar(3, 1.0) + e(3, {1, 2}), 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(rotor_exp(Multivector(3), 0.1), std::invalid_argument);
  // e12 + e34 is unit-normalizable but not a blade.
  const auto non_simple = (e(4, {1, 2}) + e(4, {3, 4})) * (1.0 / std::sqrt(2.0));
  CHECK_THROWS_AS(rotor_exp(non_simple, 0.1), std::invalid_argument);
  // Inside the 1e-9 unit tolerance.
  CHECK_NOTHROW(rotor_exp(e(3, {1, 2}) * (1.0 + 1e-10), 0.1));
}

TEST_CASE("Rotor::from_multivector validates") {
  CHECK_THROWS_AS(Rotor::from_multivector(e(3, {1})), std::invalid_argument);
  CHECK_THROWS_AS(Rotor::from_multivector(Multivector::scalar(3, 2.0)), std::invalid_argument);
  CHECK_NOTHROW(Rotor::from_multivector(Multivector::scalar(3, -1.0)));
}

TEST_CASE("sandwich examples") {
  const auto e1 = e(3, {1});
  const auto e2 = e(3, {2});
  const auto e12 = e(3, {1, 2});
  CHECK(max_abs_diff(sandwich(rotor_exp(e12, std::numbers::pi / 2), e1), -e1) <= 1e-15);
  // Hand expansion: (c + s e12) e1 (c - s e12) = (c^2 - s^2) e1 - 2cs e2.
  CHECK(max_abs_diff(sandwich(rotor_exp(e12, std::numbers::pi / 4), e1), -e2) <= 1e-15);
  for (double theta : {0.1, 1.0, 2.5, -0.7}) {
    const auto expected = std::cos(theta) * e1 - std::sin(theta) * e2;
    CHECK(max_abs_diff(sandwich(rotor_exp(e12, theta / 2), e1), expected) <= 1e-15);
  }
}

TEST_CASE("pseudoscalar of Cl(3,0) is central and fixed by every sandwich") {
  const auto e123 = e(3, {1, 2, 3});
  for (BladeMask m = 0; m < 8; ++m) {
    const auto blade = Multivector::blade(3, m);
    CHECK(blade * e123 == e123 * blade);
  }
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r = testutil::random_rotor(rng, 3);
    REQUIRE(max_abs_diff(sandwich(r, e123), e123) <= 1e-12);
    REQUIRE(max_abs_diff(sandwich(r, Multivector::scalar(3, 1.0)), Multivector::scalar(3, 1.0)) <=
            1e-12);
  }
}

TEST_CASE("sandwich properties on random inputs") {
  std::mt19937_64 rng(17);
  for (int dim = 2; dim <= 5; ++dim) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto r1 = testutil::random_rotor(rng, dim);
      const auto r2 = testutil::random_rotor(rng, dim);
      const auto a = testutil::random_multivector(rng, dim);
      const auto out = sandwich(r1, a);
      for (int g = 0; g <= dim; ++g) {
        const auto projected = sandwich(r1, grade_project(a, g));
        REQUIRE(max_abs_diff(grade_project(out, g), projected) <= 1e-12);
        REQUIRE(std::abs(mv_norm(projected) - mv_norm(grade_project(a, g))) <= 1e-12);
      }
      REQUIRE(max_abs_diff(sandwich(compose(r1, r2), a), sandwich(r1, sandwich(r2, a))) <= 1e-12);
      REQUIRE(max_abs_diff(sandwich(inverse(r1), out), a) <= 1e-12);

      const auto b = testutil::random_unit_bivector(rng, dim);
      const double s = testutil::uniform(rng, -2, 2), t = testutil::uniform(rng, -2, 2);
      REQUIRE(max_abs_diff(rotor_exp(b, s).value() * rotor_exp(b, t).value(),
                           rotor_exp(b, s + t).value()) <= 1e-12);
    }
  }
}

TEST_CASE("Cl(3,0) slot layout flips only e31") {
  auto m = Multivector::blade(3, 0b101);  // e13
  const auto slots = to_cl3_layout(m);
  CHECK(slots[kE31Slot] == -1.0);
  CHECK(from_cl3_layout(slots) == m);
  CHECK_THROWS_AS(to_cl3_layout(Multivector(2)), std::invalid_argument);
  const std::vector<double> short_slots(7, 0.0);
  CHECK_THROWS_AS(from_cl3_layout(short_slots), std::invalid_argument);
}
