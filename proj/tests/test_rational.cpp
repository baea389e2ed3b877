#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "jmnoise/rational.hpp"
#include "jmnoise/rng.hpp"

using namespace jmnoise;

TEST_CASE("BigInt small arithmetic and printing") {
  CHECK(BigInt(0).to_string() == "0");
  CHECK(BigInt(-42).to_string() == "-42");
  CHECK((BigInt(1000000007LL) * BigInt(998244353LL)).to_string() ==
        "998244359987710471");
  CHECK((BigInt(123) + BigInt(-123)).is_zero());
  CHECK((BigInt(1) - BigInt(2)).to_string() == "-1");
  CHECK(BigInt(7) < BigInt(8));
  CHECK(BigInt(-7) > BigInt(-8));
}

TEST_CASE("BigInt factorial-scale values") {
  // 40! spans several limbs.
  BigInt fact(1);
  for (int k = 2; k <= 40; ++k) fact *= BigInt(k);
  CHECK(fact.to_string() ==
        "815915283247897734345611269596115894272000000000");
  CHECK(BigInt::divide_exact(fact, BigInt(40)).to_string() ==
        "20397882081197443358640281739902897356800000000");
}

TEST_CASE("BigInt shifts, gcd, divide_exact") {
  const BigInt one(1);
  CHECK(one.shifted_left(100).shifted_right(100) == one);
  CHECK(one.shifted_left(100).bit_length() == 101);
  CHECK(one.shifted_left(100).trailing_zero_bits() == 100);
  CHECK(gcd(BigInt(462), BigInt(1071)) == BigInt(21));
  CHECK(gcd(BigInt(0), BigInt(-5)) == BigInt(5));
  const BigInt a = BigInt(123456789) * BigInt(987654321) * BigInt(1000003);
  CHECK(BigInt::divide_exact(a, BigInt(987654321)) ==
        BigInt(123456789) * BigInt(1000003));
  CHECK(BigInt::divide_exact(a, a) == one);
}

TEST_CASE("BigInt to_double on huge magnitudes") {
  const BigInt big = BigInt(1).shifted_left(400) + BigInt(12345);
  CHECK(big.to_double() == doctest::Approx(std::ldexp(1.0, 400)).epsilon(1e-15));
  CHECK((-big).to_double() < 0.0);
}

TEST_CASE("Rational normalization and arithmetic") {
  CHECK(Rational(6, 4).to_string() == "3/2");
  CHECK(Rational(-6, 4).to_string() == "-3/2");
  CHECK(Rational(6, -4).to_string() == "-3/2");
  CHECK((Rational(1, 3) + Rational(1, 6)).to_string() == "1/2");
  CHECK((Rational(1, 3) - Rational(1, 3)).is_zero());
  CHECK((Rational(2, 3) * Rational(9, 4)).to_string() == "3/2");
  CHECK((Rational(1, 2) / Rational(1, 8)).to_string() == "4");
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 3) > Rational(-1, 2));
  CHECK(Rational(2, 7).pow(3).to_string() == "8/343");
  CHECK(Rational(2, 7).pow(0).to_string() == "1");
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("Rational from_double_exact is exact") {
  CHECK(Rational::from_double_exact(0.5).to_string() == "1/2");
  CHECK(Rational::from_double_exact(-0.75).to_string() == "-3/4");
  CHECK(Rational::from_double_exact(3.0).to_string() == "3");
  // 0.1 is not a binary rational; the exact value of its double is.
  CHECK(Rational::from_double_exact(0.1).to_string() ==
        "3602879701896397/36028797018963968");
}

TEST_CASE("Rational to_double round-trips random doubles") {
  Xoshiro256 rng(99);
  for (int i = 0; i < 500; ++i) {
    const double x = (rng.next_double() - 0.5) * std::ldexp(1.0, int(rng.next_u64() % 40) - 20);
    CHECK(Rational::from_double_exact(x).to_double() == x);
  }
}

TEST_CASE("Rational survives huge intermediate magnitudes") {
  // (37/100 * 29 - 1)^49 style values exercise multi-limb paths.
  const Rational base = Rational(37, 100) * Rational(29) - Rational(1);
  const Rational big = base.pow(49);
  const double expected = std::pow(37.0 * 29.0 / 100.0 - 1.0, 49);
  CHECK(big.to_double() == doctest::Approx(expected).epsilon(1e-12));
  CHECK((big / big.abs()).to_string() == (big.is_negative() ? "-1" : "1"));
}
