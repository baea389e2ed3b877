#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace jmnoise {

// Arbitrary-precision signed integer, sign-magnitude with base-2^32 limbs.
// Supports exactly what exact-rational evaluation needs: ring arithmetic,
// comparison, shifts, binary gcd, and conversions. No general division.
class BigInt {
 public:
  BigInt() : sign_(0) {}
  BigInt(long long v);  // NOLINT(google-explicit-constructor)

  static BigInt from_uint64(std::uint64_t v);

  bool is_zero() const { return sign_ == 0; }
  bool is_negative() const { return sign_ < 0; }
  bool is_even() const { return limbs_.empty() || (limbs_[0] & 1u) == 0; }
  int sign() const { return sign_; }

  BigInt operator-() const;
  BigInt abs() const;

  friend BigInt operator+(const BigInt& a, const BigInt& b);
  friend BigInt operator-(const BigInt& a, const BigInt& b);
  friend BigInt operator*(const BigInt& a, const BigInt& b);
  BigInt& operator+=(const BigInt& b) { return *this = *this + b; }
  BigInt& operator-=(const BigInt& b) { return *this = *this - b; }
  BigInt& operator*=(const BigInt& b) { return *this = *this * b; }

  // Three-way comparison: -1, 0, +1.
  static int compare(const BigInt& a, const BigInt& b);
  friend bool operator==(const BigInt& a, const BigInt& b) { return compare(a, b) == 0; }
  friend bool operator!=(const BigInt& a, const BigInt& b) { return compare(a, b) != 0; }
  friend bool operator<(const BigInt& a, const BigInt& b) { return compare(a, b) < 0; }
  friend bool operator<=(const BigInt& a, const BigInt& b) { return compare(a, b) <= 0; }
  friend bool operator>(const BigInt& a, const BigInt& b) { return compare(a, b) > 0; }
  friend bool operator>=(const BigInt& a, const BigInt& b) { return compare(a, b) >= 0; }

  BigInt shifted_left(unsigned bits) const;
  BigInt shifted_right(unsigned bits) const;
  unsigned trailing_zero_bits() const;  // undefined for zero
  unsigned bit_length() const;          // 0 for zero

  // Quotient a / divisor for a known-exact division (divisor | a), computed
  // least-significant-limb first from the 2-adic inverse of the divisor.
  static BigInt divide_exact(const BigInt& a, const BigInt& divisor);

  // Nearest double, correct to ~1 ulp even when the value overflows double
  // range is not required here; magnitudes beyond double range return +-inf.
  double to_double() const;
  // (mantissa, exponent) with value ~= mantissa * 2^exponent and mantissa
  // holding the top <= 64 bits. Lets callers form huge-magnitude quotients.
  struct Scaled {
    double mantissa;
    long exponent;
  };
  Scaled scaled() const;

  std::string to_string() const;  // decimal

 private:
  void trim();
  static int compare_magnitude(const BigInt& a, const BigInt& b);
  static std::vector<std::uint32_t> add_magnitude(const std::vector<std::uint32_t>& a,
                                                  const std::vector<std::uint32_t>& b);
  // Requires |a| >= |b|.
  static std::vector<std::uint32_t> sub_magnitude(const std::vector<std::uint32_t>& a,
                                                  const std::vector<std::uint32_t>& b);

  int sign_;
  std::vector<std::uint32_t> limbs_;  // little-endian, no leading zeros
};

BigInt gcd(BigInt a, BigInt b);

// Exact rational p/q, always normalized: q > 0, gcd(|p|, q) = 1.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(long long num, long long den);
  Rational(BigInt num, BigInt den);

  // Exact value of an IEEE double (every finite double is m * 2^e).
  static Rational from_double_exact(double v);

  const BigInt& numerator() const { return num_; }
  const BigInt& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_negative() const { return num_.is_negative(); }

  Rational operator-() const;
  Rational abs() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  Rational pow(unsigned exponent) const;

  static int compare(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return compare(a, b) != 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return compare(a, b) >= 0; }

  double to_double() const;
  std::string to_string() const;  // "p/q", or "p" when q == 1

 private:
  void normalize();
  BigInt num_;
  BigInt den_;
};

}  // namespace jmnoise
