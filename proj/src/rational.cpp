#include "jmnoise/rational.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace jmnoise {

namespace {
constexpr std::uint64_t kLimbBase = std::uint64_t{1} << 32;
}

BigInt::BigInt(long long v) {
  if (v == 0) {
    sign_ = 0;
    return;
  }
  sign_ = v > 0 ? 1 : -1;
  // Avoid overflow on LLONG_MIN.
  std::uint64_t mag = v > 0 ? static_cast<std::uint64_t>(v)
                            : ~static_cast<std::uint64_t>(v) + 1;
  while (mag != 0) {
    limbs_.push_back(static_cast<std::uint32_t>(mag & 0xffffffffu));
    mag >>= 32;
  }
}

BigInt BigInt::from_uint64(std::uint64_t v) {
  BigInt r;
  if (v == 0) return r;
  r.sign_ = 1;
  while (v != 0) {
    r.limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    v >>= 32;
  }
  return r;
}

void BigInt::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  if (limbs_.empty()) sign_ = 0;
}

int BigInt::compare_magnitude(const BigInt& a, const BigInt& b) {
  if (a.limbs_.size() != b.limbs_.size())
    return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
  for (std::size_t i = a.limbs_.size(); i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
  }
  return 0;
}

int BigInt::compare(const BigInt& a, const BigInt& b) {
  if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
  const int mag = compare_magnitude(a, b);
  return a.sign_ >= 0 ? mag : -mag;
}

std::vector<std::uint32_t> BigInt::add_magnitude(const std::vector<std::uint32_t>& a,
                                                 const std::vector<std::uint32_t>& b) {
  const std::size_t n = std::max(a.size(), b.size());
  std::vector<std::uint32_t> out(n + 1, 0);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    out[i] = static_cast<std::uint32_t>(s & 0xffffffffu);
    carry = s >> 32;
  }
  out[n] = static_cast<std::uint32_t>(carry);
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

std::vector<std::uint32_t> BigInt::sub_magnitude(const std::vector<std::uint32_t>& a,
                                                 const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out(a.size(), 0);
  std::int64_t borrow = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::int64_t s = static_cast<std::int64_t>(a[i]) - borrow -
                     (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
    if (s < 0) {
      s += static_cast<std::int64_t>(kLimbBase);
      borrow = 1;
    } else {
      borrow = 0;
    }
    out[i] = static_cast<std::uint32_t>(s);
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  r.sign_ = -r.sign_;
  return r;
}

BigInt BigInt::abs() const {
  BigInt r = *this;
  if (r.sign_ < 0) r.sign_ = 1;
  return r;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
  if (a.sign_ == 0) return b;
  if (b.sign_ == 0) return a;
  BigInt r;
  if (a.sign_ == b.sign_) {
    r.limbs_ = BigInt::add_magnitude(a.limbs_, b.limbs_);
    r.sign_ = a.sign_;
  } else {
    const int mag = BigInt::compare_magnitude(a, b);
    if (mag == 0) return BigInt();
    if (mag > 0) {
      r.limbs_ = BigInt::sub_magnitude(a.limbs_, b.limbs_);
      r.sign_ = a.sign_;
    } else {
      r.limbs_ = BigInt::sub_magnitude(b.limbs_, a.limbs_);
      r.sign_ = b.sign_;
    }
  }
  r.trim();
  return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
  if (a.sign_ == 0 || b.sign_ == 0) return BigInt();
  BigInt r;
  r.sign_ = a.sign_ * b.sign_;
  r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
  for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
    std::uint64_t carry = 0;
    const std::uint64_t ai = a.limbs_[i];
    for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
      const std::uint64_t t = ai * b.limbs_[j] + r.limbs_[i + j] + carry;
      r.limbs_[i + j] = static_cast<std::uint32_t>(t & 0xffffffffu);
      carry = t >> 32;
    }
    r.limbs_[i + b.limbs_.size()] = static_cast<std::uint32_t>(carry);
  }
  r.trim();
  return r;
}

BigInt BigInt::shifted_left(unsigned bits) const {
  if (sign_ == 0 || bits == 0) return *this;
  const unsigned limb_shift = bits / 32;
  const unsigned bit_shift = bits % 32;
  BigInt r;
  r.sign_ = sign_;
  r.limbs_.assign(limbs_.size() + limb_shift + 1, 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    const std::uint64_t v = static_cast<std::uint64_t>(limbs_[i]) << bit_shift;
    r.limbs_[i + limb_shift] |= static_cast<std::uint32_t>(v & 0xffffffffu);
    r.limbs_[i + limb_shift + 1] |= static_cast<std::uint32_t>(v >> 32);
  }
  r.trim();
  return r;
}

BigInt BigInt::shifted_right(unsigned bits) const {
  if (sign_ == 0) return *this;
  const unsigned limb_shift = bits / 32;
  const unsigned bit_shift = bits % 32;
  if (limb_shift >= limbs_.size()) return BigInt();
  BigInt r;
  r.sign_ = sign_;
  r.limbs_.assign(limbs_.size() - limb_shift, 0);
  for (std::size_t i = 0; i < r.limbs_.size(); ++i) {
    std::uint64_t v = static_cast<std::uint64_t>(limbs_[i + limb_shift]) >> bit_shift;
    if (bit_shift != 0 && i + limb_shift + 1 < limbs_.size()) {
      v |= static_cast<std::uint64_t>(limbs_[i + limb_shift + 1]) << (32 - bit_shift);
    }
    r.limbs_[i] = static_cast<std::uint32_t>(v & 0xffffffffu);
  }
  r.trim();
  return r;
}

unsigned BigInt::trailing_zero_bits() const {
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    if (limbs_[i] != 0)
      return static_cast<unsigned>(i) * 32 + std::countr_zero(limbs_[i]);
  }
  return 0;
}

unsigned BigInt::bit_length() const {
  if (limbs_.empty()) return 0;
  return static_cast<unsigned>(limbs_.size() - 1) * 32 +
         (32 - std::countl_zero(limbs_.back()));
}

double BigInt::to_double() const {
  const Scaled s = scaled();
  return std::ldexp(s.mantissa, static_cast<int>(s.exponent));
}

BigInt::Scaled BigInt::scaled() const {
  if (sign_ == 0) return {0.0, 0};
  const unsigned bits = bit_length();
  if (bits <= 64) {
    std::uint64_t v = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) v = (v << 32) | limbs_[i];
    return {sign_ * static_cast<double>(v), 0};
  }
  const BigInt top = shifted_right(bits - 64);
  std::uint64_t v = 0;
  for (std::size_t i = top.limbs_.size(); i-- > 0;) v = (v << 32) | top.limbs_[i];
  return {sign_ * static_cast<double>(v), static_cast<long>(bits) - 64};
}

std::string BigInt::to_string() const {
  if (sign_ == 0) return "0";
  // Repeated short division by 1e9.
  std::vector<std::uint32_t> work = limbs_;
  std::string digits;
  while (!work.empty()) {
    std::uint64_t rem = 0;
    for (std::size_t i = work.size(); i-- > 0;) {
      const std::uint64_t cur = (rem << 32) | work[i];
      work[i] = static_cast<std::uint32_t>(cur / 1000000000u);
      rem = cur % 1000000000u;
    }
    while (!work.empty() && work.back() == 0) work.pop_back();
    for (int k = 0; k < 9; ++k) {
      digits.push_back(static_cast<char>('0' + rem % 10));
      rem /= 10;
    }
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  if (sign_ < 0) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

BigInt BigInt::divide_exact(const BigInt& a, const BigInt& divisor) {
  if (divisor.is_zero()) throw std::domain_error("BigInt: division by zero");
  if (a.is_zero()) return BigInt();
  const int sign = a.sign_ * divisor.sign_;
  // Strip the shared power of two so the divisor becomes odd and invertible
  // mod 2^32. divisor | a guarantees a carries at least as many factors of 2.
  const unsigned tz = divisor.abs().trailing_zero_bits();
  BigInt rem = a.abs().shifted_right(tz);
  const BigInt den = divisor.abs().shifted_right(tz);
  // Newton iteration for the inverse of an odd number mod 2^32.
  const std::uint32_t d0 = den.limbs_[0];
  std::uint32_t inv = d0;
  for (int i = 0; i < 5; ++i) inv *= 2u - d0 * inv;
  BigInt quotient;
  quotient.sign_ = sign;
  while (!rem.is_zero()) {
    const std::uint32_t q = rem.limbs_[0] * inv;
    quotient.limbs_.push_back(q);
    rem = (rem - den * BigInt::from_uint64(q)).shifted_right(32);
  }
  quotient.trim();
  return quotient;
}

BigInt gcd(BigInt a, BigInt b) {
  a = a.abs();
  b = b.abs();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const unsigned za = a.trailing_zero_bits();
  const unsigned zb = b.trailing_zero_bits();
  const unsigned shift = std::min(za, zb);
  a = a.shifted_right(za);
  for (;;) {
    b = b.shifted_right(b.trailing_zero_bits());
    if (a > b) std::swap(a, b);
    b -= a;
    if (b.is_zero()) return a.shifted_left(shift);
  }
}

Rational::Rational(long long num, long long den) : num_(num), den_(den) {
  normalize();
}

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void Rational::normalize() {
  if (den_.is_zero()) throw std::invalid_argument("Rational: zero denominator");
  if (den_.is_negative()) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = BigInt(1);
    return;
  }
  const BigInt g = gcd(num_, den_);
  num_ = BigInt::divide_exact(num_, g);
  den_ = BigInt::divide_exact(den_, g);
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational Rational::abs() const {
  Rational r = *this;
  r.num_ = r.num_.abs();
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_.is_zero()) throw std::domain_error("Rational: division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational Rational::pow(unsigned exponent) const {
  Rational base = *this;
  Rational result(1);
  while (exponent != 0) {
    if (exponent & 1u) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

int Rational::compare(const Rational& a, const Rational& b) {
  return BigInt::compare(a.num_ * b.den_, b.num_ * a.den_);
}

double Rational::to_double() const {
  const BigInt::Scaled n = num_.scaled();
  const BigInt::Scaled d = den_.scaled();
  return std::ldexp(n.mantissa / d.mantissa, static_cast<int>(n.exponent - d.exponent));
}

std::string Rational::to_string() const {
  if (den_ == BigInt(1)) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

Rational Rational::from_double_exact(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("Rational: non-finite double");
  if (v == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(v, &exp);  // v = mant * 2^exp, |mant| in [0.5, 1)
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));  // exact integer
  const int e = exp - 53;
  if (e >= 0) return Rational(BigInt(scaled).shifted_left(static_cast<unsigned>(e)), BigInt(1));
  return Rational(BigInt(scaled), BigInt(1).shifted_left(static_cast<unsigned>(-e)));
}

}  // namespace jmnoise
