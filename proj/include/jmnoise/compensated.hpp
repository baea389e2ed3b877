#pragma once

#ifdef __FAST_MATH__
#error "fast-math is enabled; it breaks the error-free transformations below."
#endif

#include <cmath>
#include <cstdint>

namespace jmnoise {

// Error-free transformations and a two-term compensated number type.
//
// The alternating binomial sums evaluated by the closed-form module cancel
// catastrophically in plain double (C(29,14) ~ 7.7e7 against a result of
// order 1); terms and partial sums are therefore carried as non-overlapping
// (hi, lo) pairs, giving roughly twice the working precision of S.
template <class S>
struct TwoSumResult {
  S value;
  S error;
};

template <class S>
inline TwoSumResult<S> two_sum(S a, S b) {
  const S s = a + b;
  const S bv = s - a;
  return {s, (a - (s - bv)) + (b - bv)};
}

// Requires |a| >= |b| or a == 0.
template <class S>
inline TwoSumResult<S> quick_two_sum(S a, S b) {
  const S s = a + b;
  return {s, b - (s - a)};
}

template <class S>
inline TwoSumResult<S> two_prod(S a, S b) {
  const S p = a * b;
  return {p, std::fma(a, b, -p)};
}

template <class S>
class Compensated {
 public:
  constexpr Compensated() : hi_(0), lo_(0) {}
  constexpr Compensated(S v) : hi_(v), lo_(0) {}  // NOLINT
  constexpr Compensated(S hi, S lo) : hi_(hi), lo_(lo) {}

  S hi() const { return hi_; }
  S lo() const { return lo_; }
  S value() const { return hi_ + lo_; }

  friend Compensated operator+(const Compensated& a, const Compensated& b) {
    TwoSumResult<S> s = two_sum(a.hi_, b.hi_);
    s.error += a.lo_ + b.lo_;
    const TwoSumResult<S> r = quick_two_sum(s.value, s.error);
    return {r.value, r.error};
  }
  friend Compensated operator-(const Compensated& a, const Compensated& b) {
    return a + Compensated(-b.hi_, -b.lo_);
  }
  friend Compensated operator*(const Compensated& a, const Compensated& b) {
    TwoSumResult<S> p = two_prod(a.hi_, b.hi_);
    p.error += a.hi_ * b.lo_ + a.lo_ * b.hi_;
    const TwoSumResult<S> r = quick_two_sum(p.value, p.error);
    return {r.value, r.error};
  }
  friend Compensated operator/(const Compensated& a, const Compensated& b) {
    const S q1 = a.hi_ / b.hi_;
    Compensated r = a - b * Compensated(q1);
    const S q2 = r.hi_ / b.hi_;
    r = r - b * Compensated(q2);
    const S q3 = r.hi_ / b.hi_;
    const TwoSumResult<S> s = quick_two_sum(q1, q2);
    return Compensated(s.value, s.error) + Compensated(q3);
  }
  Compensated operator-() const { return {-hi_, -lo_}; }
  Compensated& operator+=(const Compensated& b) { return *this = *this + b; }
  Compensated& operator-=(const Compensated& b) { return *this = *this - b; }
  Compensated& operator*=(const Compensated& b) { return *this = *this * b; }

  Compensated pow(unsigned exponent) const {
    Compensated base = *this;
    Compensated result(S(1));
    while (exponent != 0) {
      if (exponent & 1u) result *= base;
      base *= base;
      exponent >>= 1;
    }
    return result;
  }

 private:
  S hi_;
  S lo_;
};

using CompensatedDouble = Compensated<double>;

// Neumaier-compensated running sum; used by the Monte-Carlo accumulators
// where full pair arithmetic is unnecessary.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace jmnoise
