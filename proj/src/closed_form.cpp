#include "jmnoise/closed_form.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "jmnoise/compensated.hpp"

namespace jmnoise {

namespace {

constexpr int kMaxFloatDim = 128;

// Row d-1 of Pascal's triangle as exact 128-bit integers.
std::vector<unsigned __int128> binomial_row(int d) {
  if (d > kMaxFloatDim)
    throw std::domain_error("eval: d > 128 not supported by the integer binomial table");
  std::vector<unsigned __int128> row(static_cast<std::size_t>(d), 0);
  row[0] = 1;
  for (int n = 1; n < d; ++n) {
    for (int k = n; k > 0; --k) row[k] += row[k - 1];
  }
  return row;
}

template <class S>
Compensated<S> from_uint128(unsigned __int128 v) {
  // 32-bit chunks keep every intermediate product exact.
  Compensated<S> acc(S(0));
  const Compensated<S> base(S(4294967296.0));  // 2^32
  for (int shift = 96; shift >= 0; shift -= 32) {
    const auto chunk = static_cast<std::uint32_t>((v >> shift) & 0xffffffffu);
    acc = acc * base + Compensated<S>(S(chunk));
  }
  return acc;
}

template <class S>
struct SumPair {
  Compensated<S> total;    // T_d(t)
  Compensated<S> aligned;  // A_d(t)
};

// Shared kernel for both boundary functions: terms and accumulation in
// compensated-pair arithmetic; binomials exact integers.
template <class S>
SumPair<S> eval_sums(int d, S t) {
  const auto binom = binomial_row(d);
  Compensated<S> total(S(0));
  Compensated<S> aligned(S(0));
  const Compensated<S> tc(t);
  for (int m = 0; m < d; ++m) {
    // Inclusion condition t(m+1) < 1 from the derivation; the term vanishes
    // at equality, so floor-edge behavior is continuous by construction.
    // At t = 0 the condition holds for all m and the sum runs to d-1.
    if (!(t * static_cast<S>(m + 1) < S(1))) break;
    const Compensated<S> y = tc * Compensated<S>(S(m + 1)) - Compensated<S>(S(1));
    const Compensated<S> ypow = y.pow(static_cast<unsigned>(d - 1));
    const S sign = ((d - 1 - m) % 2 == 0) ? S(1) : S(-1);
    const Compensated<S> coeff = from_uint128<S>(binom[static_cast<std::size_t>(m)]) *
                                 Compensated<S>(sign);
    const Compensated<S> base = coeff * ypow;
    total += base / Compensated<S>(S(m + 1));
    const Compensated<S> first_moment =
        Compensated<S>(S(d - 1)) * tc * Compensated<S>(S(m + 1)) + Compensated<S>(S(1));
    aligned += base * first_moment / Compensated<S>(S((m + 1) * (m + 1)));
  }
  return {total * Compensated<S>(S(d)), aligned};
}

struct RationalSumPair {
  Rational total;
  Rational aligned;
};

RationalSumPair eval_sums_exact(int d, const Rational& t) {
  const auto binom = binomial_row(d);
  Rational total(0);
  Rational aligned(0);
  const Rational one(1);
  for (int m = 0; m < d; ++m) {
    if (!(t * Rational(m + 1) < one)) break;
    const Rational y = t * Rational(m + 1) - one;
    const Rational ypow = y.pow(static_cast<unsigned>(d - 1));
    const auto b = binom[static_cast<std::size_t>(m)];
    BigInt coeff = BigInt::from_uint64(static_cast<std::uint64_t>(b >> 64))
                       .shifted_left(64) +
                   BigInt::from_uint64(static_cast<std::uint64_t>(b));
    if ((d - 1 - m) % 2 != 0) coeff = -coeff;
    const Rational base = Rational(coeff, BigInt(1)) * ypow;
    total += base / Rational(m + 1);
    aligned += base * (Rational(d - 1) * t * Rational(m + 1) + one) /
               Rational(static_cast<long long>(m + 1) * (m + 1));
  }
  return {total * Rational(d), aligned};
}

void check_unit_interval(const Rational& t) {
  if (t.is_negative() || t > Rational(1))
    throw std::invalid_argument("eval: t outside [0,1]");
}

}  // namespace

double eval_T(Dimension d, Threshold t, EvalMode mode) {
  switch (mode) {
    case EvalMode::float64:
      return eval_sums<double>(d.value(), t.value()).total.value();
    case EvalMode::extended:
      return static_cast<double>(
          eval_sums<long double>(d.value(), static_cast<long double>(t.value()))
              .total.value());
    case EvalMode::exact_rational:
      return eval_T_exact(d, Rational::from_double_exact(t.value())).to_double();
  }
  throw std::logic_error("eval_T: unknown mode");
}

double eval_A(Dimension d, Threshold t, EvalMode mode) {
  switch (mode) {
    case EvalMode::float64:
      return eval_sums<double>(d.value(), t.value()).aligned.value();
    case EvalMode::extended:
      return static_cast<double>(
          eval_sums<long double>(d.value(), static_cast<long double>(t.value()))
              .aligned.value());
    case EvalMode::exact_rational:
      return eval_A_exact(d, Rational::from_double_exact(t.value())).to_double();
  }
  throw std::logic_error("eval_A: unknown mode");
}

Rational eval_T_exact(Dimension d, const Rational& t) {
  check_unit_interval(t);
  return eval_sums_exact(d.value(), t).total;
}

Rational eval_A_exact(Dimension d, const Rational& t) {
  check_unit_interval(t);
  return eval_sums_exact(d.value(), t).aligned;
}

Rational harmonic(int d) {
  if (d < 1) throw std::invalid_argument("harmonic: d must be >= 1");
  Rational h(0);
  for (int k = 1; k <= d; ++k) h += Rational(1, k);
  return h;
}

BoundarySample boundary_point(Dimension d, Threshold t, EvalMode mode) {
  if (t.value() == 1.0)
    throw std::domain_error("boundary_point: degenerate endpoint t = 1 (eta = 0, p undefined)");
  if (mode == EvalMode::exact_rational) {
    const ExactBoundarySample e =
        boundary_point_exact(d, Rational::from_double_exact(t.value()));
    return {t.value(), e.eta.to_double(), e.p.to_double()};
  }
  const double eta = eval_T(d, t, mode);
  const double aligned = eval_A(d, t, mode);
  const int dim = d.value();
  return {t.value(), eta, (dim * aligned - eta) / ((dim - 1) * eta)};
}

ExactBoundarySample boundary_point_exact(Dimension d, const Rational& t) {
  check_unit_interval(t);
  if (t == Rational(1))
    throw std::domain_error("boundary_point: degenerate endpoint t = 1 (eta = 0, p undefined)");
  const RationalSumPair sums = eval_sums_exact(d.value(), t);
  const Rational dim(d.value());
  const Rational p =
      (dim * sums.aligned - sums.total) / (Rational(d.value() - 1) * sums.total);
  return {t, sums.total, p};
}

double simple_regime_eta(Dimension d, double p) {
  if (!(p > 0.5 && p <= 1.0))
    throw std::invalid_argument("simple_regime_eta: requires 1/2 < p <= 1");
  // 1 - p is exact for p in [1/2, 1] (Sterbenz), so this matches the m = 0
  // term of eval_T bit-for-bit up to final rounding.
  return (CompensatedDouble(static_cast<double>(d.value())) *
          CompensatedDouble(1.0 - p).pow(static_cast<unsigned>(d.value() - 1)))
      .value();
}

double povm_bound_eta(Dimension d, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("povm_bound_eta: p outside [0,1]");
  return CompensatedDouble(1.0 - p).pow(static_cast<unsigned>(d.value())).value();
}

Rational endpoint_visibility(Dimension d) {
  return (harmonic(d.value()) - Rational(1)) / Rational(d.value() - 1);
}

}  // namespace jmnoise
