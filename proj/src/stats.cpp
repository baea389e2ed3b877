#include "jmnoise/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jmnoise {

namespace {

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x < 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_squared_cdf(double x, double dof) {
  if (dof == 0.0) return x >= 0.0 ? 1.0 : std::numeric_limits<double>::quiet_NaN();
  return gamma_p(0.5 * dof, 0.5 * x);
}

double chi_squared_sf(double x, double dof) {
  if (dof == 0.0) return x > 0.0 ? 0.0 : 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& counts,
                               const std::vector<double>& expected_probs) {
  if (counts.size() != expected_probs.size())
    throw std::invalid_argument("chi_square_gof: size mismatch");
  std::uint64_t total = 0;
  for (const auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("chi_square_gof: no observations");

  double statistic = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expected = expected_probs[i] * static_cast<double>(total);
    if (expected <= 0.0) {
      if (counts[i] != 0) return {std::numeric_limits<double>::infinity(),
                                  static_cast<double>(counts.size() - 1), 0.0};
      continue;  // impossible cell, correctly unobserved
    }
    const double diff = static_cast<double>(counts[i]) - expected;
    statistic += diff * diff / expected;
    ++cells;
  }
  const double dof = std::max(cells - 1, 1);
  return {statistic, dof, chi_squared_sf(statistic, dof)};
}

double ks_distance(const std::vector<double>& sorted_samples,
                   const std::function<double(double)>& cdf) {
  const std::size_t n = sorted_samples.size();
  if (n == 0) throw std::invalid_argument("ks_distance: empty sample");
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted_samples[i]);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
    const double lo = f - static_cast<double>(i) / static_cast<double>(n);
    worst = std::max({worst, hi, lo});
  }
  return worst;
}

double ks_critical_value(double alpha, std::size_t n) {
  return std::sqrt(-std::log(0.5 * alpha) / (2.0 * static_cast<double>(n)));
}

}  // namespace jmnoise
