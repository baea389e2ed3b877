#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace jmnoise {

// Regularized lower incomplete gamma P(a, x); Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double chi_squared_cdf(double x, double dof);
// Survival function (p-value of a goodness-of-fit statistic).
double chi_squared_sf(double x, double dof);

struct ChiSquareResult {
  double statistic;
  double dof;
  double p_value;
};

// Pearson statistic of observed counts against expected probabilities.
// Zero-probability cells must carry zero counts (p-value 0 otherwise);
// they are dropped from the statistic and the degrees of freedom.
ChiSquareResult chi_square_gof(const std::vector<std::uint64_t>& counts,
                               const std::vector<double>& expected_probs);

// Two-sided one-sample Kolmogorov-Smirnov distance of sorted samples
// against a CDF.
double ks_distance(const std::vector<double>& sorted_samples,
                   const std::function<double(double)>& cdf);

// Asymptotic two-sided critical value sqrt(-ln(alpha/2) / (2 n)).
double ks_critical_value(double alpha, std::size_t n);

}  // namespace jmnoise
