#pragma once

#include "jmnoise/rational.hpp"
#include "jmnoise/types.hpp"

namespace jmnoise {

// Numerical-stability ledger for the boundary functions. float64 and
// extended both run a compensated-pair kernel (see compensated.hpp);
// exact_rational is the ground truth.
enum class EvalMode { float64, extended, exact_rational };

// Total click weight T_d(t) of the thresholded-argmax simulation: the
// alternating binomial sum d * sum_m C(d-1,m) (-1)^(d-1-m) (t(m+1)-1)^(d-1)/(m+1)
// over m with t(m+1) < 1 (all of 0..d-1 at t = 0). Result in [0, 1].
//
// In exact_rational mode the double t is interpreted as the exact binary
// rational it represents; use eval_T_exact for arbitrary rationals.
// Float kernels require d <= 128 (binomials held as exact 128-bit integers).
double eval_T(Dimension d, Threshold t, EvalMode mode = EvalMode::float64);

// Aligned first-moment weight A_d(t); satisfies 0 <= A_d(t) <= T_d(t),
// with A_d(0) = H_d / d.
double eval_A(Dimension d, Threshold t, EvalMode mode = EvalMode::float64);

Rational eval_T_exact(Dimension d, const Rational& t);
Rational eval_A_exact(Dimension d, const Rational& t);

// Exact harmonic number H_d = sum_{k=1}^d 1/k.
Rational harmonic(int d);

// Boundary point (t, eta, p) with eta = T_d(t) and
// p = (d A_d(t) - T_d(t)) / ((d-1) T_d(t)). Throws on the degenerate
// endpoint t = 1 where eta = 0 and p is undefined.
BoundarySample boundary_point(Dimension d, Threshold t,
                              EvalMode mode = EvalMode::float64);

struct ExactBoundarySample {
  Rational t;
  Rational eta;
  Rational p;
};
ExactBoundarySample boundary_point_exact(Dimension d, const Rational& t);

// High-visibility boundary efficiency d (1-p)^(d-1); valid for p in (1/2, 1],
// where it coincides with eval_T(d, t = p).
double simple_regime_eta(Dimension d, double p);

// The sufficient-only all-POVM compatibility bound (1-p)^d. Comparison
// curve; always below the boundary efficiency where both are defined.
double povm_bound_eta(Dimension d, double p);

// Visibility of the unit-efficiency boundary endpoint, (H_d - 1)/(d - 1).
Rational endpoint_visibility(Dimension d);

}  // namespace jmnoise
