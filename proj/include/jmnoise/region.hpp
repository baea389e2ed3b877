#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jmnoise/closed_form.hpp"
#include "jmnoise/types.hpp"

namespace jmnoise {

// Boundary curve of the joint-measurability region for one dimension,
// ordered by strictly increasing t. Starts at the t = 0 endpoint
// (eta = 1, p = p0) and ends with eta < 1e-6 as t -> 1.
struct BoundaryCurve {
  int d;
  std::vector<BoundarySample> samples;
};

struct MembershipVerdict {
  bool inside;
  double eta_max;  // boundary efficiency at the queried visibility
  double margin;   // eta_max - eta; inside <=> margin >= -tol::membership
};

struct MixtureResult {
  NoiseParams params;
  // Set when both efficiencies were zero with q strictly interior; the
  // visibility is then returned as 0 by convention.
  bool p_undefined;
};

// Supremum efficiency eta with (eta, p) jointly measurable. Returns 1 for
// p <= (H_d - 1)/(d - 1), the closed form d (1-p)^(d-1) for p > 1/2, and
// otherwise inverts the boundary curve by bisection over t in [1/d, 1/2]
// (the curve is constant below t = 1/d). Monotonicity of p(t) on that
// bracket is verified once per dimension; a violation throws rather than
// returning a guess.
double eta_max(Dimension d, double p);

MembershipVerdict is_jointly_measurable(Dimension d, const NoiseParams& params);

// Noise parameters of the statistical mixture of two noisified measurement
// sets: efficiency mixes linearly, visibility with efficiency weights.
MixtureResult mixture(const NoiseParams& params1, const NoiseParams& params2,
                      double q);

// Samples the boundary on a t-grid containing t = 0, every breakpoint
// 1/(m+1) for m = 1..d-1, and a near-1 endpoint with eta < 1e-6. The grid
// is built from exact rationals so float and exact-rational exports
// evaluate at identical parameter values.
BoundaryCurve export_curve(Dimension d, int n_samples,
                           EvalMode mode = EvalMode::float64);

struct NonconvexityWitness {
  BoundarySample a;
  BoundarySample b;
  double q;  // mixing weight of the straight segment (midpoint search: 0.5)
  double mid_eta;
  double mid_p;
  double excess;  // how far the midpoint lies above the boundary
};

// Searches pairs of boundary samples whose straight-segment midpoint in the
// (eta, p) plane falls outside the region by more than min_excess. Returns
// the first counterexample in scan order, or nullopt (always, for d = 2).
std::optional<NonconvexityWitness> probe_nonconvexity(Dimension d,
                                                      int grid_points = 100,
                                                      double min_excess = 1e-4);

// CSV columns t,eta,p with 17 significant digits (lossless doubles).
void write_curve_csv(const BoundaryCurve& curve, std::ostream& out);
BoundaryCurve parse_curve_csv(std::istream& in);

// JSON schema {"d": d, "samples": [{"t": ..., "eta": ..., "p": ...}]}.
std::string curve_to_json(const BoundaryCurve& curve);
BoundaryCurve curve_from_json(const std::string& text);

}  // namespace jmnoise
