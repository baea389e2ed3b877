#include "jmnoise/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "jmnoise/constants.hpp"

namespace jmnoise {

namespace {

double boundary_visibility(Dimension d, double t) {
  return boundary_point(d, Threshold(t)).p;
}

// p(t) is constant below t = 1/d (the threshold never fires there) and must
// be monotone on [1/d, 1/2] for the bisection to be sound. No proof of
// this is known to us, so it is verified per dimension; a violation aborts
// rather than guessing. Exact arithmetic shows strict increase, but in
// float the curve saturates flat just above 1/d for large d
// (T = 1 - O((t-1/d)^(d-1)) underflows), so the certified property is:
// non-decreasing everywhere, increasing overall. Bisection then converges
// to the left edge of any flat level set, where the efficiency is maximal.
void verify_visibility_monotone(Dimension d) {
  static std::mutex mutex;
  static std::set<int> verified;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (verified.count(d.value()) != 0) return;
  }
  const double lo = 1.0 / d.value();
  const double hi = 0.5;
  constexpr int kGridIntervals = 256;
  constexpr double kNoiseFloor = 1e-14;
  const double first = boundary_visibility(d, lo);
  double prev = first;
  for (int i = 1; i <= kGridIntervals; ++i) {
    const double t = lo + (hi - lo) * i / kGridIntervals;
    const double cur = boundary_visibility(d, t);
    if (cur < prev - kNoiseFloor) {
      throw std::runtime_error(
          "eta_max: boundary visibility decreases on [1/d, 1/2] for d = " +
          std::to_string(d.value()) + "; refusing to invert the curve");
    }
    prev = std::max(prev, cur);
  }
  if (!(prev > first)) {
    throw std::runtime_error(
        "eta_max: boundary visibility is flat on [1/d, 1/2] for d = " +
        std::to_string(d.value()) + "; refusing to invert the curve");
  }
  std::lock_guard<std::mutex> lock(mutex);
  verified.insert(d.value());
}

}  // namespace

double eta_max(Dimension d, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("eta_max: p outside [0,1]");
  const double p0 = endpoint_visibility(d).to_double();
  if (p <= p0) return 1.0;  // the region is down-closed below the endpoint
  if (p > 0.5) return simple_regime_eta(d, p);
  verify_visibility_monotone(d);
  double lo = 1.0 / d.value();
  double hi = 0.5;
  while (hi - lo > tol::bisection_dt) {
    const double mid = 0.5 * (lo + hi);
    if (boundary_visibility(d, mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return eval_T(d, Threshold(0.5 * (lo + hi)));
}

MembershipVerdict is_jointly_measurable(Dimension d, const NoiseParams& params) {
  const double bound = eta_max(d, params.p);
  const double margin = bound - params.eta;
  return {margin >= -tol::membership, bound, margin};
}

MixtureResult mixture(const NoiseParams& params1, const NoiseParams& params2,
                      double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("mixture: q outside [0,1]");
  if (q == 1.0) return {params1, false};
  if (q == 0.0) return {params2, false};
  const double eta = q * params1.eta + (1.0 - q) * params2.eta;
  if (eta == 0.0) return {NoiseParams(0.0, 0.0), true};
  const double p =
      (q * params1.eta * params1.p + (1.0 - q) * params2.eta * params2.p) / eta;
  // Guard against rounding pushing the weighted visibility out of range.
  return {NoiseParams(eta, std::clamp(p, 0.0, 1.0)), false};
}

BoundaryCurve export_curve(Dimension d, int n_samples, EvalMode mode) {
  if (n_samples < 2)
    throw std::invalid_argument("export_curve: need at least 2 samples");
  const int dim = d.value();

  // Near-1 endpoint 1 - 1/e_div with d (1/e_div)^(d-1) < 1e-6, exactly;
  // at least 0.99 so the grid reaches toward t = 1 in every dimension.
  long long e_div =
      static_cast<long long>(std::ceil(std::pow(dim * 1e6, 1.0 / (dim - 1))));
  if (e_div < 100) e_div = 100;
  while (Rational(dim) * Rational(1, e_div).pow(static_cast<unsigned>(dim - 1)) >=
         Rational(1, 1000000)) {
    ++e_div;
  }
  const Rational t_last(e_div - 1, e_div);

  std::vector<Rational> grid;
  for (int k = 0; k < n_samples; ++k) {
    grid.push_back(t_last * Rational(k, n_samples - 1));
  }
  for (int m = 1; m < dim; ++m) grid.push_back(Rational(1, m + 1));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  BoundaryCurve curve{dim, {}};
  curve.samples.reserve(grid.size());
  for (const Rational& t : grid) {
    if (mode == EvalMode::exact_rational) {
      const ExactBoundarySample e = boundary_point_exact(d, t);
      curve.samples.push_back({t.to_double(), e.eta.to_double(), e.p.to_double()});
    } else {
      curve.samples.push_back(boundary_point(d, Threshold(t.to_double()), mode));
    }
  }
  return curve;
}

std::optional<NonconvexityWitness> probe_nonconvexity(Dimension d,
                                                      int grid_points,
                                                      double min_excess) {
  const BoundaryCurve curve = export_curve(d, grid_points);
  const auto& s = curve.samples;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double mid_eta = 0.5 * (s[i].eta + s[j].eta);
      const double mid_p = 0.5 * (s[i].p + s[j].p);
      const MembershipVerdict verdict =
          is_jointly_measurable(d, NoiseParams(mid_eta, mid_p));
      if (!verdict.inside && -verdict.margin > min_excess) {
        return NonconvexityWitness{s[i], s[j], 0.5, mid_eta, mid_p, -verdict.margin};
      }
    }
  }
  return std::nullopt;
}

void write_curve_csv(const BoundaryCurve& curve, std::ostream& out) {
  out << "t,eta,p\n";
  char line[128];
  for (const BoundarySample& s : curve.samples) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", s.t, s.eta, s.p);
    out << line;
  }
}

BoundaryCurve parse_curve_csv(std::istream& in) {
  BoundaryCurve curve{0, {}};
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,eta,p", 0) != 0)
    throw std::runtime_error("parse_curve_csv: missing t,eta,p header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    BoundarySample s{};
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &s.t, &s.eta, &s.p) != 3)
      throw std::runtime_error("parse_curve_csv: malformed row: " + line);
    curve.samples.push_back(s);
  }
  return curve;
}

std::string curve_to_json(const BoundaryCurve& curve) {
  nlohmann::json samples = nlohmann::json::array();
  for (const BoundarySample& s : curve.samples) {
    samples.push_back({{"t", s.t}, {"eta", s.eta}, {"p", s.p}});
  }
  return nlohmann::json{{"d", curve.d}, {"samples", samples}}.dump();
}

BoundaryCurve curve_from_json(const std::string& text) {
  const nlohmann::json parsed = nlohmann::json::parse(text);
  BoundaryCurve curve{parsed.at("d").get<int>(), {}};
  for (const auto& item : parsed.at("samples")) {
    curve.samples.push_back({item.at("t").get<double>(),
                             item.at("eta").get<double>(),
                             item.at("p").get<double>()});
  }
  return curve;
}

}  // namespace jmnoise
