#include <doctest.h>

#include <cmath>
#include <sstream>

#include "jmnoise/region.hpp"
#include "jmnoise/rng.hpp"

using namespace jmnoise;

namespace {
const Dimension d2(2);
const Dimension d3(3);
}  // namespace

TEST_CASE("eta_max across the three regimes") {
  CHECK(eta_max(d2, 0.4) == 1.0);   // below the endpoint visibility
  CHECK(eta_max(d2, 0.5) == 1.0);   // exactly at p0(2)
  CHECK(eta_max(d2, 0.75) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(eta_max(d3, 0.6) == doctest::Approx(0.48).epsilon(1e-14));
  CHECK(eta_max(d3, 1.0) == 0.0);
  CHECK_THROWS_AS(eta_max(d2, 1.2), std::invalid_argument);
}

TEST_CASE("eta_max bisection values (frozen from an exact-arithmetic solve)") {
  CHECK(eta_max(d3, 0.45) == doctest::Approx(0.903836717690617).epsilon(1e-9));
  CHECK(eta_max(Dimension(5), 0.4) == doctest::Approx(0.645138032410999).epsilon(1e-9));
  CHECK(eta_max(Dimension(10), 0.3) == doctest::Approx(0.400059994926163).epsilon(1e-9));
}

TEST_CASE("eta_max agrees with the simple regime and is monotone") {
  for (int d : {2, 3, 5, 10}) {
    const Dimension dim(d);
    for (int i = 1; i < 50; ++i) {
      const double p = 0.5 + 0.01 * i;
      CHECK(std::abs(eta_max(dim, p) - simple_regime_eta(dim, p)) <= 1e-10);
    }
    double prev = eta_max(dim, 0.0);
    for (int i = 1; i <= 100; ++i) {
      const double cur = eta_max(dim, i / 100.0);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("dimension ordering at fixed visibility") {
  const int dims[] = {2, 3, 5, 10, 30};
  for (double p : {0.55, 0.65, 0.75, 0.85, 0.95}) {
    for (std::size_t i = 0; i + 1 < std::size(dims); ++i) {
      CHECK(eta_max(Dimension(dims[i]), p) > eta_max(Dimension(dims[i + 1]), p));
    }
  }
}

TEST_CASE("membership verdicts") {
  const MembershipVerdict on_boundary = is_jointly_measurable(d2, NoiseParams(0.8, 0.6));
  CHECK(on_boundary.inside);
  CHECK(std::abs(on_boundary.margin) <= 1e-12);

  const MembershipVerdict outside = is_jointly_measurable(d2, NoiseParams(0.9, 0.6));
  CHECK_FALSE(outside.inside);
  CHECK(outside.margin == doctest::Approx(-0.1).epsilon(1e-12));

  for (int d : {2, 3, 7}) {
    for (double p : {0.0, 0.3, 0.99}) {
      CHECK(is_jointly_measurable(Dimension(d), NoiseParams(0.0, p)).inside);
    }
  }
  // Verdict invariant: inside <=> margin >= -tol.
  for (double eta : {0.0, 0.3, 0.7999, 0.81, 1.0}) {
    const MembershipVerdict v = is_jointly_measurable(d2, NoiseParams(eta, 0.6));
    CHECK(v.inside == (v.margin >= -tol::membership));
  }
}

TEST_CASE("mixture map") {
  const NoiseParams a(0.8, 0.6);
  const NoiseParams b(0.3, 0.2);
  const MixtureResult endpoint = mixture(a, b, 1.0);
  CHECK(endpoint.params.eta == 0.8);
  CHECK(endpoint.params.p == 0.6);
  CHECK_FALSE(endpoint.p_undefined);

  const MixtureResult half = mixture(NoiseParams(1.0, 0.0), NoiseParams(0.0, 1.0), 0.5);
  CHECK(half.params.eta == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(half.params.p == doctest::Approx(0.0).epsilon(1e-15));

  const MixtureResult same = mixture(a, a, 0.3);
  CHECK(same.params.eta == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(same.params.p == doctest::Approx(0.6).epsilon(1e-15));

  const MixtureResult dead = mixture(NoiseParams(0.0, 0.3), NoiseParams(0.0, 0.9), 0.5);
  CHECK(dead.p_undefined);
  CHECK(dead.params.eta == 0.0);
  CHECK(dead.params.p == 0.0);

  CHECK_THROWS_AS(mixture(a, b, 1.5), std::invalid_argument);
}

TEST_CASE("mixture closure on random interior pairs") {
  Xoshiro256 rng(2024);
  for (int d : {2, 3, 5}) {
    const Dimension dim(d);
    for (int trial = 0; trial < 200; ++trial) {
      auto interior_point = [&]() {
        const double p = rng.next_double();
        const double eta = 0.999 * rng.next_double() * eta_max(dim, p);
        return NoiseParams(eta, p);
      };
      const NoiseParams a = interior_point();
      const NoiseParams b = interior_point();
      const double q = rng.next_double();
      const MixtureResult mixed = mixture(a, b, q);
      CHECK(is_jointly_measurable(dim, mixed.params).inside);
    }
  }
}

TEST_CASE("export_curve structure") {
  const BoundaryCurve curve = export_curve(d2, 50);
  REQUIRE(curve.samples.size() >= 50);
  CHECK(curve.d == 2);
  CHECK(curve.samples.front().t == 0.0);
  CHECK(curve.samples.front().eta == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(curve.samples.front().p == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(curve.samples.back().eta < 1e-6);

  for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i) {
    CHECK(curve.samples[i].t < curve.samples[i + 1].t);          // strictly increasing
    CHECK(curve.samples[i].eta >= curve.samples[i + 1].eta - 1e-12);  // eta non-increasing
  }

  // Breakpoint 1/2 is on the grid for d = 2.
  bool has_half = false;
  for (const BoundarySample& s : curve.samples) has_half |= (s.t == 0.5);
  CHECK(has_half);

  CHECK_THROWS_AS(export_curve(d2, 1), std::invalid_argument);
}

TEST_CASE("export_curve hits the boundary-sample invariant") {
  for (int d : {2, 3, 10}) {
    const Dimension dim(d);
    const BoundaryCurve curve = export_curve(dim, 40);
    for (const BoundarySample& s : curve.samples) {
      CHECK(std::abs(s.eta - eval_T(dim, Threshold(s.t))) <= 1e-10);
      const double expected_p = (d * eval_A(dim, Threshold(s.t)) - s.eta) /
                                ((d - 1) * s.eta);
      CHECK(std::abs(s.p - expected_p) <= 1e-10);
    }
  }
}

TEST_CASE("exact and float curves agree") {
  const BoundaryCurve fast = export_curve(d3, 25);
  const BoundaryCurve exact = export_curve(d3, 25, EvalMode::exact_rational);
  REQUIRE(fast.samples.size() == exact.samples.size());
  for (std::size_t i = 0; i < fast.samples.size(); ++i) {
    CHECK(std::abs(fast.samples[i].eta - exact.samples[i].eta) < 1e-8);
    CHECK(std::abs(fast.samples[i].p - exact.samples[i].p) < 1e-8);
  }
}

TEST_CASE("non-convexity probe") {
  CHECK_FALSE(probe_nonconvexity(d2, 40).has_value());
  const auto witness = probe_nonconvexity(d3, 40);
  REQUIRE(witness.has_value());
  CHECK(witness->excess > 1e-4);
  CHECK(witness->q == 0.5);
  // The witness certifies itself: the midpoint really is outside.
  const MembershipVerdict verdict =
      is_jointly_measurable(d3, NoiseParams(witness->mid_eta, witness->mid_p));
  CHECK_FALSE(verdict.inside);
}

TEST_CASE("CSV round-trip") {
  const BoundaryCurve curve = export_curve(d3, 20);
  std::stringstream buffer;
  write_curve_csv(curve, buffer);
  std::string first_line;
  std::getline(buffer, first_line);
  CHECK(first_line == "t,eta,p");
  buffer.seekg(0);
  const BoundaryCurve parsed = parse_curve_csv(buffer);
  REQUIRE(parsed.samples.size() == curve.samples.size());
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    CHECK(parsed.samples[i].t == curve.samples[i].t);  // 17 digits round-trip
    CHECK(parsed.samples[i].eta == curve.samples[i].eta);
    CHECK(parsed.samples[i].p == curve.samples[i].p);
  }
}

TEST_CASE("JSON round-trip") {
  const BoundaryCurve curve = export_curve(d2, 10);
  const BoundaryCurve parsed = curve_from_json(curve_to_json(curve));
  CHECK(parsed.d == curve.d);
  REQUIRE(parsed.samples.size() == curve.samples.size());
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    CHECK(parsed.samples[i].t == curve.samples[i].t);
    CHECK(parsed.samples[i].eta == curve.samples[i].eta);
    CHECK(parsed.samples[i].p == curve.samples[i].p);
  }
}

TEST_CASE("povm bound sits strictly below the boundary") {
  for (int d : {2, 3, 5, 10}) {
    const Dimension dim(d);
    for (int i = 1; i < 100; ++i) {
      const double p = i / 100.0;
      CHECK(povm_bound_eta(dim, p) < eta_max(dim, p));
    }
    CHECK(povm_bound_eta(dim, 0.0) <= eta_max(dim, 0.0));
  }
}
