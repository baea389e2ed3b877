#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "jmnoise/closed_form.hpp"
#include "jmnoise/mc_oracle.hpp"
#include "jmnoise/stats.hpp"

using namespace jmnoise;

namespace {
const Dimension d2(2);
const Dimension d3(3);

double pull(const McEstimate& estimate, double reference) {
  if (estimate.std_error == 0.0) return estimate.mean == reference ? 0.0 : 1e18;
  return std::abs(estimate.mean - reference) / estimate.std_error;
}
}  // namespace

TEST_CASE("sampler reproducibility and stream independence from threading") {
  SphereSampler a(d3, 42);
  SphereSampler b(d3, 42);
  for (int i = 0; i < 10; ++i) {
    const ComplexUnitVector za = a.sample();
    const ComplexUnitVector zb = b.sample();
    CHECK(za.amplitudes() == zb.amplitudes());
  }
  CHECK(a.count() == 10);

  const McEstimate serial = estimate_T(d3, Threshold(0.4), 100000, 7, /*threads=*/1);
  const McEstimate parallel = estimate_T(d3, Threshold(0.4), 100000, 7, /*threads=*/2);
  CHECK(serial.mean == parallel.mean);  // bit-identical
  CHECK(serial.std_error == parallel.std_error);

  const McEstimate reseeded = estimate_T(d3, Threshold(0.4), 100000, 8, 1);
  CHECK(reseeded.mean != serial.mean);
}

TEST_CASE("uniform sampling reproduces the invariant measure") {
  const int d = 3;
  const std::uint64_t n = 200000;
  SphereSampler sampler(Dimension(d), 5);
  Matrix sum = Matrix::Zero(d, d);
  double first_component = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const ComplexUnitVector z = sampler.sample();
    sum += z.amplitudes() * z.amplitudes().adjoint();
    first_component += z.modulus_squared(0);
  }
  // d * E[|z><z|] = identity entrywise within 5 sigma (sigma <~ d/sqrt(n)).
  const Matrix mean = static_cast<double>(d) * sum / static_cast<double>(n);
  const double sigma = static_cast<double>(d) / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      CHECK(std::abs(mean(i, j).real() - expected) <= 5.0 * sigma);
      CHECK(std::abs(mean(i, j).imag()) <= 5.0 * sigma);
    }
  }
  // E[|z_0|^2] = 1/d; the component variance on the simplex is
  // (d-1)/(d^2(d+1)) <= 1/n-scaled sigma below.
  const double comp_sigma =
      std::sqrt((d - 1.0) / (d * d * (d + 1.0)) / static_cast<double>(n));
  CHECK(std::abs(first_component / static_cast<double>(n) - 1.0 / d) <=
        5.0 * comp_sigma);
}

TEST_CASE("moduli of the uniform measure are Beta(1, d-1)") {
  for (int d : {2, 4}) {
    const std::uint64_t n = 50000;
    SphereSampler sampler(Dimension(d), 17);
    std::vector<double> moduli(d);
    std::vector<double> first;
    first.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      sampler.sample_moduli_squared(moduli);
      first.push_back(moduli[0]);
    }
    std::sort(first.begin(), first.end());
    const double dist = ks_distance(first, [d](double x) {
      return 1.0 - std::pow(1.0 - x, d - 1);
    });
    CHECK(dist <= ks_critical_value(1e-3, n));
  }
}

TEST_CASE("response rule on hand-checked vectors") {
  const Matrix eye2 = Matrix::Identity(2, 2);
  const Matrix eye4 = Matrix::Identity(4, 4);

  Vector e0 = Vector::Zero(2);
  e0[0] = 1.0;
  CHECK(response(ComplexUnitVector(e0), Threshold(0.5), eye2) == Outcome::click(0));

  const Vector uniform4 = Vector::Constant(4, Complex(0.5, 0.0));
  CHECK(response(ComplexUnitVector(uniform4), Threshold(0.5), eye4) ==
        Outcome::no_click());

  Vector tilted(2);
  tilted << std::sqrt(0.6), std::sqrt(0.4);
  CHECK(response(ComplexUnitVector(tilted), Threshold(0.5), eye2) ==
        Outcome::click(0));

  // Basis change: measuring e0 in the swap basis clicks outcome 1.
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(response(ComplexUnitVector(e0), Threshold(0.5), swap) == Outcome::click(1));
}

TEST_CASE("response partitions the sphere") {
  SphereSampler sampler(d3, 23);
  const Matrix eye = Matrix::Identity(3, 3);
  for (int i = 0; i < 500; ++i) {
    const ComplexUnitVector z = sampler.sample();
    for (double t : {0.0, 0.3, 0.8}) {
      // Exactly one response function fires: the outcome is unique and
      // consistent with the moduli rule.
      const Outcome outcome = response(z, Threshold(t), eye);
      int hits = 0;
      for (int k = 0; k < 3; ++k) {
        const double mk = z.modulus_squared(k);
        bool is_max = mk >= t;
        for (int j = 0; j < 3; ++j) is_max = is_max && mk >= z.modulus_squared(j);
        if (is_max) {
          ++hits;
          break;  // lowest-index winner
        }
      }
      CHECK((outcome.is_click() ? 1 : 0) + (hits == 0 ? 1 : 0) == 1);
    }
  }
}

TEST_CASE("estimate_T and estimate_A converge to the closed forms") {
  const std::uint64_t n = 200000;
  const McEstimate total = estimate_T(d2, Threshold(0.75), n, 3);
  CHECK(pull(total, 0.5) <= 5.0);

  const McEstimate at_zero = estimate_T(d3, Threshold(0.0), n, 4);
  CHECK(pull(at_zero, 1.0) <= 5.0);

  const McEstimate at_one = estimate_T(d3, Threshold(1.0), n, 5);
  CHECK(at_one.mean == 0.0);
  CHECK(at_one.std_error == 0.0);

  const McEstimate aligned_zero = estimate_A(d2, Threshold(0.0), n, 6);
  CHECK(pull(aligned_zero, 0.75) <= 5.0);

  const McEstimate aligned_mid = estimate_A(d2, Threshold(0.75), n, 7);
  CHECK(pull(aligned_mid, 0.4375) <= 5.0);

  const McEstimate aligned_cubic = estimate_A(d3, Threshold(0.0), n, 8);
  CHECK(pull(aligned_cubic, 11.0 / 18.0) <= 5.0);

  CHECK_THROWS_AS(estimate_T(d2, Threshold(0.5), 10, 1), std::invalid_argument);
}

TEST_CASE("estimates track the closed forms across a t-grid") {
  for (int d : {2, 3}) {
    const Dimension dim(d);
    for (int i = 1; i <= 9; ++i) {
      const double t = 0.1 * i;
      const McEstimate total = estimate_T(dim, Threshold(t), 100000, 100 + i);
      const McEstimate aligned = estimate_A(dim, Threshold(t), 100000, 200 + i);
      CHECK(pull(total, eval_T(dim, Threshold(t))) <= 5.0);
      CHECK(pull(aligned, eval_A(dim, Threshold(t))) <= 5.0);
    }
  }
}

TEST_CASE("simulated-POVM reconstruction matches the analytic structure") {
  const std::uint64_t n = 100000;
  for (double t : {0.5, 0.75}) {
    const auto estimates = reconstruct_simulated_povm(d2, Threshold(t), n, 11);
    REQUIRE(estimates.size() == 3);
    const double total = eval_T(d2, Threshold(t));
    const double aligned = eval_A(d2, Threshold(t));
    const double rest = total - aligned;

    const auto& first = estimates[0];
    CHECK(std::abs(first.mean(0, 0).real() - aligned) <=
          5.0 * first.std_error_re(0, 0));
    CHECK(std::abs(first.mean(1, 1).real() - rest) <= 5.0 * first.std_error_re(1, 1));
    CHECK(std::abs(first.mean(0, 1).real()) <= 5.0 * first.std_error_re(0, 1));
    CHECK(std::abs(first.mean(0, 1).imag()) <= 5.0 * first.std_error_im(0, 1));

    // No-click element: (1 - T) * identity.
    const auto& last = estimates[2];
    CHECK(std::abs(last.mean(0, 0).real() - (1.0 - total)) <=
          5.0 * std::max(last.std_error_re(0, 0), 1e-12));
    CHECK(std::abs(last.mean(0, 1).real()) <= 5.0 * std::max(last.std_error_re(0, 1), 1e-12));

    // Completeness: the estimates sum to the identity within 5 sigma.
    Matrix sum = Matrix::Zero(2, 2);
    for (const auto& e : estimates) sum += e.mean;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double sigma_sq = 0.0;
        for (const auto& e : estimates)
          sigma_sq += e.std_error_re(i, j) * e.std_error_re(i, j);
        const double expected = i == j ? 1.0 : 0.0;
        // Combined std error of the total estimator is bounded by the
        // root-sum-square of the parts.
        CHECK(std::abs(sum(i, j).real() - expected) <=
              5.0 * std::max(std::sqrt(sigma_sq), 1e-12));
      }
    }
  }
  CHECK_THROWS_AS(reconstruct_simulated_povm(d2, Threshold(0.5), 100, 1),
                  std::invalid_argument);
}

TEST_CASE("identity perturbation shows no visibility gap") {
  ResponsePerturbation identity;
  const PerturbationTrialResult trial =
      run_perturbation_trial(d2, Threshold(0.6), identity, 100000, 31);
  CHECK_FALSE(trial.discarded);
  CHECK(std::abs(trial.visibility_gap) <= 5.0 * trial.gap_std_error);
  CHECK(std::abs(trial.efficiency_estimate - eval_T(d2, Threshold(0.6))) <=
        5.0 * trial.efficiency_std_error);
}

TEST_CASE("misassigning cap perturbation strictly loses visibility") {
  const ResponsePerturbation cap = make_cap_relabel(d2, 0.1, 77);
  const PerturbationTrialResult trial =
      run_perturbation_trial(d2, Threshold(0.6), cap, 100000, 32);
  CHECK_FALSE(trial.discarded);
  CHECK(trial.visibility_gap < -5.0 * trial.gap_std_error);
}

TEST_CASE("threshold jitter calibrates and stays below the reference") {
  ResponsePerturbation jitter;
  jitter.kind = PerturbationKind::threshold_jitter;
  jitter.threshold_up = 0.65;
  jitter.threshold_down = 0.6;
  const PerturbationTrialResult trial =
      run_perturbation_trial(d2, Threshold(0.6), jitter, 200000, 33);
  CHECK_FALSE(trial.discarded);
  CHECK(std::abs(trial.efficiency_estimate - eval_T(d2, Threshold(0.6))) <=
        5.0 * trial.efficiency_std_error + 3e-3);
  CHECK(trial.visibility_gap <= 5.0 * trial.gap_std_error);
}

TEST_CASE("optimality probe keeps every gap within the gate") {
  const OptimalityProbeResult probe =
      optimality_probe(d3, Threshold(0.4), 50000, 12, 41);
  CHECK(probe.reference_visibility ==
        doctest::Approx(boundary_point(d3, Threshold(0.4)).p));
  for (const PerturbationTrialResult& trial : probe.trials) {
    if (trial.discarded) continue;
    CHECK(trial.visibility_gap <= 5.0 * trial.gap_std_error);
  }
  CHECK(probe.worst_gap <= 5.0 * probe.worst_gap_std_error);
  CHECK(probe.discarded_count <= 4);
  CHECK_THROWS_AS(optimality_probe(d2, Threshold(0.5), 50000, 5, 1),
                  std::invalid_argument);
}
