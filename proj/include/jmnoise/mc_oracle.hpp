#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jmnoise/rng.hpp"
#include "jmnoise/types.hpp"

namespace jmnoise {

// Reproducible stream of unit vectors distributed by the unitarily
// invariant measure (d i.i.d. complex Gaussians, normalized). Identical
// (dimension, seed) pairs give identical streams.
class SphereSampler {
 public:
  SphereSampler(Dimension d, std::uint64_t seed)
      : d_(d.value()), rng_(seed), count_(0) {}

  // Stream for one chunk of a larger run; see parallel.hpp.
  static SphereSampler for_chunk(Dimension d, std::uint64_t seed,
                                 std::uint64_t chunk_index) {
    return SphereSampler(d.value(), Xoshiro256::for_chunk(seed, chunk_index));
  }

  ComplexUnitVector sample();
  // Moduli-squared only; cheaper path for the scalar estimators.
  void sample_moduli_squared(std::vector<double>& out);

  int dim() const { return d_; }
  std::uint64_t count() const { return count_; }

 private:
  SphereSampler(int d, Xoshiro256 rng) : d_(d), rng_(rng), count_(0) {}
  int d_;
  Xoshiro256 rng_;
  std::uint64_t count_;
};

ComplexUnitVector sample_uniform(SphereSampler& sampler);

// Thresholded-argmax response: the click k maximizing |<z|U|k>|^2 when that
// maximum reaches t, otherwise no-click. Ties break to the lowest index
// (they carry measure zero).
Outcome response(const ComplexUnitVector& z, Threshold t, const Matrix& basis_unitary);

struct McEstimate {
  double mean;
  double std_error;
  std::uint64_t n_samples;
};

// Monte-Carlo mean of d * Theta_0^t(z); converges to eval_T(d, t).
McEstimate estimate_T(Dimension d, Threshold t, std::uint64_t n_samples,
                      std::uint64_t seed, int threads = 0);

// Monte-Carlo mean of d * Theta_0^t(z) |z_0|^2; converges to eval_A(d, t).
McEstimate estimate_A(Dimension d, Threshold t, std::uint64_t n_samples,
                      std::uint64_t seed, int threads = 0);

struct McMatrixEstimate {
  Matrix mean;
  Eigen::MatrixXd std_error_re;
  Eigen::MatrixXd std_error_im;
  std::uint64_t n_samples;
};

// Entrywise Monte-Carlo reconstruction of the d+1 simulated measurement
// operators d * Theta_a^t(z) |z><z| (clicks 0..d-1, then no-click).
std::vector<McMatrixEstimate> reconstruct_simulated_povm(Dimension d, Threshold t,
                                                         std::uint64_t n_samples,
                                                         std::uint64_t seed,
                                                         int threads = 0);

// --- optimality probe -------------------------------------------------

enum class PerturbationKind {
  identity,
  cap_relabel,        // permute click labels on a random Fubini-Study cap
  top_two_randomize,  // sometimes emit the runner-up component instead
  threshold_jitter,   // raise threshold on a half-region, compensate elsewhere
};

// A response family with the same no-click measure as the reference rule
// (exactly for the first three kinds, by calibration for the jitter kind).
struct ResponsePerturbation {
  PerturbationKind kind = PerturbationKind::identity;
  // cap_relabel
  Vector cap_axis;
  double cap_level = 2.0;  // |<w|z>|^2 >= level triggers the relabel
  int relabel_shift = 1;
  // top_two_randomize
  double ratio_threshold = 2.0;  // runner-up/max >= threshold may swap
  double swap_probability = 0.0;
  // threshold_jitter (thresholds on the half-region and its complement)
  double threshold_up = 0.0;
  double threshold_down = 0.0;
};

ResponsePerturbation make_cap_relabel(Dimension d, double cap_measure,
                                      std::uint64_t seed);
ResponsePerturbation make_top_two_randomize(double ratio_threshold,
                                            double swap_probability);

// Outcome of the perturbed family at z. aux_uniform supplies the response
// randomness for the randomized kinds.
Outcome perturbed_response(const std::vector<double>& moduli_squared,
                           double threshold, const ComplexUnitVector& z,
                           const ResponsePerturbation& perturbation,
                           double aux_uniform);

struct PerturbationTrialResult {
  PerturbationKind kind;
  bool discarded;               // efficiency calibration failed
  double visibility;            // MC estimate of the family's visibility
  double visibility_gap;        // visibility - closed-form boundary visibility
  double gap_std_error;
  double efficiency_estimate;
  double efficiency_std_error;
};

// Estimates the visibility of one perturbed family and compares it with the
// closed-form boundary visibility at the same efficiency.
PerturbationTrialResult run_perturbation_trial(Dimension d, Threshold t,
                                               const ResponsePerturbation& perturbation,
                                               std::uint64_t n_samples,
                                               std::uint64_t seed, int threads = 0);

struct OptimalityProbeResult {
  double reference_visibility;  // closed-form boundary visibility at t
  double worst_gap;             // max visibility_gap over kept trials
  double worst_gap_std_error;
  std::vector<PerturbationTrialResult> trials;
  int discarded_count;
};

// Runs n_trials random efficiency-preserving perturbations (>= 10) and
// reports the worst visibility excess over the reference construction.
// The reference rule is provably optimal over all response families with
// the same no-click measure; this probe samples a finite family and is
// statistical evidence for that bound, not a proof.
OptimalityProbeResult optimality_probe(Dimension d, Threshold t,
                                       std::uint64_t n_samples, int n_trials,
                                       std::uint64_t seed, int threads = 0);

}  // namespace jmnoise
