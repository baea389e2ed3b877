#include "jmnoise/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "jmnoise/closed_form.hpp"
#include "jmnoise/compensated.hpp"
#include "jmnoise/constants.hpp"
#include "jmnoise/parallel.hpp"

namespace jmnoise {

namespace {

int argmax_lowest(const std::vector<double>& values) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(values.size()); ++k) {
    if (values[k] > values[best]) best = k;
  }
  return best;
}

int runner_up_index(const std::vector<double>& values, int max_index) {
  int best = max_index == 0 ? 1 : 0;
  for (int k = 0; k < static_cast<int>(values.size()); ++k) {
    if (k == max_index) continue;
    if (values[k] > values[best]) best = k;
  }
  return best;
}

McEstimate finalize(double s1, double s2, std::uint64_t n) {
  const double nd = static_cast<double>(n);
  const double mean = s1 / nd;
  double variance = s2 / nd - mean * mean;
  if (variance < 0.0) variance = 0.0;
  if (n > 1) variance *= nd / (nd - 1.0);
  return {mean, std::sqrt(variance / nd), n};
}

struct ScalarPartial {
  double s1 = 0.0;
  double s2 = 0.0;
};

McEstimate estimate_scalar(Dimension d, Threshold t, std::uint64_t n_samples,
                           std::uint64_t seed, int threads, bool first_moment) {
  if (n_samples < 1000)
    throw std::invalid_argument("estimate: need at least 1000 samples");
  const int dim = d.value();
  const double threshold = t.value();
  const double dim_factor = static_cast<double>(dim);

  auto partials = map_chunks<ScalarPartial>(
      n_samples,
      [&](const ChunkRange& range, ScalarPartial& out) {
        SphereSampler sampler = SphereSampler::for_chunk(d, seed, range.index);
        std::vector<double> moduli(static_cast<std::size_t>(dim));
        NeumaierSum s1;
        NeumaierSum s2;
        for (std::uint64_t i = 0; i < range.count; ++i) {
          sampler.sample_moduli_squared(moduli);
          bool wins = moduli[0] >= threshold;
          for (int k = 1; wins && k < dim; ++k) wins = moduli[0] >= moduli[k];
          if (!wins) continue;
          const double x = first_moment ? dim_factor * moduli[0] : dim_factor;
          s1.add(x);
          s2.add(x * x);
        }
        out.s1 = s1.value();
        out.s2 = s2.value();
      },
      threads);

  NeumaierSum s1;
  NeumaierSum s2;
  for (const ScalarPartial& p : partials) {
    s1.add(p.s1);
    s2.add(p.s2);
  }
  return finalize(s1.value(), s2.value(), n_samples);
}

}  // namespace

ComplexUnitVector SphereSampler::sample() {
  Vector g(d_);
  for (int k = 0; k < d_; ++k) g[k] = rng_.next_complex_gaussian();
  ++count_;
  return ComplexUnitVector::normalized(std::move(g));
}

void SphereSampler::sample_moduli_squared(std::vector<double>& out) {
  // |gaussian|^2 is Exp(1); drawing the exponentials directly skips the
  // phases and gives the same Dirichlet(1,...,1) law after normalization.
  out.resize(static_cast<std::size_t>(d_));
  double total = 0.0;
  for (int k = 0; k < d_; ++k) {
    out[static_cast<std::size_t>(k)] = -std::log(rng_.next_double_positive());
    total += out[static_cast<std::size_t>(k)];
  }
  for (double& s : out) s /= total;
  ++count_;
}

ComplexUnitVector sample_uniform(SphereSampler& sampler) { return sampler.sample(); }

Outcome response(const ComplexUnitVector& z, Threshold t, const Matrix& basis_unitary) {
  const Vector overlaps = basis_unitary.adjoint() * z.amplitudes();
  int best = 0;
  double best_sq = std::norm(overlaps[0]);
  for (int k = 1; k < overlaps.size(); ++k) {
    const double sq = std::norm(overlaps[k]);
    if (sq > best_sq) {
      best = k;
      best_sq = sq;
    }
  }
  return best_sq >= t.value() ? Outcome::click(best) : Outcome::no_click();
}

McEstimate estimate_T(Dimension d, Threshold t, std::uint64_t n_samples,
                      std::uint64_t seed, int threads) {
  return estimate_scalar(d, t, n_samples, seed, threads, /*first_moment=*/false);
}

McEstimate estimate_A(Dimension d, Threshold t, std::uint64_t n_samples,
                      std::uint64_t seed, int threads) {
  return estimate_scalar(d, t, n_samples, seed, threads, /*first_moment=*/true);
}

namespace {

struct MatrixPartial {
  std::vector<Matrix> sum;
  std::vector<Eigen::MatrixXd> sq_re;
  std::vector<Eigen::MatrixXd> sq_im;
};

}  // namespace

std::vector<McMatrixEstimate> reconstruct_simulated_povm(Dimension d, Threshold t,
                                                         std::uint64_t n_samples,
                                                         std::uint64_t seed,
                                                         int threads) {
  if (n_samples < 10000)
    throw std::invalid_argument("reconstruct_simulated_povm: need at least 1e4 samples");
  const int dim = d.value();
  const int slots = dim + 1;
  const double dim_factor = static_cast<double>(dim);

  auto partials = map_chunks<MatrixPartial>(
      n_samples,
      [&](const ChunkRange& range, MatrixPartial& out) {
        out.sum.assign(slots, Matrix::Zero(dim, dim));
        out.sq_re.assign(slots, Eigen::MatrixXd::Zero(dim, dim));
        out.sq_im.assign(slots, Eigen::MatrixXd::Zero(dim, dim));
        SphereSampler sampler = SphereSampler::for_chunk(d, seed, range.index);
        std::vector<double> moduli(static_cast<std::size_t>(dim));
        Matrix projector(dim, dim);
        for (std::uint64_t i = 0; i < range.count; ++i) {
          const ComplexUnitVector z = sampler.sample();
          for (int k = 0; k < dim; ++k) moduli[k] = z.modulus_squared(k);
          const int best = argmax_lowest(moduli);
          const int slot = moduli[best] >= t.value() ? best : dim;
          projector.noalias() =
              dim_factor * (z.amplitudes() * z.amplitudes().adjoint());
          out.sum[slot] += projector;
          out.sq_re[slot].array() += projector.real().array().square();
          out.sq_im[slot].array() += projector.imag().array().square();
        }
      },
      threads);

  std::vector<McMatrixEstimate> result;
  result.reserve(slots);
  const double n = static_cast<double>(n_samples);
  for (int slot = 0; slot < slots; ++slot) {
    Matrix sum = Matrix::Zero(dim, dim);
    Eigen::MatrixXd sq_re = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd sq_im = Eigen::MatrixXd::Zero(dim, dim);
    for (const MatrixPartial& p : partials) {
      sum += p.sum[slot];
      sq_re += p.sq_re[slot];
      sq_im += p.sq_im[slot];
    }
    McMatrixEstimate estimate;
    estimate.mean = sum / n;
    const double bessel = n > 1 ? n / (n - 1.0) : 1.0;
    estimate.std_error_re =
        ((sq_re / n - estimate.mean.real().cwiseAbs2()).cwiseMax(0.0) * bessel / n)
            .cwiseSqrt();
    estimate.std_error_im =
        ((sq_im / n - estimate.mean.imag().cwiseAbs2()).cwiseMax(0.0) * bessel / n)
            .cwiseSqrt();
    estimate.n_samples = n_samples;
    result.push_back(std::move(estimate));
  }
  return result;
}

// --- optimality probe -------------------------------------------------

ResponsePerturbation make_cap_relabel(Dimension d, double cap_measure,
                                      std::uint64_t seed) {
  if (!(cap_measure > 0.0 && cap_measure < 1.0))
    throw std::invalid_argument("make_cap_relabel: cap measure outside (0,1)");
  SphereSampler axis_sampler(d, seed);
  ResponsePerturbation pert;
  pert.kind = PerturbationKind::cap_relabel;
  pert.cap_axis = axis_sampler.sample().amplitudes();
  // P(|<w|z>|^2 >= c) = (1-c)^(d-1) under the invariant measure.
  pert.cap_level = 1.0 - std::pow(cap_measure, 1.0 / (d.value() - 1));
  pert.relabel_shift = 1;
  return pert;
}

ResponsePerturbation make_top_two_randomize(double ratio_threshold,
                                            double swap_probability) {
  ResponsePerturbation pert;
  pert.kind = PerturbationKind::top_two_randomize;
  pert.ratio_threshold = ratio_threshold;
  pert.swap_probability = swap_probability;
  return pert;
}

Outcome perturbed_response(const std::vector<double>& moduli_squared,
                           double threshold, const ComplexUnitVector& z,
                           const ResponsePerturbation& perturbation,
                           double aux_uniform) {
  const int dim = static_cast<int>(moduli_squared.size());
  const int best = argmax_lowest(moduli_squared);
  const double best_sq = moduli_squared[best];

  if (perturbation.kind == PerturbationKind::threshold_jitter) {
    const bool raised_region = moduli_squared[0] >= moduli_squared[dim - 1];
    const double local_threshold =
        raised_region ? perturbation.threshold_up : perturbation.threshold_down;
    return best_sq >= local_threshold ? Outcome::click(best) : Outcome::no_click();
  }

  if (best_sq < threshold) return Outcome::no_click();
  switch (perturbation.kind) {
    case PerturbationKind::identity:
      return Outcome::click(best);
    case PerturbationKind::cap_relabel: {
      const Complex overlap = perturbation.cap_axis.adjoint() * z.amplitudes();
      if (std::norm(overlap) >= perturbation.cap_level)
        return Outcome::click((best + perturbation.relabel_shift) % dim);
      return Outcome::click(best);
    }
    case PerturbationKind::top_two_randomize: {
      const int second = runner_up_index(moduli_squared, best);
      if (moduli_squared[second] >= perturbation.ratio_threshold * best_sq &&
          aux_uniform < perturbation.swap_probability)
        return Outcome::click(second);
      return Outcome::click(best);
    }
    default:
      throw std::logic_error("perturbed_response: unknown kind");
  }
}

namespace {

struct CalibrationPartial {
  std::uint64_t raised_clicks = 0;
  std::vector<double> complement_maxima;
};

// Finds the compensating threshold for the jitter family: the complement
// threshold is the order statistic of complement maxima that restores the
// reference click measure on a dedicated calibration stream.
bool calibrate_jitter(Dimension d, double eta_ref, std::uint64_t n_cal,
                      std::uint64_t seed, int threads, ResponsePerturbation& pert) {
  const int dim = d.value();
  auto partials = map_chunks<CalibrationPartial>(
      n_cal,
      [&](const ChunkRange& range, CalibrationPartial& out) {
        SphereSampler sampler = SphereSampler::for_chunk(d, seed, range.index);
        std::vector<double> moduli(static_cast<std::size_t>(dim));
        for (std::uint64_t i = 0; i < range.count; ++i) {
          sampler.sample_moduli_squared(moduli);
          const double best_sq = moduli[argmax_lowest(moduli)];
          if (moduli[0] >= moduli[dim - 1]) {
            if (best_sq >= pert.threshold_up) ++out.raised_clicks;
          } else {
            out.complement_maxima.push_back(best_sq);
          }
        }
      },
      threads);

  std::uint64_t raised_clicks = 0;
  std::vector<double> maxima;
  for (const CalibrationPartial& p : partials) {
    raised_clicks += p.raised_clicks;
    maxima.insert(maxima.end(), p.complement_maxima.begin(),
                  p.complement_maxima.end());
  }
  const auto target =
      static_cast<long long>(std::llround(eta_ref * static_cast<double>(n_cal)));
  const long long needed = target - static_cast<long long>(raised_clicks);
  if (needed < 0 || needed > static_cast<long long>(maxima.size())) return false;
  if (needed == 0) {
    pert.threshold_down = 2.0;  // unreachable: complement never clicks
    return true;
  }
  std::nth_element(maxima.begin(), maxima.begin() + (needed - 1), maxima.end(),
                   std::greater<double>());
  pert.threshold_down = maxima[static_cast<std::size_t>(needed - 1)];
  return true;
}

struct TrialPartial {
  double clicks = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};

}  // namespace

PerturbationTrialResult run_perturbation_trial(Dimension d, Threshold t,
                                               const ResponsePerturbation& perturbation,
                                               std::uint64_t n_samples,
                                               std::uint64_t seed, int threads) {
  if (n_samples < 1000)
    throw std::invalid_argument("run_perturbation_trial: need at least 1000 samples");
  const int dim = d.value();
  const double eta_ref = eval_T(d, t);
  const double p_ref = boundary_point(d, t).p;

  PerturbationTrialResult result{};
  result.kind = perturbation.kind;

  ResponsePerturbation pert = perturbation;
  double calibration_variance = 0.0;
  if (pert.kind == PerturbationKind::threshold_jitter) {
    const std::uint64_t n_cal = n_samples;
    const std::uint64_t cal_seed = seed ^ 0x5ca1ab1edeadbeefULL;
    if (!calibrate_jitter(d, eta_ref, n_cal, cal_seed, threads, pert)) {
      result.discarded = true;
      return result;
    }
    calibration_variance = eta_ref * (1.0 - eta_ref) / static_cast<double>(n_cal);
  }

  const bool needs_amplitudes = pert.kind == PerturbationKind::cap_relabel;
  const ComplexUnitVector no_amplitudes(Vector::Unit(dim, 0));
  auto partials = map_chunks<TrialPartial>(
      n_samples,
      [&](const ChunkRange& range, TrialPartial& out) {
        SphereSampler sampler = SphereSampler::for_chunk(d, seed, range.index);
        Xoshiro256 aux = Xoshiro256::for_chunk(seed ^ 0xa5a5a5a55a5a5a5aULL, range.index);
        std::vector<double> moduli(static_cast<std::size_t>(dim));
        NeumaierSum clicks;
        NeumaierSum v1;
        NeumaierSum v2;
        for (std::uint64_t i = 0; i < range.count; ++i) {
          Outcome outcome = Outcome::no_click();
          if (needs_amplitudes) {
            const ComplexUnitVector z = sampler.sample();
            for (int k = 0; k < dim; ++k) moduli[k] = z.modulus_squared(k);
            outcome = perturbed_response(moduli, t.value(), z, pert, aux.next_double());
          } else {
            sampler.sample_moduli_squared(moduli);
            outcome = perturbed_response(moduli, t.value(), no_amplitudes, pert,
                                         aux.next_double());
          }
          if (!outcome.is_click()) continue;
          clicks.add(1.0);
          const double v = dim * moduli[static_cast<std::size_t>(outcome.index())];
          v1.add(v);
          v2.add(v * v);
        }
        out.clicks = clicks.value();
        out.v1 = v1.value();
        out.v2 = v2.value();
      },
      threads);

  double clicks = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  for (const TrialPartial& p : partials) {
    clicks += p.clicks;
    v1 += p.v1;
    v2 += p.v2;
  }
  const double n = static_cast<double>(n_samples);
  const double eta_hat = clicks / n;
  const double eta_se = std::sqrt(std::max(0.0, eta_hat * (1.0 - eta_hat)) / n);
  result.efficiency_estimate = eta_hat;
  result.efficiency_std_error = eta_se;

  if (pert.kind == PerturbationKind::threshold_jitter) {
    const double gate = 3.0 * std::sqrt(eta_se * eta_se + calibration_variance);
    if (std::abs(eta_hat - eta_ref) > gate) {
      result.discarded = true;
      return result;
    }
  }
  if (eta_hat == 0.0) {
    result.discarded = true;
    return result;
  }

  // Ratio estimator of the first-moment functional against the click rate;
  // delta-method standard error (v and click indicator share samples).
  const double v_mean = v1 / n;
  const double ratio = v_mean / eta_hat;
  const double var_v = std::max(0.0, v2 / n - v_mean * v_mean);
  const double var_c = std::max(0.0, eta_hat - eta_hat * eta_hat);
  const double cov_vc = v_mean - v_mean * eta_hat;
  const double var_ratio =
      (var_v + ratio * ratio * var_c - 2.0 * ratio * cov_vc) /
      (eta_hat * eta_hat * n);

  result.visibility = (ratio - 1.0) / (dim - 1);
  result.visibility_gap = result.visibility - p_ref;
  result.gap_std_error = std::sqrt(std::max(0.0, var_ratio)) / (dim - 1);
  return result;
}

OptimalityProbeResult optimality_probe(Dimension d, Threshold t,
                                       std::uint64_t n_samples, int n_trials,
                                       std::uint64_t seed, int threads) {
  if (n_trials < 10)
    throw std::invalid_argument("optimality_probe: need at least 10 trials");
  if (t.value() >= 1.0)
    throw std::invalid_argument("optimality_probe: t must be < 1");

  OptimalityProbeResult result{};
  result.reference_visibility = boundary_point(d, t).p;
  result.worst_gap = -std::numeric_limits<double>::infinity();
  result.worst_gap_std_error = 0.0;
  result.discarded_count = 0;

  for (int trial = 0; trial < n_trials; ++trial) {
    std::uint64_t sm = seed ^ (0xabcdef1234567890ULL + 2654435761ULL * trial);
    Xoshiro256 rng(splitmix64(sm));
    ResponsePerturbation pert;
    switch (trial % 3) {
      case 0: {
        const double measure = 0.05 + 0.20 * rng.next_double();
        pert = make_cap_relabel(d, measure, rng.next_u64());
        pert.relabel_shift =
            1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(
                                     std::max(1, d.value() - 1)));
        break;
      }
      case 1:
        pert = make_top_two_randomize(0.60 + 0.35 * rng.next_double(),
                                      0.20 + 0.80 * rng.next_double());
        break;
      default: {
        pert.kind = PerturbationKind::threshold_jitter;
        const double room = std::min(0.02, 0.25 * (1.0 - t.value()));
        pert.threshold_up = t.value() + room * (0.25 + 0.75 * rng.next_double());
        pert.threshold_down = t.value();
        break;
      }
    }
    PerturbationTrialResult trial_result =
        run_perturbation_trial(d, t, pert, n_samples, rng.next_u64(), threads);
    if (trial_result.discarded) {
      ++result.discarded_count;
    } else if (trial_result.visibility_gap > result.worst_gap) {
      result.worst_gap = trial_result.visibility_gap;
      result.worst_gap_std_error = trial_result.gap_std_error;
    }
    result.trials.push_back(std::move(trial_result));
  }
  return result;
}

}  // namespace jmnoise
