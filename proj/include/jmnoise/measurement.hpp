#pragma once

#include <cstdint>
#include <vector>

#include "jmnoise/mc_oracle.hpp"
#include "jmnoise/stats.hpp"
#include "jmnoise/types.hpp"

namespace jmnoise {

// Density operator: Hermitian, PSD, unit trace.
class QuantumState {
 public:
  explicit QuantumState(Matrix rho);

  static QuantumState maximally_mixed(Dimension d);
  static QuantumState basis_state(Dimension d, int k);
  static QuantumState pure(const ComplexUnitVector& v);
  // Haar basis with eigenvalues mixed toward 1/d, so the state is full rank.
  static QuantumState random_full_rank(Dimension d, std::uint64_t seed);

  const Matrix& rho() const { return rho_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

 private:
  Matrix rho_;
};

// A d-outcome projective measurement in the basis {U|0>,...,U|d-1>} degraded
// by white noise and loss: clicks eta*p U|a><a|U^dag + eta*(1-p)/d * 1,
// no-click (1-eta) * 1. The basis convention matches the response rule
// argmax_a |<z|U|a>|^2.
struct NoisyPvm {
  Dimension d;
  Matrix basis_unitary;
  NoiseParams params;
  std::vector<Matrix> elements;  // d click elements, then the no-click element

  const Matrix& element(Outcome outcome) const {
    return elements[static_cast<std::size_t>(outcome.slot(d.value()))];
  }
};

NoisyPvm make_noisy_pvm(Dimension d, const Matrix& basis_unitary,
                        const NoiseParams& params);

// The measurement simulated by the thresholded-argmax response in the
// computational basis: A_d(t)|k><k| + B_d(t)(1-|k><k|)/(d-1) with
// B = T - A, plus (1 - d T_d(t)) * 1 for no-click. Identical (within
// tol::algebra) to make_noisy_pvm at the boundary noise parameters of t.
NoisyPvm analytic_simulated_povm(Dimension d, Threshold t);

// P(a) = tr(rho M_a) over the d+1 outcomes.
Eigen::VectorXd outcome_distribution(const NoisyPvm& pvm, const QuantumState& state);

// Draws from the continuous parent measurement on a state: outcome density
// d <z|rho|z> over the invariant measure. Realized by choosing an
// eigenvector with probability its eigenvalue, then doubling the Dirichlet
// weight of that coordinate in the eigenbasis.
class ParentOutcomeSampler {
 public:
  ParentOutcomeSampler(const QuantumState& state, std::uint64_t seed);
  static ParentOutcomeSampler for_chunk(const QuantumState& state,
                                        std::uint64_t seed,
                                        std::uint64_t chunk_index);

  ComplexUnitVector sample();

 private:
  ParentOutcomeSampler(const QuantumState& state, Xoshiro256 rng);
  Eigen::VectorXd cumulative_;  // eigenvalue CDF
  Matrix eigenbasis_;
  Xoshiro256 rng_;
};

ComplexUnitVector sample_parent_outcome(const QuantumState& state,
                                        std::uint64_t seed);

struct SimulationResult {
  std::vector<std::uint64_t> counts;  // d click outcomes, then no-click
  Eigen::VectorXd analytic;           // outcome_distribution of the noisy PVM
  double chi_square;
  double p_value;
  std::uint64_t shots;
};

// Per shot: z from the parent sampler, outcome from the thresholded-argmax
// response in basis U. The empirical counts must reproduce the analytic
// distribution of the noisy PVM at the boundary parameters of t.
SimulationResult simulate_measurement(const QuantumState& state,
                                      const Matrix& basis_unitary, Threshold t,
                                      std::uint64_t n_shots, std::uint64_t seed,
                                      int threads = 0);

// QR of a complex Ginibre matrix with the phase convention fixed.
Matrix haar_random_unitary(Dimension d, std::uint64_t seed);

}  // namespace jmnoise
