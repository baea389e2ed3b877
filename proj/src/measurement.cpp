#include "jmnoise/measurement.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "jmnoise/closed_form.hpp"
#include "jmnoise/constants.hpp"
#include "jmnoise/parallel.hpp"

namespace jmnoise {

QuantumState::QuantumState(Matrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 2)
    throw std::invalid_argument("QuantumState: need a square matrix, d >= 2");
  if (!is_hermitian(rho_, tol::hermitian))
    throw std::invalid_argument("QuantumState: not Hermitian");
  if (std::abs(rho_.trace().real() - 1.0) > tol::trace_one ||
      std::abs(rho_.trace().imag()) > tol::trace_one)
    throw std::invalid_argument("QuantumState: trace != 1");
  if (!is_psd(rho_, tol::psd))
    throw std::invalid_argument("QuantumState: not positive semidefinite");
}

QuantumState QuantumState::maximally_mixed(Dimension d) {
  const int n = d.value();
  return QuantumState(Matrix::Identity(n, n) / static_cast<double>(n));
}

QuantumState QuantumState::basis_state(Dimension d, int k) {
  const int n = d.value();
  if (k < 0 || k >= n) throw std::invalid_argument("basis_state: index out of range");
  Matrix rho = Matrix::Zero(n, n);
  rho(k, k) = 1.0;
  return QuantumState(std::move(rho));
}

QuantumState QuantumState::pure(const ComplexUnitVector& v) {
  return QuantumState(v.amplitudes() * v.amplitudes().adjoint());
}

QuantumState QuantumState::random_full_rank(Dimension d, std::uint64_t seed) {
  const int n = d.value();
  Xoshiro256 rng(seed ^ 0xfeedface12345678ULL);
  Eigen::VectorXd eigenvalues(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    eigenvalues[i] = -std::log(rng.next_double_positive());
    total += eigenvalues[i];
  }
  // Blend toward maximally mixed so the smallest eigenvalue stays bounded.
  eigenvalues = 0.9 * eigenvalues / total +
                Eigen::VectorXd::Constant(n, 0.1 / static_cast<double>(n));
  const Matrix basis = haar_random_unitary(d, rng.next_u64());
  Matrix rho = basis * eigenvalues.asDiagonal().toDenseMatrix().cast<Complex>() *
               basis.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  return QuantumState(std::move(rho));
}

NoisyPvm make_noisy_pvm(Dimension d, const Matrix& basis_unitary,
                        const NoiseParams& params) {
  const int n = d.value();
  if (basis_unitary.rows() != n || basis_unitary.cols() != n)
    throw std::invalid_argument("make_noisy_pvm: basis dimension mismatch");
  if (!is_unitary(basis_unitary, tol::unitary))
    throw std::invalid_argument("make_noisy_pvm: basis is not unitary");

  NoisyPvm pvm{d, basis_unitary, params, {}};
  pvm.elements.reserve(static_cast<std::size_t>(n) + 1);
  const Matrix white_noise = params.eta * (1.0 - params.p) / n * Matrix::Identity(n, n);
  // Measured basis states are the columns U|a>, the same convention the
  // thresholded-argmax response uses (argmax_a |<z|U|a>|^2).
  for (int a = 0; a < n; ++a) {
    const Vector basis_vector = basis_unitary.col(a);
    pvm.elements.push_back(params.eta * params.p * (basis_vector * basis_vector.adjoint()) +
                           white_noise);
  }
  pvm.elements.push_back((1.0 - params.eta) * Matrix::Identity(n, n));
  return pvm;
}

NoisyPvm analytic_simulated_povm(Dimension d, Threshold t) {
  const int n = d.value();
  const BoundarySample boundary = boundary_point(d, t);
  const double total = eval_T(d, t);
  const double aligned = eval_A(d, t);
  const double rest = (total - aligned) / (n - 1);

  NoisyPvm pvm{d, Matrix::Identity(n, n), NoiseParams(boundary.eta, boundary.p), {}};
  pvm.elements.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) {
    Matrix element = rest * Matrix::Identity(n, n);
    element(k, k) = aligned;
    pvm.elements.push_back(std::move(element));
  }
  // Completeness: sum_k N_k = (A + B) * 1, so the no-click element carries
  // the factor 1 - (A + B) = 1 - eta.
  pvm.elements.push_back((1.0 - total) * Matrix::Identity(n, n));
  return pvm;
}

Eigen::VectorXd outcome_distribution(const NoisyPvm& pvm, const QuantumState& state) {
  const int n = pvm.d.value();
  if (state.dim() != n)
    throw std::invalid_argument("outcome_distribution: dimension mismatch");
  Eigen::VectorXd probs(n + 1);
  for (int a = 0; a <= n; ++a) {
    const Complex trace = (state.rho() * pvm.elements[static_cast<std::size_t>(a)]).trace();
    probs[a] = std::max(0.0, trace.real());
  }
  if (std::abs(probs.sum() - 1.0) > tol::algebra)
    throw std::runtime_error("outcome_distribution: probabilities do not sum to 1");
  return probs;
}

ParentOutcomeSampler::ParentOutcomeSampler(const QuantumState& state, std::uint64_t seed)
    : ParentOutcomeSampler(state, Xoshiro256(seed)) {}

ParentOutcomeSampler ParentOutcomeSampler::for_chunk(const QuantumState& state,
                                                     std::uint64_t seed,
                                                     std::uint64_t chunk_index) {
  return ParentOutcomeSampler(state, Xoshiro256::for_chunk(seed, chunk_index));
}

ParentOutcomeSampler::ParentOutcomeSampler(const QuantumState& state, Xoshiro256 rng)
    : rng_(rng) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(state.rho());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("ParentOutcomeSampler: eigendecomposition failed");
  eigenbasis_ = solver.eigenvectors();
  Eigen::VectorXd weights = solver.eigenvalues().cwiseMax(0.0);
  weights /= weights.sum();
  cumulative_.resize(weights.size());
  double acc = 0.0;
  for (int i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    cumulative_[i] = acc;
  }
  cumulative_[weights.size() - 1] = 1.0;
}

ComplexUnitVector ParentOutcomeSampler::sample() {
  const int n = static_cast<int>(cumulative_.size());
  const double pick = rng_.next_double();
  int favored = 0;
  while (favored < n - 1 && pick >= cumulative_[favored]) ++favored;

  // Dirichlet(1,...,2,...,1) moduli (extra exponential on the favored
  // coordinate), uniform phases, then rotate from the eigenbasis back.
  Vector in_eigenbasis(n);
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    double weight = -std::log(rng_.next_double_positive());
    if (k == favored) weight += -std::log(rng_.next_double_positive());
    const double phase = 6.283185307179586477 * rng_.next_double();
    in_eigenbasis[k] = std::sqrt(weight) * Complex(std::cos(phase), std::sin(phase));
    total += weight;
  }
  in_eigenbasis /= std::sqrt(total);
  return ComplexUnitVector::normalized(eigenbasis_ * in_eigenbasis);
}

ComplexUnitVector sample_parent_outcome(const QuantumState& state, std::uint64_t seed) {
  ParentOutcomeSampler sampler(state, seed);
  return sampler.sample();
}

SimulationResult simulate_measurement(const QuantumState& state,
                                      const Matrix& basis_unitary, Threshold t,
                                      std::uint64_t n_shots, std::uint64_t seed,
                                      int threads) {
  if (n_shots == 0) throw std::invalid_argument("simulate_measurement: zero shots");
  const Dimension d(state.dim());
  const int n = d.value();
  if (basis_unitary.rows() != n || basis_unitary.cols() != n)
    throw std::invalid_argument("simulate_measurement: basis dimension mismatch");

  const BoundarySample boundary = boundary_point(d, t);
  const NoisyPvm pvm =
      make_noisy_pvm(d, basis_unitary, NoiseParams(boundary.eta, boundary.p));
  const Eigen::VectorXd analytic = outcome_distribution(pvm, state);

  using Counts = std::vector<std::uint64_t>;
  auto partials = map_chunks<Counts>(
      n_shots,
      [&](const ChunkRange& range, Counts& out) {
        out.assign(static_cast<std::size_t>(n) + 1, 0);
        ParentOutcomeSampler sampler =
            ParentOutcomeSampler::for_chunk(state, seed, range.index);
        for (std::uint64_t i = 0; i < range.count; ++i) {
          const ComplexUnitVector z = sampler.sample();
          const Outcome outcome = response(z, t, basis_unitary);
          ++out[static_cast<std::size_t>(outcome.slot(n))];
        }
      },
      threads);

  SimulationResult result;
  result.counts.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Counts& partial : partials) {
    for (std::size_t a = 0; a < result.counts.size(); ++a)
      result.counts[a] += partial[a];
  }
  result.analytic = analytic;
  result.shots = n_shots;
  const ChiSquareResult gof = chi_square_gof(
      result.counts, std::vector<double>(analytic.data(), analytic.data() + n + 1));
  result.chi_square = gof.statistic;
  result.p_value = gof.p_value;
  return result;
}

Matrix haar_random_unitary(Dimension d, std::uint64_t seed) {
  const int n = d.value();
  Xoshiro256 rng(seed ^ 0x9d2c5680aa123456ULL);
  Matrix ginibre(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) ginibre(i, j) = rng.next_complex_gaussian();
  }
  const Eigen::HouseholderQR<Matrix> qr(ginibre);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase gauge so the distribution is exactly Haar.
  for (int j = 0; j < n; ++j) {
    const Complex diag = r(j, j);
    const double mag = std::abs(diag);
    q.col(j) *= mag == 0.0 ? Complex(1.0, 0.0) : diag / mag;
  }
  return q;
}

}  // namespace jmnoise
