#include "jmnoise/types.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace jmnoise {

ComplexUnitVector::ComplexUnitVector(Vector amplitudes) : z_(std::move(amplitudes)) {
  if (z_.size() == 0)
    throw std::invalid_argument("ComplexUnitVector: empty amplitude vector");
  const double norm2 = z_.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol::unit_norm)
    throw std::invalid_argument("ComplexUnitVector: not unit norm");
}

ComplexUnitVector ComplexUnitVector::normalized(Vector amplitudes) {
  if (amplitudes.size() == 0)
    throw std::invalid_argument("ComplexUnitVector: empty amplitude vector");
  const double norm = amplitudes.norm();
  if (norm == 0.0)
    throw std::invalid_argument("ComplexUnitVector: cannot normalize zero vector");
  amplitudes /= norm;
  return ComplexUnitVector(std::move(amplitudes), AlreadyNormalized{});
}

bool is_hermitian(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

bool is_psd(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  // Eigenvalues of the Hermitian part; robust to rounding-scale asymmetry.
  const Matrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tolerance;
}

bool is_unitary(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  const Matrix delta =
      m * m.adjoint() - Matrix::Identity(m.rows(), m.cols());
  return delta.cwiseAbs().maxCoeff() <= tolerance;
}

bool validate_povm(const std::vector<Matrix>& elements) {
  if (elements.empty()) throw std::invalid_argument("validate_povm: no elements");
  const Eigen::Index d = elements.front().rows();
  for (const Matrix& e : elements) {
    if (e.rows() != d || e.cols() != d)
      throw std::invalid_argument("validate_povm: dimension mismatch among elements");
  }
  Matrix sum = Matrix::Zero(d, d);
  for (const Matrix& e : elements) {
    if (!is_psd(e, tol::psd)) return false;
    sum += e;
  }
  return (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol::algebra;
}

}  // namespace jmnoise
