#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "jmnoise/constants.hpp"

namespace jmnoise {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Hilbert-space dimension. d = 1 has no incompatibility and is rejected.
class Dimension {
 public:
  explicit Dimension(int d) : d_(d) {
    if (d < 2) throw std::invalid_argument("Dimension: d must be >= 2");
  }
  int value() const { return d_; }
  friend bool operator==(Dimension a, Dimension b) { return a.d_ == b.d_; }

 private:
  int d_;
};

// Efficiency (probability the detector clicks at all) and visibility
// (probability it acts as the ideal measurement rather than white noise).
struct NoiseParams {
  double eta;
  double p;

  NoiseParams(double eta_, double p_) : eta(eta_), p(p_) {
    if (!(eta >= 0.0 && eta <= 1.0))
      throw std::invalid_argument("NoiseParams: eta outside [0,1]");
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("NoiseParams: p outside [0,1]");
  }
};

// Parameter of the response-function family and of the boundary curve.
class Threshold {
 public:
  explicit Threshold(double t) : t_(t) {
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("Threshold: t outside [0,1]");
  }
  double value() const { return t_; }

 private:
  double t_;
};

// Unit-norm vector of d complex amplitudes.
class ComplexUnitVector {
 public:
  // Requires the argument to already be normalized (within tol::unit_norm).
  explicit ComplexUnitVector(Vector amplitudes);

  // Normalizes the argument; rejects the zero vector.
  static ComplexUnitVector normalized(Vector amplitudes);

  const Vector& amplitudes() const { return z_; }
  int dim() const { return static_cast<int>(z_.size()); }
  double modulus_squared(int k) const { return std::norm(z_[k]); }

 private:
  struct AlreadyNormalized {};
  ComplexUnitVector(Vector v, AlreadyNormalized) : z_(std::move(v)) {}
  Vector z_;
};

// A click index in {0,...,d-1} or the distinguished no-click symbol.
class Outcome {
 public:
  static Outcome click(int index) {
    if (index < 0) throw std::invalid_argument("Outcome: negative index");
    return Outcome(index);
  }
  static Outcome no_click() { return Outcome(kNoClick); }

  bool is_click() const { return value_ != kNoClick; }
  int index() const {
    if (!is_click()) throw std::logic_error("Outcome: no-click has no index");
    return value_;
  }
  // Position in a (d+1)-long array whose last slot is the no-click outcome.
  int slot(int d) const { return is_click() ? value_ : d; }

  friend bool operator==(Outcome a, Outcome b) { return a.value_ == b.value_; }
  friend bool operator!=(Outcome a, Outcome b) { return a.value_ != b.value_; }

 private:
  static constexpr int kNoClick = -1;
  explicit Outcome(int v) : value_(v) {}
  int value_;
};

// One point of the joint-measurability boundary curve, tagged with the
// threshold that generated it.
struct BoundarySample {
  double t;
  double eta;
  double p;
};

bool is_hermitian(const Matrix& m, double tolerance = tol::hermitian);
// Smallest eigenvalue of the Hermitian part must be >= -tolerance.
bool is_psd(const Matrix& m, double tolerance = tol::psd);
bool is_unitary(const Matrix& m, double tolerance = tol::unitary);

// True iff every element is PSD and they sum to the identity (tol::algebra).
// Throws if the elements are not square matrices of a common dimension.
bool validate_povm(const std::vector<Matrix>& elements);

}  // namespace jmnoise
