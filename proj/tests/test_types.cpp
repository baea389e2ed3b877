#include <doctest.h>

#include "jmnoise/rng.hpp"
#include "jmnoise/types.hpp"

using namespace jmnoise;

TEST_CASE("Dimension rejects d < 2") {
  CHECK_THROWS_AS(Dimension(1), std::invalid_argument);
  CHECK_THROWS_AS(Dimension(0), std::invalid_argument);
  CHECK_THROWS_AS(Dimension(-3), std::invalid_argument);
  CHECK(Dimension(2).value() == 2);
}

TEST_CASE("NoiseParams and Threshold validate the unit interval") {
  CHECK_THROWS_AS(NoiseParams(1.2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(NoiseParams(0.5, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(Threshold(1.5), std::invalid_argument);
  CHECK(Threshold(1.0).value() == 1.0);
  CHECK(NoiseParams(0.0, 1.0).eta == 0.0);
}

TEST_CASE("ComplexUnitVector normalizing constructor hits unit norm") {
  Xoshiro256 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng.next_u64() % 9);
    Vector v(d);
    for (int k = 0; k < d; ++k) v[k] = 10.0 * rng.next_complex_gaussian();
    const ComplexUnitVector z = ComplexUnitVector::normalized(v);
    CHECK(std::abs(z.amplitudes().squaredNorm() - 1.0) <= tol::unit_norm);
  }
  CHECK_THROWS_AS(ComplexUnitVector::normalized(Vector::Zero(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ComplexUnitVector(Vector::Constant(2, Complex(1.0, 0.0))),
                  std::invalid_argument);
}

TEST_CASE("Outcome click/no-click") {
  const Outcome a = Outcome::click(3);
  CHECK(a.is_click());
  CHECK(a.index() == 3);
  CHECK(a.slot(5) == 3);
  const Outcome none = Outcome::no_click();
  CHECK_FALSE(none.is_click());
  CHECK(none.slot(5) == 5);
  CHECK_THROWS_AS(none.index(), std::logic_error);
  CHECK(a != none);
  CHECK(a == Outcome::click(3));
}

TEST_CASE("matrix predicates") {
  Matrix h(2, 2);
  h << Complex(1, 0), Complex(0, 1), Complex(0, -1), Complex(2, 0);
  CHECK(is_hermitian(h));
  CHECK(is_psd(Matrix::Identity(3, 3)));
  CHECK_FALSE(is_psd(-Matrix::Identity(2, 2)));
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(is_unitary(swap));
  CHECK_FALSE(is_unitary(2.0 * Matrix::Identity(2, 2)));
}

TEST_CASE("validate_povm on the three reference sets") {
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  Matrix p1 = Matrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  CHECK(validate_povm({p0, p1}));  // projective basis

  const Matrix half = 0.5 * Matrix::Identity(2, 2);
  CHECK(validate_povm({half, half}));  // trivial POVM

  const Matrix eye = Matrix::Identity(2, 2);
  CHECK_FALSE(validate_povm({eye, eye}));  // sums to 2*identity

  CHECK_THROWS_AS(validate_povm({eye, Matrix::Identity(3, 3)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_povm({}), std::invalid_argument);
}
