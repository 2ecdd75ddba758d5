#include <catch2/catch_amalgamated.hpp>

#include "muub/basis.hpp"
#include "muub/linalg.hpp"
#include "muub/pauli.hpp"
#include "muub/rng.hpp"

using namespace muub;

namespace {
Matrix id2() { return Matrix::Identity(2, 2); }
}  // namespace

TEST_CASE("hs_inner on the standard examples") {
  REQUIRE(std::abs(hs_inner(id2(), id2()) - Complex(2, 0)) < kEps);
  REQUIRE(std::abs(hs_inner(pauli(1), pauli(2))) < kEps);

  const Matrix u = (id2() + Complex(0, 1) * pauli(3)) / std::sqrt(2.0);
  const Complex v = hs_inner(id2(), u);
  REQUIRE(std::abs(std::abs(v) - std::sqrt(2.0)) < kEps);
  REQUIRE(std::norm(v) == Catch::Approx(2.0).margin(1e-12));

  Matrix rect(2, 3);
  rect.setZero();
  REQUIRE_THROWS_AS(hs_inner(rect, rect), DimError);
  REQUIRE_THROWS_AS(hs_inner(id2(), Matrix::Identity(3, 3)), DimError);
}

TEST_CASE("hs_inner of a unitary with itself is d") {
  Rng rng(11);
  for (int d : {2, 3, 5}) {
    const Matrix u = haar_random_unitary(d, rng);
    const Complex v = hs_inner(u, u);
    REQUIRE(v.real() == Catch::Approx(static_cast<double>(d)).margin(1e-9));
    REQUIRE(std::abs(v.imag()) < kEps);
  }
}

TEST_CASE("Cauchy-Schwarz: |hs_inner| <= d with equality iff phase-equal") {
  Rng rng(12);
  for (int k = 0; k < 25; ++k) {
    Rng local = rng.derive(k);
    const Matrix a = haar_random_unitary(2, local);
    const Matrix b = haar_random_unitary(2, local);
    REQUIRE(std::abs(hs_inner(a, b)) <= 2.0 + kEps);
    REQUIRE_FALSE(equal_up_to_phase(a, b));  // almost surely distinct
    const Complex phase = std::polar(1.0, local.next_double());
    REQUIRE(std::abs(hs_inner(a, phase * a)) == Catch::Approx(2.0).margin(1e-9));
    REQUIRE(equal_up_to_phase(a, phase * a));
  }
}

TEST_CASE("is_unitary") {
  REQUIRE(is_unitary(pauli(1)));
  REQUIRE_FALSE(is_unitary((id2() + pauli(1)) / 2.0));
  REQUIRE(is_unitary(qutrit_r(1)));  // 3x3 combination operator, normalized
  REQUIRE_FALSE(is_unitary(Matrix::Zero(2, 3)));
}

TEST_CASE("tensor products") {
  REQUIRE((tensor(id2(), id2()) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < kEps);

  Vector phi_plus(4);
  phi_plus << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
  const Vector flipped = tensor(pauli(1), id2()) * phi_plus;
  Vector expected(4);
  expected << 0, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0;  // (|10⟩+|01⟩)/√2
  REQUIRE((flipped - expected).cwiseAbs().maxCoeff() < kEps);

  Matrix zz = tensor(pauli(3), pauli(3));
  Matrix diag = Matrix::Zero(4, 4);
  diag(0, 0) = 1;
  diag(1, 1) = -1;
  diag(2, 2) = -1;
  diag(3, 3) = 1;
  REQUIRE((zz - diag).cwiseAbs().maxCoeff() < kEps);
}

TEST_CASE("vectorize maps I to |Φ+> and σ1 to |Ψ+>") {
  const Vector vi = vectorize(id2());
  const double s = 1 / std::sqrt(2.0);
  REQUIRE(std::abs(vi(0) - Complex(s, 0)) < kEps);
  REQUIRE(std::abs(vi(3) - Complex(s, 0)) < kEps);
  REQUIRE(std::abs(vi(1)) < kEps);

  const Vector vx = vectorize(pauli(1));
  REQUIRE(std::abs(vx(1) - Complex(s, 0)) < kEps);
  REQUIRE(std::abs(vx(2) - Complex(s, 0)) < kEps);
}

TEST_CASE("vectorize preserves inner products up to 1/d") {
  Rng rng(13);
  for (int k = 0; k < 25; ++k) {
    Rng local = rng.derive(k);
    const int d = (k % 2) ? 3 : 2;
    const Matrix a = haar_random_unitary(d, local);
    const Matrix b = haar_random_unitary(d, local);
    const Complex lhs = vectorize(a).dot(vectorize(b));
    const Complex rhs = hs_inner(a, b) / static_cast<double>(d);
    REQUIRE(std::abs(lhs - rhs) < kEps);
    REQUIRE(std::norm(vectorize(a).dot(vectorize(b))) ==
            Catch::Approx(std::norm(hs_inner(a, b)) / (d * d)).margin(1e-9));
  }
}

TEST_CASE("equal_up_to_phase") {
  REQUIRE(equal_up_to_phase(pauli(1), Complex(0, 1) * pauli(1)));
  REQUIRE_FALSE(equal_up_to_phase(pauli(1), pauli(2)));

  // (p) and (-p) coefficient vectors give equivalent matrices
  const Matrix u = (id2() + Complex(0, 1) * (pauli(1) + pauli(2) - pauli(3))) / 2.0;
  REQUIRE(equal_up_to_phase(u, -u));

  REQUIRE_THROWS_AS(equal_up_to_phase(id2(), (id2() + pauli(1)) / 2.0), InvalidInputError);
}

TEST_CASE("equal_up_to_phase is an equivalence relation within 3 tol") {
  Rng rng(14);
  const Matrix a = haar_random_unitary(3, rng);
  const Matrix b = std::polar(1.0, 1.234) * a;
  const Matrix c = std::polar(1.0, -0.777) * b;
  REQUIRE(equal_up_to_phase(a, a));
  REQUIRE(equal_up_to_phase(a, b));
  REQUIRE(equal_up_to_phase(b, a));
  REQUIRE(equal_up_to_phase(a, c, 3 * kEps));
}

TEST_CASE("partial traces of a maximally entangled state are I/d") {
  const Vector v = vectorize(pauli(2));
  const Matrix half = Matrix::Identity(2, 2) / 2.0;
  REQUIRE((partial_trace_first(v, 2) - half).cwiseAbs().maxCoeff() < kEps);
  REQUIRE((partial_trace_second(v, 2) - half).cwiseAbs().maxCoeff() < kEps);
}

TEST_CASE("haar_random_state basics") {
  Rng rng(42);
  const Vector one = haar_random_state(1, rng);
  REQUIRE(std::abs(std::abs(one(0)) - 1.0) < kEps);

  Rng r1(7), r2(7);
  const Vector a = haar_random_state(5, r1);
  const Vector b = haar_random_state(5, r2);
  REQUIRE((a - b).cwiseAbs().maxCoeff() == 0.0);  // determinism contract

  REQUIRE(std::abs(haar_random_state(4, rng).norm() - 1.0) < kEps);
}

TEST_CASE("Haar average of <a|V|a> estimates Tr(V)/d") {
  // V = σ3: the true mean is 0; 5 sigma Monte-Carlo oracle
  Rng rng(2024);
  const Matrix v = pauli(3);
  const int n = 100000;
  Complex acc(0, 0);
  double re_sq = 0, im_sq = 0;
  for (int k = 0; k < n; ++k) {
    Rng local = rng.derive(k);
    const Vector alpha = haar_random_state(2, local);
    const Complex z = alpha.dot(v * alpha);
    acc += z;
    re_sq += z.real() * z.real();
    im_sq += z.imag() * z.imag();
  }
  const Complex mean = acc / static_cast<double>(n);
  const double var_re = re_sq / n - mean.real() * mean.real();
  const double var_im = im_sq / n - mean.imag() * mean.imag();
  const double se = std::sqrt((var_re + var_im) / (n - 1.0));
  REQUIRE(std::abs(mean) <= 5.0 * se);
}

TEST_CASE("canonical_phase makes the dominant entry positive real") {
  Rng rng(3);
  const Matrix u = haar_random_unitary(3, rng);
  const Matrix c = canonical_phase(u * std::polar(1.0, 2.1));
  double max_mod = 0;
  for (Eigen::Index r = 0; r < 3; ++r)
    for (Eigen::Index cc = 0; cc < 3; ++cc) max_mod = std::max(max_mod, std::abs(c(r, cc)));
  bool found = false;
  for (Eigen::Index r = 0; r < 3 && !found; ++r)
    for (Eigen::Index cc = 0; cc < 3 && !found; ++cc)
      if (std::abs(c(r, cc)) >= max_mod - kEps) {
        REQUIRE(c(r, cc).real() > 0);
        REQUIRE(std::abs(c(r, cc).imag()) < kEps);
        found = true;
      }
  REQUIRE(found);
  REQUIRE(equal_up_to_phase(c, u));
}
