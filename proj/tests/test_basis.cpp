#include <catch2/catch_amalgamated.hpp>

#include "muub/basis.hpp"
#include "muub/rng.hpp"

using namespace muub;

TEST_CASE("certify_basis accepts the Pauli basis and rejects defects") {
  const OperatorBasis b = certify_basis({pauli(0), pauli(1), pauli(2), pauli(3)});
  REQUIRE(b.d == 2);
  REQUIRE(b.n == 4);

  REQUIRE_THROWS_AS(certify_basis({pauli(0), (pauli(0) + pauli(1)) / std::sqrt(2.0)}),
                    NonUnitaryError);
  REQUIRE_THROWS_AS(certify_basis({pauli(0), pauli(1), pauli(1)}), NotOrthogonalError);
  REQUIRE_THROWS_AS(certify_basis({pauli(0), Matrix::Identity(3, 3)}), DimError);
  REQUIRE_THROWS_AS(certify_basis({}), InvalidInputError);
}

TEST_CASE("unbiasedness_constant on the canonical pairs") {
  const MuubFamily fam = builtin_qubit_family();
  REQUIRE(unbiasedness_constant(fam.bases[0], fam.bases[1]) == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(unbiasedness_constant(fam.bases[1], fam.bases[2]) == Catch::Approx(1.0).margin(1e-9));

  const MuubFamily n2 = builtin_qubit_n2(3);
  REQUIRE(unbiasedness_constant(n2.bases[0], n2.bases[1]) == Catch::Approx(2.0).margin(1e-9));

  // a basis against itself: diagonal pairs give d², off-diagonal 0
  REQUIRE_THROWS_AS(unbiasedness_constant(fam.bases[0], fam.bases[0]), NotUnbiasedError);
}

TEST_CASE("bases_equivalent finds the left-multiplication witness") {
  const MuubFamily fam = builtin_qubit_family();
  Rng rng(5);
  const Matrix v = haar_random_unitary(2, rng);
  std::vector<Matrix> rotated;
  for (const Matrix& m : fam.bases[0].elements) rotated.push_back(v * m);
  const OperatorBasis y = certify_basis(rotated);

  const auto witness = bases_equivalent(fam.bases[0], y);
  REQUIRE(witness.has_value());
  REQUIRE(equal_up_to_phase(*witness, v));

  REQUIRE_FALSE(bases_equivalent(fam.bases[0], fam.bases[1]).has_value());
}

TEST_CASE("equivalence preserves unbiasedness constants") {
  const MuubFamily fam = builtin_qubit_family();
  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    Rng local = rng.derive(k);
    const Matrix v = haar_random_unitary(2, local);
    std::vector<Matrix> x, z;
    for (const Matrix& m : fam.bases[0].elements) x.push_back(v * m);
    for (const Matrix& m : fam.bases[2].elements) z.push_back(v * m);
    const double c = unbiasedness_constant(certify_basis(x), certify_basis(z));
    REQUIRE(c == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("built-in qubit family") {
  const MuubFamily fam = builtin_qubit_family();
  REQUIRE(fam.bases.size() == 3);
  REQUIRE(fam.constant == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(fam.bases[1].n == 4);
  for (const Matrix& m : fam.bases[1].elements) REQUIRE(is_unitary(m));

  // every element of B1 ∪ B2 has all four coefficient moduli 1/2 over B0
  for (int k : {1, 2})
    for (const Matrix& m : fam.bases[k].elements)
      for (int j = 0; j < 4; ++j) {
        const Complex p = hs_inner(pauli(j), m) / 2.0;
        REQUIRE(std::abs(p) == Catch::Approx(0.5).margin(1e-9));
      }
}

TEST_CASE("built-in n = 2 families") {
  for (int axis : {2, 3}) {
    const MuubFamily fam = builtin_qubit_n2(axis);
    REQUIRE(fam.bases.size() == 2);
    REQUIRE(fam.constant == Catch::Approx(2.0).margin(1e-9));
    // both bases span the same 2-dim subspace: project onto {I, σ_axis}
    for (const Matrix& m : fam.bases[1].elements) {
      const Complex c0 = hs_inner(pauli(0), m) / 2.0;
      const Complex c1 = hs_inner(pauli(axis), m) / 2.0;
      const Matrix residual = m - c0 * pauli(0) - c1 * pauli(axis);
      REQUIRE(residual.cwiseAbs().maxCoeff() < kEps);
    }
  }
  REQUIRE_THROWS_AS(builtin_qubit_n2(1), InvalidInputError);
}

TEST_CASE("built-in qutrit family certifies with C = 1") {
  const MuubFamily fam = builtin_qutrit_family();
  REQUIRE(fam.bases.size() == 8);
  REQUIRE(fam.constant == Catch::Approx(1.0).margin(1e-9));
  for (int l = 1; l <= 7; ++l) REQUIRE(is_unitary(qutrit_r(l)));
  REQUIRE(unbiasedness_constant(fam.bases[0], fam.bases[1]) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("built-in qutrit subspace families") {
  for (auto [a, b] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}, std::pair{2, 1}}) {
    const MuubFamily fam = builtin_qutrit_subspace(WeylIndex{3, a, b});
    REQUIRE(fam.bases.size() == 3);
    REQUIRE(fam.constant == Catch::Approx(3.0).margin(1e-9));
    REQUIRE(unbiasedness_constant(fam.bases[1], fam.bases[2]) ==
            Catch::Approx(3.0).margin(1e-9));
  }
  REQUIRE_THROWS_AS(builtin_qutrit_subspace(WeylIndex{3, 0, 0}), InvalidGeneratorError);
}

TEST_CASE("tampered tolerance surfaces failures with indices") {
  // negative control: at 1e-30 the accumulated fp error in the root-of-unity
  // entries is no longer ignorable and certification must name a culprit
  try {
    builtin_qutrit_family(1e-30);
    FAIL("expected certification to fail at tol = 1e-30");
  } catch (const NonUnitaryError& e) {
    REQUIRE(std::string(e.what()).find(std::to_string(e.index)) != std::string::npos);
  } catch (const NotUnbiasedError& e) {
    REQUIRE(e.observed > 0.0);
  } catch (const NotOrthogonalError&) {
    SUCCEED();
  }
}

TEST_CASE("family constants equal d^2/n for every built-in") {
  REQUIRE(builtin_qubit_family().constant == Catch::Approx(4.0 / 4).margin(1e-9));
  REQUIRE(builtin_qubit_n2(2).constant == Catch::Approx(4.0 / 2).margin(1e-9));
  REQUIRE(builtin_qutrit_family().constant == Catch::Approx(9.0 / 9).margin(1e-9));
  REQUIRE(builtin_qutrit_subspace(WeylIndex{3, 1, 0}).constant ==
          Catch::Approx(9.0 / 3).margin(1e-9));
}

TEST_CASE("re-certification after a common left rotation preserves constants") {
  Rng rng(8);
  for (const MuubFamily& fam :
       {builtin_qubit_family(), builtin_qubit_n2(2), builtin_qutrit_subspace(WeylIndex{3, 1, 0})}) {
    Rng local = rng.derive(static_cast<std::uint64_t>(fam.bases.size()));
    const Matrix v = haar_random_unitary(fam.bases[0].d, local);
    std::vector<OperatorBasis> rotated;
    for (const OperatorBasis& b : fam.bases) {
      std::vector<Matrix> elems;
      for (const Matrix& m : b.elements) elems.push_back(v * m);
      rotated.push_back(certify_basis(elems));
    }
    const MuubFamily again = certify_family(rotated);
    REQUIRE(again.constant == Catch::Approx(fam.constant).margin(1e-9));
  }
}

TEST_CASE("frame potential") {
  const MuubFamily fam = builtin_qubit_family();
  std::vector<Matrix> pool;
  for (const auto& b : fam.bases)
    for (const auto& m : b.elements) pool.push_back(m);
  REQUIRE(frame_potential(pool) == Catch::Approx(2.0).margin(1e-9));

  REQUIRE(frame_potential({pauli(0)}) == Catch::Approx(16.0).margin(1e-9));

  // never below the 2-design bound for d = 2 sets
  Rng rng(9);
  for (int k = 0; k < 10; ++k) {
    Rng local = rng.derive(k);
    std::vector<Matrix> random_set;
    for (int i = 0; i < 4; ++i) random_set.push_back(haar_random_unitary(2, local));
    REQUIRE(frame_potential(random_set) >= 2.0 - 1e-9);
  }

  REQUIRE_THROWS_AS(frame_potential({(pauli(0) + pauli(1)) / 2.0}), NonUnitaryError);
  REQUIRE_THROWS_AS(frame_potential({pauli(0), Matrix::Identity(3, 3)}), DimError);
}
