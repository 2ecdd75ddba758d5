#include <catch2/catch_amalgamated.hpp>

#include "muub/state_iso.hpp"

using namespace muub;

TEST_CASE("Bell basis and magic-basis construction") {
  const auto bases = bell_and_magic_bases();
  const double s = 1 / std::sqrt(2.0);
  REQUIRE(std::abs(bases[0].states[0](0) - Complex(s, 0)) < kEps);  // |Φ+>
  REQUIRE(std::abs(bases[0].states[0](3) - Complex(s, 0)) < kEps);
  for (const auto& b : bases) REQUIRE_NOTHROW(validate_entangled_basis(b));

  // all cross-basis overlaps have |<u|v>|² = 1/4
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) {
      if (k == l) continue;
      for (const Vector& u : bases[k].states)
        for (const Vector& v : bases[l].states)
          REQUIRE(std::norm(u.dot(v)) == Catch::Approx(0.25).margin(1e-9));
    }
}

TEST_CASE("vectorize maps the qubit family onto the entangled bases") {
  const auto state_bases = bell_and_magic_bases();
  const MuubFamily fam = builtin_qubit_family();
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 4; ++i)
      REQUIRE(states_equal_up_to_phase(state_bases[k].states[i],
                                       vectorize(fam.bases[k].elements[i])));
}

TEST_CASE("every vectorized family element is maximally entangled") {
  const Matrix mixed2 = Matrix::Identity(2, 2) / 2.0;
  const MuubFamily qubit = builtin_qubit_family();
  for (const auto& b : qubit.bases)
    for (const Matrix& u : b.elements) {
      const Vector v = vectorize(u);
      REQUIRE((partial_trace_first(v, 2) - mixed2).cwiseAbs().maxCoeff() < kEps);
      REQUIRE((partial_trace_second(v, 2) - mixed2).cwiseAbs().maxCoeff() < kEps);
    }
  const Matrix mixed3 = Matrix::Identity(3, 3) / 3.0;
  const MuubFamily qutrit = builtin_qutrit_family();
  for (const Matrix& u : qutrit.bases[1].elements) {
    const Vector v = vectorize(u);
    REQUIRE((partial_trace_first(v, 3) - mixed3).cwiseAbs().maxCoeff() < kEps);
  }
}

TEST_CASE("prime entangled MUB recipe") {
  SECTION("base state at (n,m) = (0,0) is |Φ+> for d = 2") {
    const auto mubs = prime_entangled_mubs(2);
    REQUIRE(states_equal_up_to_phase(mubs[0].states[0], bell_state(0)));
  }

  SECTION("d = 2 reproduces the Bell/magic triple up to relabeling") {
    const auto mubs = prime_entangled_mubs(2);
    const auto magic = bell_and_magic_bases();
    std::array<bool, 3> used{};
    for (const auto& mb : mubs) {
      bool matched = false;
      for (int k = 0; k < 3 && !matched; ++k) {
        if (used[k]) continue;
        // same basis iff every state matches some magic state up to phase
        bool same = true;
        for (const Vector& s : mb.states) same &= find_state_in_basis(s, magic[k]).has_value();
        if (same) {
          used[k] = true;
          matched = true;
        }
      }
      REQUIRE(matched);
    }
  }

  SECTION("d = 3 and d = 5 give d+1 pairwise unbiased bases") {
    for (int d : {3, 5}) {
      const auto mubs = prime_entangled_mubs(d);
      REQUIRE(mubs.size() == static_cast<std::size_t>(d + 1));
      for (const auto& b : mubs) REQUIRE_NOTHROW(validate_entangled_basis(b));
      for (std::size_t k = 0; k < mubs.size(); ++k)
        for (std::size_t l = k + 1; l < mubs.size(); ++l)
          for (const Vector& u : mubs[k].states)
            for (const Vector& v : mubs[l].states)
              REQUIRE(std::abs(u.dot(v)) == Catch::Approx(1.0 / d).margin(1e-9));
    }
  }

  SECTION("rejects non-prime and oversized dimensions") {
    REQUIRE_THROWS_AS(prime_entangled_mubs(4), NonPrimeError);
    REQUIRE_THROWS_AS(prime_entangled_mubs(11), InvalidInputError);
  }
}

TEST_CASE("basis action table") {
  const ActionTable t = basis_action_table();
  REQUIRE(t.out[0][0] == Axis::Z);
  REQUIRE(t.out[0][1] == Axis::X);
  REQUIRE(t.out[1][0] == Axis::X);
  REQUIRE(t.out[1][1] == Axis::Y);
  REQUIRE(t.out[2][0] == Axis::Y);
  REQUIRE(t.out[2][1] == Axis::Z);
}

TEST_CASE("entangled mapping table") {
  const MappingTable t = entangled_mapping_table();
  REQUIRE(t.image[0][0] == 0);
  REQUIRE((t.image[0][1] == 1 || t.image[0][1] == 2));

  // every row and column is a permutation of {0,1,2}
  for (int i = 0; i < 3; ++i) {
    std::array<bool, 3> row{}, col{};
    for (int j = 0; j < 3; ++j) {
      row[t.image[i][j]] = true;
      col[t.image[j][i]] = true;
    }
    REQUIRE((row[0] && row[1] && row[2]));
    REQUIRE((col[0] && col[1] && col[2]));
  }

  // a mod-2 index cannot reproduce a three-basis permutation table
  REQUIRE_FALSE(t.matches_mod2_formula());
}

TEST_CASE("mapping table composes consistently") {
  const MappingTable t = entangled_mapping_table();
  const auto state_bases = bell_and_magic_bases();
  const MuubFamily fam = builtin_qubit_family();
  const Matrix id2 = Matrix::Identity(2, 2);

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int j2 = 0; j2 < 3; ++j2) {
        const Vector psi = state_bases[i].states[1];
        const Matrix u = fam.bases[j].elements[2];
        const Matrix v = fam.bases[j2].elements[1];
        const Vector phi = tensor(v, id2) * (tensor(u, id2) * psi);
        const int expected = t.image[t.image[i][j]][j2];
        REQUIRE(find_state_in_basis(phi, state_bases[expected]).has_value());
      }
}

TEST_CASE("average estimation fidelity") {
  for (int m = 0; m < 3; ++m)
    REQUIRE(average_fidelity_exact(m).value == Catch::Approx(0.5).margin(1e-12));

  SECTION("restricting inputs to the measurement basis gives exactly 1") {
    const auto bases = bell_and_magic_bases();
    Rng rng(99);
    const FidelityResult r = average_fidelity_mc_pool(bases[0].states, bases[0], 500, rng);
    REQUIRE(r.value == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(r.std_error < 1e-9);
  }

  SECTION("single-trial runs are reproducible") {
    Rng a(31), b(31);
    REQUIRE(average_fidelity_mc(1, a).value == average_fidelity_mc(1, b).value);
  }

  SECTION("Monte-Carlo converges to the exact value") {
    Rng rng(1);
    const FidelityResult r = average_fidelity_mc(100000, rng);
    REQUIRE(std::abs(r.value - 0.5) <= 5 * r.std_error);
    REQUIRE(std::abs(r.value - 0.5) <= 0.005);
  }
}

TEST_CASE("state-averaged overlap against the closed form") {
  Rng rng(17);
  SECTION("identical unitaries") {
    const auto ov = state_average_overlap(pauli(2), pauli(2), 4000, rng);
    REQUIRE(ov.closed_form == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(ov.monte_carlo == Catch::Approx(1.0).margin(0.05));
  }
  SECTION("traceless relative unitary") {
    const auto ov = state_average_overlap(pauli(0), pauli(1), 4000, rng);
    REQUIRE(ov.closed_form == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(ov.monte_carlo == Catch::Approx(0.0).margin(0.05));
  }
  SECTION("cross-family pair gives 1/4") {
    const MuubFamily fam = builtin_qubit_family();
    const auto ov = state_average_overlap(pauli(0), fam.bases[1].elements[0], 20000, rng);
    REQUIRE(ov.closed_form == Catch::Approx(0.25).margin(1e-12));
    const Complex expected = (fam.bases[1].elements[0].adjoint() * pauli(0)).trace() / 2.0;
    REQUIRE(std::abs(ov.sample_mean - expected) <= 5 * ov.mean_std_error);
  }
}

TEST_CASE("covariant orbit checks") {
  const auto bases = bell_and_magic_bases();
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 4; ++i) {
      const OrbitCheck oc = covariant_orbit_check(h4_coordinates(bases[k].states[i]));
      REQUIRE(oc.ok);
      REQUIRE(oc.basis_index == k);
      REQUIRE(oc.distinct_states == 4);
    }

  Vector skew(4);
  skew << 1 / std::sqrt(5.0), 2 / std::sqrt(5.0), 0, 0;
  const OrbitCheck oc = covariant_orbit_check(skew);
  REQUIRE_FALSE(oc.ok);
  REQUIRE(oc.basis_index == -1);
}

TEST_CASE("H4 coordinates of a magic-basis state") {
  const auto bases = bell_and_magic_bases();
  // first B1 state has signs c = (+1, +1, -1): coordinates (1, ic1, c2, ic3)/2
  const Vector coords = h4_coordinates(bases[1].states[0]);
  REQUIRE(std::abs(coords(0) - Complex(0.5, 0)) < kEps);
  REQUIRE(std::abs(coords(1) - Complex(0, 0.5)) < kEps);
  REQUIRE(std::abs(coords(2) - Complex(0.5, 0)) < kEps);
  REQUIRE(std::abs(coords(3) - Complex(0, -0.5)) < kEps);
}
