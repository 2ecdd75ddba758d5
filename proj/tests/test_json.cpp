#include <catch2/catch_amalgamated.hpp>

#include "muub/json_io.hpp"
#include "muub/rng.hpp"

using namespace muub;

TEST_CASE("matrix round trip") {
  Rng rng(1);
  const Matrix u = haar_random_unitary(3, rng);
  const Json j = matrix_to_json(u);
  const Matrix back = matrix_from_json(j);
  REQUIRE((u - back).cwiseAbs().maxCoeff() < 1e-11);  // 12 significant digits
  REQUIRE(matrix_to_json(back).dump() == j.dump());   // re-encoding is stable
}

TEST_CASE("state round trip") {
  Rng rng(2);
  const Vector v = haar_random_state(5, rng);
  const Vector back = state_from_json(state_to_json(v));
  REQUIRE((v - back).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("basis and family round trip through certification") {
  const MuubFamily fam = builtin_qubit_family();
  const Json fj = family_to_json(fam);
  const auto elements = family_elements_from_json(fj);
  REQUIRE(elements.size() == 3);
  std::vector<OperatorBasis> bases;
  for (const auto& e : elements) bases.push_back(certify_basis(e));
  const MuubFamily again = certify_family(bases);
  REQUIRE(again.constant == Catch::Approx(fam.constant).margin(1e-9));

  // verify-basis style idempotence
  const Json bj = basis_to_json(fam.bases[0]);
  const Json bj2 = basis_to_json(certify_basis(basis_elements_from_json(bj)));
  REQUIRE(bj.dump() == bj2.dump());
}

TEST_CASE("malformed documents are rejected") {
  REQUIRE_THROWS_AS(matrix_from_json(Json{{"rows", 2}, {"cols", 2}}), InvalidInputError);
  REQUIRE_THROWS_AS(matrix_from_json(Json{{"rows", 2},
                                          {"cols", 2},
                                          {"entries", Json::array({1, 2, 3, 4})}}),
                    InvalidInputError);
  Json bad = Json{{"rows", 1},
                  {"cols", 1},
                  {"entries", Json::array({Json::array({std::nan(""), 0.0})})}};
  REQUIRE_THROWS_AS(matrix_from_json(bad), InvalidInputError);
  REQUIRE_THROWS_AS(basis_elements_from_json(Json::object()), InvalidInputError);
  REQUIRE_THROWS_AS(matrices_from_document(Json::object()), InvalidInputError);
}

TEST_CASE("round12 formatting") {
  REQUIRE(round12(1.0 / 3.0) == 0.333333333333);
  REQUIRE(round12(2.0) == 2.0);
  REQUIRE(round12(1e-15) == 1e-15);
}

TEST_CASE("qkd report encoding") {
  ProtocolConfig cfg;
  cfg.rounds = 500;
  cfg.seed = 4;
  const QkdReport r = run_protocol(cfg);
  const Json j = qkd_report_to_json(r);
  REQUIRE(j["rounds"] == 500);
  REQUIRE(j["qber"].is_number());
  REQUIRE(j["qber"].get<double>() == 0.0);
  REQUIRE(j["per_basis"].size() == 3);
  REQUIRE(j["eve"] == false);
  REQUIRE(j["seed"] == 4);
}

TEST_CASE("round record encoding marks inconclusive rounds") {
  ProtocolConfig cfg;
  cfg.rounds = 50;
  cfg.seed = 9;
  std::vector<Json> lines;
  run_protocol(cfg, [&](const RoundRecord& rec) { lines.push_back(round_record_to_json(rec)); });
  bool saw_null = false, saw_bit = false;
  for (const Json& j : lines) {
    REQUIRE(j["eve_meas_basis"].is_null());
    if (j["sifted"].get<bool>()) {
      REQUIRE(j["bob_bit"].is_number());
      saw_bit = true;
    } else {
      REQUIRE(j["bob_bit"].is_null());
      saw_null = true;
    }
  }
  REQUIRE(saw_bit);
  REQUIRE(saw_null);
}

TEST_CASE("search report and entangled basis encodings") {
  const SearchReport r = phase_search(default_seed_basis(2, 2), 4);
  const Json j = search_report_to_json(r);
  REQUIRE(j["candidates_scanned"] == 4);
  REQUIRE(j["unitaries_found"].size() == 2);
  REQUIRE(j["bases"].size() == 1);

  const auto mubs = prime_entangled_mubs(2);
  const Json e = entangled_basis_to_json(mubs[0]);
  REQUIRE(e["d"] == 2);
  REQUIRE(e["states"].size() == 4);
  const Vector back = state_from_json(e["states"][0]);
  REQUIRE(states_equal_up_to_phase(back, mubs[0].states[0], 1e-9));
}

TEST_CASE("mapping table and fidelity encodings") {
  const Json m = mapping_table_to_json(entangled_mapping_table());
  REQUIRE(m["table"].size() == 3);
  REQUIRE(m["matches_mod2_formula"] == false);
  REQUIRE(m["discrepancies"].size() > 0);

  const Json f = fidelity_to_json(average_fidelity_exact());
  REQUIRE(f["value"] == 0.5);
  REQUIRE(f["mode"] == "exact");
  REQUIRE(f["std_error"] == 0.0);
}
