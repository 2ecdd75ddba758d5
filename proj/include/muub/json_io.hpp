#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "muub/basis.hpp"
#include "muub/linalg.hpp"
#include "muub/qkd.hpp"
#include "muub/search.hpp"
#include "muub/state_iso.hpp"

namespace muub {

using Json = nlohmann::json;

// All numeric JSON output carries 12 significant digits: above the working
// tolerance, below double noise, and byte-stable across runs.
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline Json complex_to_json(const Complex& z) {
  return Json::array({round12(z.real()), round12(z.imag())});
}

// ── matrices and states ──────────────────────────────────────────────────────
// Matrix: {"rows": r, "cols": c, "entries": [[re, im], ...]} row-major.
// State:  {"dim": d, "amplitudes": [[re, im], ...]}.

inline Json matrix_to_json(const Matrix& m) {
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(complex_to_json(m(r, c)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidInputError("expected a [re, im] number pair");
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvalidInputError("non-finite number in input");
  return z;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw InvalidInputError("matrix object needs rows, cols, entries");
  const auto rows = j["rows"].get<Eigen::Index>();
  const auto cols = j["cols"].get<Eigen::Index>();
  if (rows < 1 || cols < 1) throw InvalidInputError("matrix dimensions must be positive");
  const Json& entries = j["entries"];
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows * cols))
    throw InvalidInputError("entries length must equal rows*cols");
  Matrix m(rows, cols);
  std::size_t idx = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(entries[idx++]);
  return m;
}

inline Json state_to_json(const Vector& v) {
  Json amps = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) amps.push_back(complex_to_json(v(i)));
  return Json{{"dim", v.size()}, {"amplitudes", amps}};
}

inline Vector state_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("amplitudes"))
    throw InvalidInputError("state object needs dim, amplitudes");
  const auto dim = j["dim"].get<Eigen::Index>();
  const Json& amps = j["amplitudes"];
  if (dim < 1 || !amps.is_array() || amps.size() != static_cast<std::size_t>(dim))
    throw InvalidInputError("amplitudes length must equal dim");
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = complex_from_json(amps[i]);
  return v;
}

// ── bases and families ───────────────────────────────────────────────────────
// Basis:  {"d": ..., "n": ..., "elements": [matrix, ...]}
// Family: {"constant": ..., "bases": [basis, ...]}

inline Json basis_to_json(const OperatorBasis& b) {
  Json elements = Json::array();
  for (const Matrix& m : b.elements) elements.push_back(matrix_to_json(m));
  return Json{{"d", b.d}, {"n", b.n}, {"elements", elements}};
}

// Structural decode only; certification is a separate step.
inline std::vector<Matrix> basis_elements_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("elements") || !j["elements"].is_array())
    throw InvalidInputError("basis object needs an elements array");
  std::vector<Matrix> out;
  for (const Json& e : j["elements"]) out.push_back(matrix_from_json(e));
  if (j.contains("n") && j["n"].get<std::size_t>() != out.size())
    throw InvalidInputError("basis n field disagrees with elements length");
  if (j.contains("d") && !out.empty() && j["d"].get<Eigen::Index>() != out[0].rows())
    throw InvalidInputError("basis d field disagrees with element dimension");
  return out;
}

inline Json family_to_json(const MuubFamily& f) {
  Json bases = Json::array();
  for (const OperatorBasis& b : f.bases) bases.push_back(basis_to_json(b));
  return Json{{"constant", round12(f.constant)}, {"bases", bases}};
}

inline std::vector<std::vector<Matrix>> family_elements_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("bases") || !j["bases"].is_array())
    throw InvalidInputError("family object needs a bases array");
  std::vector<std::vector<Matrix>> out;
  for (const Json& b : j["bases"]) out.push_back(basis_elements_from_json(b));
  return out;
}

// ── reports ──────────────────────────────────────────────────────────────────

inline Json search_report_to_json(const SearchReport& r) {
  Json unitaries = Json::array();
  for (const Matrix& m : r.unitaries) unitaries.push_back(matrix_to_json(m));
  Json bases = Json::array();
  for (const OperatorBasis& b : r.bases) bases.push_back(basis_to_json(b));
  Json families = Json::array();
  for (const MuubFamily& f : r.families) families.push_back(family_to_json(f));
  return Json{{"d", r.d},
              {"n", r.n},
              {"phase_order", r.order},
              {"candidates_scanned", r.candidates_scanned},
              {"unitaries_found", unitaries},
              {"bases", bases},
              {"families", families}};
}

inline Json entangled_basis_to_json(const EntangledBasis& b) {
  Json states = Json::array();
  for (const Vector& s : b.states) states.push_back(state_to_json(s));
  return Json{{"d", b.d}, {"states", states}};
}

inline Json n3_report_to_json(const N3Report& r) {
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    Json overlaps = Json::array();
    for (double v : p.span_overlaps) overlaps.push_back(round12(v));
    pairs.push_back(Json{{"i", p.i},
                         {"j", p.j},
                         {"span_overlaps", overlaps},
                         {"product_norm_sq", round12(p.product_norm_sq)},
                         {"survivors_order4", p.survivors_order4},
                         {"complete_bases_order4", p.complete_bases_order4},
                         {"survivors_order8", p.survivors_order8},
                         {"complete_bases_order8", p.complete_bases_order8}});
  }
  return Json{{"pairs", pairs}, {"nonexistence_certified", r.nonexistence_certified}};
}

inline Json fidelity_to_json(const FidelityResult& f) {
  return Json{{"value", round12(f.value)},
              {"mode", f.mode},
              {"trials", f.trials},
              {"std_error", round12(f.std_error)}};
}

inline Json mapping_table_to_json(const MappingTable& t) {
  Json table = Json::array(), formula = Json::array(), diffs = Json::array();
  for (int i = 0; i < 3; ++i) {
    Json row = Json::array(), frow = Json::array();
    for (int j = 0; j < 3; ++j) {
      row.push_back(t.image[i][j]);
      frow.push_back(t.mod2_formula(i, j));
      if (t.image[i][j] != t.mod2_formula(i, j))
        diffs.push_back(Json{{"i", i},
                             {"j", j},
                             {"computed", t.image[i][j]},
                             {"mod2_formula", t.mod2_formula(i, j)}});
    }
    table.push_back(row);
    formula.push_back(frow);
  }
  return Json{{"table", table},
              {"mod2_formula", formula},
              {"matches_mod2_formula", t.matches_mod2_formula()},
              {"discrepancies", diffs}};
}

inline Json orbit_check_to_json(const OrbitCheck& o) {
  return Json{
      {"ok", o.ok}, {"basis_index", o.basis_index}, {"distinct_states", o.distinct_states}};
}

inline const char* axis_name(Axis a) {
  switch (a) {
    case Axis::Z: return "Z";
    case Axis::X: return "X";
    default: return "Y";
  }
}

inline Json round_record_to_json(const RoundRecord& r) {
  Json j{{"bob_prep_basis", axis_name(r.bob_prep_basis)},
         {"bob_prep_bit", r.bob_prep_bit},
         {"alice_basis", r.alice_basis},
         {"alice_element", r.alice_element},
         {"alice_bit", r.alice_bit},
         {"bob_meas_basis", axis_name(r.bob_meas_basis)},
         {"bob_outcome", r.bob_outcome},
         {"sifted", r.sifted},
         {"eve_bit_known", r.eve_bit_known}};
  j["bob_bit"] = r.bob_bit ? Json(*r.bob_bit) : Json(nullptr);
  j["eve_meas_basis"] = r.eve_meas_basis ? Json(*r.eve_meas_basis) : Json(nullptr);
  return j;
}

inline Json qkd_report_to_json(const QkdReport& r) {
  Json per_basis = Json::array();
  for (int j = 0; j < 3; ++j) {
    const auto& s = r.per_basis[j];
    Json row{{"basis", j},
             {"rounds", s.rounds},
             {"sifted", s.sifted},
             {"sift_rate",
              s.rounds ? Json(round12(static_cast<double>(s.sifted) / s.rounds)) : Json(nullptr)},
             {"qber",
              s.sifted ? Json(round12(static_cast<double>(s.errors) / s.sifted)) : Json(nullptr)},
             {"eve_gain", s.sifted ? Json(round12(static_cast<double>(s.eve_known) / s.sifted))
                                   : Json(nullptr)}};
    per_basis.push_back(row);
  }
  Json weights = Json::array();
  for (double w : r.config.basis_weights) weights.push_back(round12(w));
  return Json{{"rounds", r.rounds},
              {"sift_rate", round12(r.sift_rate)},
              {"qber", r.qber ? Json(round12(*r.qber)) : Json(nullptr)},
              {"eve_gain", round12(r.eve_gain)},
              {"per_basis", per_basis},
              {"eve", r.config.eve},
              {"seed", r.config.seed},
              {"basis_weights", weights}};
}

// ── file helpers ─────────────────────────────────────────────────────────────

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open file: " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw InvalidInputError("not valid JSON: " + path);
  return j;
}

// Pools every matrix found in a matrix, basis, or family document.
inline std::vector<Matrix> matrices_from_document(const Json& j) {
  std::vector<Matrix> out;
  if (j.contains("entries")) {
    out.push_back(matrix_from_json(j));
  } else if (j.contains("elements")) {
    for (Matrix& m : basis_elements_from_json(j)) out.push_back(std::move(m));
  } else if (j.contains("bases")) {
    for (auto& basis : family_elements_from_json(j))
      for (Matrix& m : basis) out.push_back(std::move(m));
  } else {
    throw InvalidInputError("document holds no matrix, basis, or family");
  }
  return out;
}

}  // namespace muub
