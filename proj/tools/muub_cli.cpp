// muub — construct, search for, certify, and apply mutually unbiased unitary
// bases on small Hilbert spaces.
//
// Exit codes: 0 success, 2 mathematical certification failure (machine-
// readable JSON error on stdout), 64 usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "muub/muub.hpp"

namespace {

using muub::Json;

void emit(const Json& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw muub::InvalidInputError("cannot open output file: " + out_path);
  out << payload.dump(2) << "\n";
}

std::vector<std::pair<int, int>> parse_index_set(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::string digits;
  std::vector<int> nums;
  for (char ch : text) {
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-') {
      digits += ch;
    } else if (!digits.empty()) {
      nums.push_back(std::stoi(digits));
      digits.clear();
    }
  }
  if (!digits.empty()) nums.push_back(std::stoi(digits));
  if (nums.empty() || nums.size() % 2 != 0)
    throw muub::InvalidInputError("closure: --set expects pairs like \"(0,0),(0,1)\"");
  for (std::size_t k = 0; k < nums.size(); k += 2) out.push_back({nums[k], nums[k + 1]});
  return out;
}

std::array<double, 3> parse_weights(const std::string& text) {
  std::array<double, 3> w{};
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',') && i < 3) w[i++] = std::stod(item);
  if (i != 3) throw muub::InvalidInputError("qkd: --weights expects three comma-separated reals");
  double total = w[0] + w[1] + w[2];
  if (w[0] < 0 || w[1] < 0 || w[2] < 0 || total <= 0)
    throw muub::InvalidInputError("qkd: weights must be nonnegative with positive sum");
  for (double& x : w) x /= total;
  return w;
}

muub::OperatorBasis basis_from_file(const std::string& path, int index, double tol) {
  const Json doc = muub::load_json_file(path);
  if (doc.contains("bases")) {
    const auto families = muub::family_elements_from_json(doc);
    if (index < 0 || index >= static_cast<int>(families.size()))
      throw muub::InvalidInputError(path + " is a family file; select a basis with --index in 0.." +
                                    std::to_string(families.size() - 1));
    return muub::certify_basis(families[index], tol);
  }
  return muub::certify_basis(muub::basis_elements_from_json(doc), tol);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mutually unbiased unitary bases: constructions, search, certification, applications"};
  app.require_subcommand(1);

  Json payload;
  int exit_code = 0;
  const double tol = muub::kEps;

  // ── builtin ────────────────────────────────────────────────────────────────
  auto* builtin = app.add_subcommand("builtin", "emit built-in operators and families");
  builtin->require_subcommand(1);

  struct {
    int d = 2, a = 0, b = 0;
    std::string out;
  } weyl_opts;
  auto* weyl_cmd = builtin->add_subcommand("weyl", "generalized Pauli operator X^a Z^b");
  weyl_cmd->add_option("--d", weyl_opts.d, "dimension")->required();
  weyl_cmd->add_option("--a", weyl_opts.a, "X exponent");
  weyl_cmd->add_option("--b", weyl_opts.b, "Z exponent");
  weyl_cmd->add_option("--out", weyl_opts.out, "output file (default stdout)");
  weyl_cmd->callback([&] {
    payload = muub::matrix_to_json(muub::weyl(weyl_opts.d, weyl_opts.a, weyl_opts.b));
    emit(payload, weyl_opts.out);
  });

  std::string qubit_family_out;
  auto* qf_cmd = builtin->add_subcommand("qubit-family", "the three-basis qubit family, C = 1");
  qf_cmd->add_option("--out", qubit_family_out, "output file (default stdout)");
  qf_cmd->callback([&] {
    emit(muub::family_to_json(muub::builtin_qubit_family(tol)), qubit_family_out);
  });

  struct {
    int axis = 3;
    std::string out;
  } n2_opts;
  auto* n2_cmd = builtin->add_subcommand("qubit-n2", "the two-basis n = 2 family, C = 2");
  n2_cmd->add_option("--axis", n2_opts.axis, "Pauli axis, 2 or 3")->required();
  n2_cmd->add_option("--out", n2_opts.out, "output file (default stdout)");
  n2_cmd->callback([&] {
    emit(muub::family_to_json(muub::builtin_qubit_n2(n2_opts.axis, tol)), n2_opts.out);
  });

  std::string qutrit_family_out;
  auto* qt_cmd = builtin->add_subcommand("qutrit-family", "the eight-basis qutrit family, C = 1");
  qt_cmd->add_option("--out", qutrit_family_out, "output file (default stdout)");
  qt_cmd->callback([&] {
    emit(muub::family_to_json(muub::builtin_qutrit_family(tol)), qutrit_family_out);
  });

  struct {
    int a = 1, b = 0;
    std::string out;
  } sub_opts;
  auto* sub_cmd =
      builtin->add_subcommand("qutrit-subspace", "the three-basis qutrit subspace family, C = 3");
  sub_cmd->add_option("--a", sub_opts.a, "X exponent of the generator A");
  sub_cmd->add_option("--b", sub_opts.b, "Z exponent of the generator A");
  sub_cmd->add_option("--out", sub_opts.out, "output file (default stdout)");
  sub_cmd->callback([&] {
    emit(muub::family_to_json(
             muub::builtin_qutrit_subspace(muub::WeylIndex{3, sub_opts.a, sub_opts.b}, tol)),
         sub_opts.out);
  });

  // ── verification ───────────────────────────────────────────────────────────
  struct {
    std::string file, out;
  } vb_opts;
  auto* vb_cmd = app.add_subcommand("verify-basis", "certify an operator basis file");
  vb_cmd->add_option("file", vb_opts.file, "basis JSON file")->required();
  vb_cmd->add_option("--out", vb_opts.out, "output file (default stdout)");
  vb_cmd->callback([&] {
    const auto elements = muub::basis_elements_from_json(muub::load_json_file(vb_opts.file));
    emit(muub::basis_to_json(muub::certify_basis(elements, tol)), vb_opts.out);
  });

  struct {
    std::string file_a, file_b, out;
    int index_a = -1, index_b = -1;
  } vm_opts;
  auto* vm_cmd = app.add_subcommand("verify-muub", "certify mutual unbiasedness of two bases");
  vm_cmd->add_option("file_a", vm_opts.file_a, "first basis JSON file")->required();
  vm_cmd->add_option("file_b", vm_opts.file_b, "second basis JSON file")->required();
  vm_cmd->add_option("--index-a", vm_opts.index_a, "basis index when file_a is a family");
  vm_cmd->add_option("--index-b", vm_opts.index_b, "basis index when file_b is a family");
  vm_cmd->add_option("--out", vm_opts.out, "output file (default stdout)");
  vm_cmd->callback([&] {
    const auto a = basis_from_file(vm_opts.file_a, vm_opts.index_a, tol);
    const auto b = basis_from_file(vm_opts.file_b, vm_opts.index_b, tol);
    const double c = muub::unbiasedness_constant(a, b, tol);
    emit(Json{{"constant", muub::round12(c)}, {"d", a.d}, {"n", a.n}}, vm_opts.out);
  });

  struct {
    std::vector<std::string> files;
    std::string out;
  } fp_opts;
  auto* fp_cmd = app.add_subcommand("frame-potential",
                                    "frame potential of all unitaries in the given files");
  fp_cmd->add_option("files", fp_opts.files, "matrix, basis, or family JSON files")->required();
  fp_cmd->add_option("--out", fp_opts.out, "output file (default stdout)");
  fp_cmd->callback([&] {
    std::vector<muub::Matrix> pool;
    for (const auto& f : fp_opts.files)
      for (auto& m : muub::matrices_from_document(muub::load_json_file(f)))
        pool.push_back(std::move(m));
    emit(Json{{"count", pool.size()}, {"frame_potential", muub::round12(muub::frame_potential(pool, tol))}},
         fp_opts.out);
  });

  // ── search ─────────────────────────────────────────────────────────────────
  struct {
    int d = 2, n = 4, order = 0;
    std::string seed_file, out;
    bool force = false;
  } search_opts;
  auto* search_cmd = app.add_subcommand("search", "exhaustive root-of-unity phase search");
  search_cmd->add_option("--d", search_opts.d, "Hilbert space dimension")->required();
  search_cmd->add_option("--n", search_opts.n, "subspace dimension")->required();
  search_cmd->add_option("--seed-file", search_opts.seed_file, "seed basis JSON file");
  search_cmd->add_option("--phase-order", search_opts.order,
                         "phase order r (default 4 for d = 2, d otherwise)");
  search_cmd->add_flag("--force", search_opts.force, "ignore the candidate-count guard");
  search_cmd->add_option("--out", search_opts.out, "output file (default stdout)");
  search_cmd->callback([&] {
    muub::OperatorBasis seed =
        search_opts.seed_file.empty()
            ? muub::default_seed_basis(search_opts.d, search_opts.n, tol)
            : muub::certify_basis(
                  muub::basis_elements_from_json(muub::load_json_file(search_opts.seed_file)),
                  tol);
    if (seed.d != search_opts.d || seed.n != search_opts.n)
      throw muub::InvalidInputError("search: seed basis does not match --d/--n");
    const int order = search_opts.order > 0 ? search_opts.order : (search_opts.d == 2 ? 4 : search_opts.d);
    emit(muub::search_report_to_json(muub::phase_search(seed, order, tol, search_opts.force)),
         search_opts.out);
  });

  std::string n3_out;
  auto* n3_cmd = app.add_subcommand("nonexistence-n3",
                                    "certify that no second basis exists for n = 3");
  n3_cmd->add_option("--out", n3_out, "output file (default stdout)");
  n3_cmd->callback([&] {
    const muub::N3Report report = muub::certify_n3_nonexistence(tol);
    emit(muub::n3_report_to_json(report), n3_out);
    if (!report.nonexistence_certified) exit_code = 2;
  });

  struct {
    int d = 2;
    std::string set, out;
  } closure_opts;
  auto* closure_cmd = app.add_subcommand("closure", "index-set closure test (mod d)");
  closure_cmd->add_option("--d", closure_opts.d, "dimension")->required();
  closure_cmd->add_option("--set", closure_opts.set, "index pairs, e.g. \"(0,0),(0,1)\"")->required();
  closure_cmd->add_option("--out", closure_opts.out, "output file (default stdout)");
  closure_cmd->callback([&] {
    const auto set = parse_index_set(closure_opts.set);
    Json jset = Json::array();
    for (const auto& p : set) jset.push_back(Json::array({p.first, p.second}));
    emit(Json{{"d", closure_opts.d},
              {"set", jset},
              {"size", set.size()},
              {"closed", muub::closure_check(set, closure_opts.d)}},
         closure_opts.out);
  });

  // ── state isomorphism ──────────────────────────────────────────────────────
  struct {
    int d = 2;
    std::string out;
  } mub_opts;
  auto* mub_cmd = app.add_subcommand("mub-states",
                                     "d+1 mutually unbiased maximally entangled bases");
  mub_cmd->add_option("--d", mub_opts.d, "prime dimension <= 7")->required();
  mub_cmd->add_option("--out", mub_opts.out, "output file (default stdout)");
  mub_cmd->callback([&] {
    Json bases = Json::array();
    for (const auto& b : muub::prime_entangled_mubs(mub_opts.d))
      bases.push_back(muub::entangled_basis_to_json(b));
    emit(Json{{"d", mub_opts.d}, {"bases", bases}}, mub_opts.out);
  });

  struct {
    bool exact = false;
    std::uint64_t trials = 0;
    std::uint64_t seed = 1;
    int measure_basis = 0;
    std::string out;
  } fid_opts;
  auto* fid_cmd = app.add_subcommand("fidelity", "average estimation fidelity");
  fid_cmd->add_flag("--exact", fid_opts.exact, "exact sum (default unless --trials given)");
  fid_cmd->add_option("--trials", fid_opts.trials, "Monte-Carlo trials");
  fid_cmd->add_option("--seed", fid_opts.seed, "Monte-Carlo seed (default 1)");
  fid_cmd->add_option("--measure-basis", fid_opts.measure_basis, "measurement basis 0..2");
  fid_cmd->add_option("--out", fid_opts.out, "output file (default stdout)");
  fid_cmd->callback([&] {
    Json j;
    if (fid_opts.trials == 0 || fid_opts.exact) {
      j = muub::fidelity_to_json(muub::average_fidelity_exact(fid_opts.measure_basis));
    } else {
      muub::Rng rng(fid_opts.seed);
      j = muub::fidelity_to_json(
          muub::average_fidelity_mc(fid_opts.trials, rng, fid_opts.measure_basis));
      j["seed"] = fid_opts.seed;
    }
    j["measure_basis"] = fid_opts.measure_basis;
    emit(j, fid_opts.out);
  });

  std::string map_out;
  auto* map_cmd = app.add_subcommand("mapping-table",
                                     "computed basis image table of U⊗I on entangled bases");
  map_cmd->add_option("--out", map_out, "output file (default stdout)");
  map_cmd->callback([&] {
    emit(muub::mapping_table_to_json(muub::entangled_mapping_table(tol)), map_out);
  });

  struct {
    int basis = 0, index = 0;
    std::string out;
  } orbit_opts;
  auto* orbit_cmd = app.add_subcommand("orbit-check",
                                       "covariant-measurement orbit check of a basis state");
  orbit_cmd->add_option("--basis", orbit_opts.basis, "entangled basis 0..2")->required();
  orbit_cmd->add_option("--index", orbit_opts.index, "state index 0..3")->required();
  orbit_cmd->add_option("--out", orbit_opts.out, "output file (default stdout)");
  orbit_cmd->callback([&] {
    if (orbit_opts.basis < 0 || orbit_opts.basis > 2 || orbit_opts.index < 0 ||
        orbit_opts.index > 3)
      throw muub::InvalidInputError("orbit-check: basis in 0..2, index in 0..3");
    const auto bases = muub::bell_and_magic_bases();
    const muub::Vector initial =
        muub::h4_coordinates(bases[orbit_opts.basis].states[orbit_opts.index]);
    const muub::OrbitCheck oc = muub::covariant_orbit_check(initial, tol);
    Json j = muub::orbit_check_to_json(oc);
    j["requested_basis"] = orbit_opts.basis;
    j["requested_index"] = orbit_opts.index;
    emit(j, orbit_opts.out);
    if (!oc.ok) exit_code = 2;
  });

  // ── QKD ────────────────────────────────────────────────────────────────────
  struct {
    std::uint64_t rounds = 0;
    std::uint64_t seed = 7;
    bool eve = false;
    std::string weights, dump, out;
  } qkd_opts;
  auto* qkd_cmd = app.add_subcommand("qkd", "two-way protocol simulation");
  qkd_cmd->add_option("--rounds", qkd_opts.rounds, "number of rounds")->required();
  qkd_cmd->add_option("--seed", qkd_opts.seed, "simulation seed (default 7)");
  qkd_cmd->add_flag("--eve", qkd_opts.eve, "enable the intercept-resend eavesdropper");
  qkd_cmd->add_option("--weights", qkd_opts.weights, "Alice basis weights w0,w1,w2");
  qkd_cmd->add_option("--dump-rounds", qkd_opts.dump, "JSON-lines file of per-round records");
  qkd_cmd->add_option("--out", qkd_opts.out, "output file (default stdout)");
  qkd_cmd->callback([&] {
    muub::ProtocolConfig cfg;
    cfg.rounds = qkd_opts.rounds;
    cfg.seed = qkd_opts.seed;
    cfg.eve = qkd_opts.eve;
    if (!qkd_opts.weights.empty()) cfg.basis_weights = parse_weights(qkd_opts.weights);
    muub::QkdReport report;
    if (qkd_opts.dump.empty()) {
      report = muub::run_protocol(cfg);
    } else {
      std::ofstream dump(qkd_opts.dump);
      if (!dump) throw muub::InvalidInputError("cannot open dump file: " + qkd_opts.dump);
      report = muub::run_protocol(
          cfg, [&dump](const muub::RoundRecord& r) { dump << muub::round_record_to_json(r).dump() << "\n"; });
    }
    emit(muub::qkd_report_to_json(report), qkd_opts.out);
  });

  // ── reproduce-all ──────────────────────────────────────────────────────────
  std::string repro_out;
  auto* repro_cmd = app.add_subcommand("reproduce-all",
                                       "run every release criterion and report pass/fail");
  repro_cmd->add_option("--out", repro_out, "output file (default stdout)");
  repro_cmd->callback([&] {
    const auto results = muub::run_acceptance_suite();
    Json rows = Json::array();
    bool all_pass = true;
    for (const auto& r : results) {
      std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << " ("
                << muub::round12(r.ms) << " ms)" << (r.detail.empty() ? "" : "  -- " + r.detail)
                << "\n";
      rows.push_back(Json{{"id", r.id},
                          {"name", r.name},
                          {"pass", r.pass},
                          {"detail", r.detail},
                          {"ms", muub::round12(r.ms)}});
      all_pass &= r.pass;
    }
    emit(Json{{"criteria", rows}, {"all_pass", all_pass}}, repro_out);
    if (!all_pass) exit_code = 2;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 64;
  } catch (const muub::Error& e) {
    std::cout << Json{{"error", {{"kind", e.kind()}, {"message", e.what()}}}}.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << Json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump(2) << "\n";
    return 2;
  }
  return exit_code;
}
