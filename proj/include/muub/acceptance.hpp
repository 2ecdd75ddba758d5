#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "muub/basis.hpp"
#include "muub/pauli.hpp"
#include "muub/qkd.hpp"
#include "muub/rng.hpp"
#include "muub/search.hpp"
#include "muub/state_iso.hpp"

// Self-check suite: one entry per release criterion, executed end to end with
// fixed seeds and pinned tolerances.  Shared by the muub CLI (reproduce-all)
// and the acceptance test binary.

namespace muub {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double ms = 0.0;
};

// ── matching helpers ─────────────────────────────────────────────────────────

// Every element of a matches a distinct element of b up to a global phase.
inline bool basis_matches_up_to_phase(const OperatorBasis& a, const OperatorBasis& b,
                                      double tol = kEps) {
  if (a.d != b.d || a.n != b.n) return false;
  std::vector<bool> used(b.elements.size(), false);
  for (const Matrix& ma : a.elements) {
    bool found = false;
    for (std::size_t j = 0; j < b.elements.size() && !found; ++j)
      if (!used[j] && equal_up_to_phase(ma, b.elements[j], tol)) {
        used[j] = true;
        found = true;
      }
    if (!found) return false;
  }
  return true;
}

// Families agree up to element phases and reordering of bases and elements.
inline bool family_matches_up_to_phase(const MuubFamily& a, const MuubFamily& b,
                                       double tol = kEps) {
  if (a.bases.size() != b.bases.size()) return false;
  std::vector<bool> used(b.bases.size(), false);
  for (const OperatorBasis& ba : a.bases) {
    bool found = false;
    for (std::size_t j = 0; j < b.bases.size() && !found; ++j)
      if (!used[j] && basis_matches_up_to_phase(ba, b.bases[j], tol)) {
        used[j] = true;
        found = true;
      }
    if (!found) return false;
  }
  return true;
}

namespace detail {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& label) {
    pass &= ok;
    if (!ok) detail << (detail.tellp() > 0 ? "; " : "") << "FAILED: " << label;
  }
  void note(const std::string& label) {
    detail << (detail.tellp() > 0 ? "; " : "") << label;
  }
};

inline CriterionResult run_criterion(int id, const std::string& name, double time_limit_s,
                                     const std::function<void(Check&)>& body) {
  CriterionResult result;
  result.id = id;
  result.name = name;
  Check check;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("exception: ") + e.what());
  }
  result.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
  check.expect(result.ms < time_limit_s * 1000.0,
               "runtime " + std::to_string(result.ms) + " ms exceeds " +
                   std::to_string(time_limit_s) + " s");
  result.pass = check.pass;
  result.detail = check.detail.str();
  return result;
}

}  // namespace detail

inline std::vector<CriterionResult> run_acceptance_suite() {
  using detail::Check;
  std::vector<CriterionResult> results;
  const double tol = 1e-9;

  results.push_back(detail::run_criterion(1, "qubit family certifies with C = 1", 0.1, [&](Check& c) {
    const MuubFamily fam = builtin_qubit_family(tol);
    c.expect(fam.bases.size() == 3, "expected 3 bases");
    c.expect(std::abs(fam.constant - 1.0) <= tol, "constant != 1");
    int unitary = 0;
    for (const auto& b : fam.bases)
      for (const auto& m : b.elements) unitary += is_unitary(m, tol);
    c.expect(unitary == 12, "expected 12 unitary elements");
    c.note("C = " + std::to_string(fam.constant) + ", elements = " + std::to_string(unitary));
  }));

  results.push_back(detail::run_criterion(2, "order-4 search recovers the qubit family", 0.1, [&](Check& c) {
    const MuubFamily fam = builtin_qubit_family(tol);
    const SearchReport r = phase_search(fam.bases[0], 4, tol);
    c.expect(r.candidates_scanned == 64, "expected 64 candidates");
    c.expect(r.unitaries.size() == 8, "expected 8 nonequivalent unitaries");
    c.expect(r.bases.size() == 2, "expected 2 bases");
    c.expect(r.families.size() == 1 && r.families[0].bases.size() == 3,
             "expected one family of 3");
    c.expect(!r.families.empty() && family_matches_up_to_phase(r.families[0], fam, tol),
             "family does not match the built-in one");
    c.note("scanned = " + std::to_string(r.candidates_scanned) +
           ", unitaries = " + std::to_string(r.unitaries.size()));
  }));

  results.push_back(detail::run_criterion(3, "no complete second basis exists at n = 3", 1.0, [&](Check& c) {
    const N3Report report = certify_n3_nonexistence(tol);
    c.expect(report.pairs.size() == 3, "expected 3 axis pairs");
    for (const auto& p : report.pairs) {
      for (double v : p.span_overlaps)
        c.expect(v <= tol, "span overlap not zero for pair");
      c.expect(std::abs(p.product_norm_sq - 2.0) <= tol, "product norm^2 != 2");
      c.expect(p.complete_bases_order4 == 0 && p.complete_bases_order8 == 0,
               "search found a complete basis");
    }
    c.expect(report.nonexistence_certified, "certificate flag not set");
  }));

  results.push_back(detail::run_criterion(4, "n = 2 families certify with C = 2", 0.1, [&](Check& c) {
    for (int axis : {2, 3}) {
      const MuubFamily fam = builtin_qubit_n2(axis, tol);
      c.expect(fam.bases.size() == 2, "expected 2 bases for axis " + std::to_string(axis));
      c.expect(std::abs(fam.constant - 2.0) <= tol, "constant != 2");
    }
    const OperatorBasis seed = certify_basis({pauli(0), pauli(3)}, tol);
    const SearchReport r = phase_search(seed, 4, tol);
    c.expect(r.bases.size() == 1, "expected exactly one additional basis");
    c.note("search bases = " + std::to_string(r.bases.size()));
  }));

  results.push_back(detail::run_criterion(5, "order-3 qutrit search reaches a family of 8", 5.0, [&](Check& c) {
    const MuubFamily builtin = builtin_qutrit_family(tol);
    c.expect(builtin.bases.size() == 8 && std::abs(builtin.constant - 1.0) <= tol,
             "built-in family does not certify");
    const SearchReport r = phase_search(builtin.bases[0], 3, tol);
    c.expect(r.candidates_scanned == 6561, "expected 6561 candidates");
    c.expect(r.families.size() == 1, "expected a unique maximum family");
    if (!r.families.empty()) {
      const MuubFamily& fam = r.families[0];
      c.expect(fam.bases.size() == 8, "expected family of 8");
      c.expect(std::abs(fam.constant - 1.0) <= tol, "constant != 1");
      for (std::size_t l = 0; l < builtin.bases.size(); ++l) {
        bool found = false;
        for (const auto& fb : fam.bases)
          found |= basis_matches_up_to_phase(builtin.bases[l], fb, tol);
        c.expect(found, "transcribed basis " + std::to_string(l) + " not found in family");
      }
      c.note("survivors = " + std::to_string(r.unitaries.size()) +
             ", family size = " + std::to_string(fam.bases.size()));
    }
  }));

  results.push_back(detail::run_criterion(6, "qutrit subspace family and closure theorem", 1.0, [&](Check& c) {
    const MuubFamily fam = builtin_qutrit_subspace(WeylIndex{3, 1, 0}, tol);
    c.expect(fam.bases.size() == 3, "expected 3 subspace bases");
    c.expect(std::abs(fam.constant - 3.0) <= tol, "constant != 3");
    // Exhaustive over the 255 index sets of size >= 2 containing (0,0):
    // closure must hold exactly for the subgroups, whose sizes are 3 and 9.
    int accepted_3 = 0, accepted_9 = 0;
    std::vector<std::pair<int, int>> cells;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a || b) cells.push_back({a, b});
    for (int mask = 1; mask < 256; ++mask) {
      std::vector<std::pair<int, int>> set{{0, 0}};
      for (int bit = 0; bit < 8; ++bit)
        if (mask & (1 << bit)) set.push_back(cells[bit]);
      const bool closed = closure_check(set, 3);
      const std::size_t size = set.size();
      if (size != 3 && size != 9)
        c.expect(!closed, "accepted a set of size " + std::to_string(size));
      else if (closed)
        (size == 3 ? accepted_3 : accepted_9)++;
    }
    c.expect(accepted_3 == 4, "expected the 4 cyclic subgroups of size 3");
    c.expect(accepted_9 == 1, "expected the full grid accepted");
    c.note("closed sets: 4 of size 3, 1 of size 9, none elsewhere");
  }));

  results.push_back(detail::run_criterion(7, "prime-d entangled MUB recipe at d = 2, 3, 5", 5.0, [&](Check& c) {
    for (int d : {2, 3, 5}) {
      const auto mubs = prime_entangled_mubs(d);
      c.expect(mubs.size() == static_cast<std::size_t>(d + 1),
               "expected d+1 bases at d = " + std::to_string(d));
      for (const auto& b : mubs) {
        try {
          validate_entangled_basis(b, tol);  // orthonormal + reduced matrices I/d
        } catch (const Error& e) {
          c.expect(false, std::string("basis validation: ") + e.what());
        }
      }
      const double target = 1.0 / d;
      double worst = 0.0;
      for (std::size_t k = 0; k < mubs.size(); ++k)
        for (std::size_t l = k + 1; l < mubs.size(); ++l)
          for (const Vector& u : mubs[k].states)
            for (const Vector& v : mubs[l].states)
              worst = std::max(worst, std::abs(std::abs(u.dot(v)) - target));
      c.expect(worst <= tol, "cross overlap deviates at d = " + std::to_string(d));
    }
  }));

  results.push_back(detail::run_criterion(8, "twelve-unitary frame potential equals 2", 0.1, [&](Check& c) {
    const MuubFamily fam = builtin_qubit_family(tol);
    std::vector<Matrix> pool;
    for (const auto& b : fam.bases)
      for (const auto& m : b.elements) pool.push_back(m);
    const double fp = frame_potential(pool);
    c.expect(std::abs(fp - 2.0) <= tol, "frame potential != 2");
    c.note("frame potential = " + std::to_string(fp));
  }));

  results.push_back(detail::run_criterion(9, "average estimation fidelity is 1/2", 1.0, [&](Check& c) {
    const FidelityResult exact = average_fidelity_exact();
    c.expect(std::abs(exact.value - 0.5) <= 1e-12, "exact value != 0.5");
    Rng rng(1);
    const FidelityResult mc = average_fidelity_mc(100000, rng);
    c.expect(std::abs(mc.value - 0.5) <= 0.005, "Monte-Carlo value outside 0.5 +- 0.005");
    c.note("exact = " + std::to_string(exact.value) + ", mc = " + std::to_string(mc.value));
  }));

  results.push_back(detail::run_criterion(10, "covariant orbits and representation operators", 0.1, [&](Check& c) {
    const auto bases = bell_and_magic_bases();
    for (int k = 0; k < 3; ++k) {
      const OrbitCheck oc = covariant_orbit_check(h4_coordinates(bases[k].states[0]), tol);
      c.expect(oc.ok && oc.basis_index == k,
               "orbit check failed for basis " + std::to_string(k));
    }
    std::vector<Matrix> reps;
    for (std::uint8_t q = 0; q < 4; ++q)
      for (std::uint8_t w = 0; w < 4; ++w)
        reps.push_back(rep_operator(GF4Element(q), GF4Element(w)));
    for (std::size_t i = 0; i < reps.size(); ++i) {
      c.expect(is_unitary(reps[i], tol), "representation operator not unitary");
      for (std::size_t j = i + 1; j < reps.size(); ++j)
        c.expect(std::abs(hs_inner(reps[i], reps[j])) <= tol * 4,
                 "representation operators not orthogonal");
    }
  }));

  results.push_back(detail::run_criterion(11, "protocol figures: sift 1/3, honest QBER 0, Eve 1/3", 5.0, [&](Check& c) {
    ProtocolConfig cfg;
    cfg.rounds = 100000;
    cfg.seed = 7;
    const QkdReport honest = run_protocol(cfg);
    c.expect(honest.sift_rate >= 0.323 && honest.sift_rate <= 0.343,
             "honest sift rate outside [0.323, 0.343]");
    c.expect(honest.qber.has_value() && *honest.qber == 0.0, "honest QBER not exactly 0");
    cfg.eve = true;
    const QkdReport attacked = run_protocol(cfg);
    c.expect(attacked.qber && *attacked.qber >= 0.323 && *attacked.qber <= 0.343,
             "attacked QBER outside [0.323, 0.343]");
    c.expect(attacked.eve_gain >= 0.323 && attacked.eve_gain <= 0.343,
             "Eve gain outside [0.323, 0.343]");
    c.note("sift = " + std::to_string(honest.sift_rate) +
           ", qber(eve) = " + std::to_string(*attacked.qber) +
           ", gain = " + std::to_string(attacked.eve_gain));
  }));

  results.push_back(detail::run_criterion(12, "property suites (invariance, vectorization, overlap law)", 30.0, [&](Check& c) {
    // invariance of the unbiasedness constant under common left multiplication
    const MuubFamily fam = builtin_qubit_family(tol);
    Rng rng_a(101);
    int pass_a = 0;
    for (int k = 0; k < 100; ++k) {
      Rng local = rng_a.derive(k);
      const Matrix v = haar_random_unitary(2, local);
      std::vector<Matrix> x, z;
      for (const auto& m : fam.bases[0].elements) x.push_back(v * m);
      for (const auto& m : fam.bases[1].elements) z.push_back(v * m);
      const double cst =
          unbiasedness_constant(certify_basis(x, tol), certify_basis(z, tol), tol);
      pass_a += std::abs(cst - 1.0) <= tol;
    }
    c.expect(pass_a == 100, "left-multiplication invariance: " + std::to_string(pass_a) + "/100");

    // vectorization preserves inner products up to the 1/d factor
    Rng rng_b(202);
    int pass_b = 0;
    for (int k = 0; k < 100; ++k) {
      Rng local = rng_b.derive(k);
      const int d = (k % 2) ? 3 : 2;
      const Matrix a = haar_random_unitary(d, local);
      const Matrix b = haar_random_unitary(d, local);
      const Complex lhs = vectorize(a).dot(vectorize(b));
      const Complex rhs = hs_inner(a, b) / static_cast<double>(d);
      pass_b += std::abs(lhs - rhs) <= tol;
    }
    c.expect(pass_b == 100, "vectorization preservation: " + std::to_string(pass_b) + "/100");

    // state-averaged overlap: Monte-Carlo mean within 5 sigma of Tr(ur†u)/d
    Rng rng_c(303);
    int pass_c = 0;
    for (int k = 0; k < 20; ++k) {
      Rng local = rng_c.derive(k);
      const Matrix u = haar_random_unitary(2, local);
      const Matrix ur = haar_random_unitary(2, local);
      Rng sampler = local.derive(9999);
      const OverlapComparison ov = state_average_overlap(u, ur, 10000, sampler);
      const Complex expected = (ur.adjoint() * u).trace() / 2.0;
      pass_c += std::abs(ov.sample_mean - expected) <= 5.0 * ov.mean_std_error;
    }
    c.expect(pass_c == 20, "overlap law within 5 sigma: " + std::to_string(pass_c) + "/20");
    c.note("pass rates " + std::to_string(pass_a) + "/100, " + std::to_string(pass_b) +
           "/100, " + std::to_string(pass_c) + "/20");
  }));

  return results;
}

}  // namespace muub
