#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "muub/basis.hpp"
#include "muub/linalg.hpp"
#include "muub/rng.hpp"
#include "muub/state_iso.hpp"

namespace muub {

// Two-way protocol: Bob submits a qubit prepared in Z or X; Alice encodes with
// a unitary drawn from the qubit MUUB family and returns it; Bob measures in Z
// or X.  Alice later announces her basis index and which two-element subset
// her unitary came from.  A round is conclusive iff Bob's (prep, measure) pair
// matches the announced basis' action-table image; Bob then reads the bit off
// his outcome.  Bob never prepares or measures Y even though B1/B2 map into
// it, which is what makes the sift rate 1/3 = (1/3)(1/2 + 1/4 + 1/4) rather
// than 1/2.

struct ProtocolConfig {
  std::uint64_t rounds = 1;
  bool eve = false;
  std::uint64_t seed = 0;
  std::array<double, 3> basis_weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
  // Distribution of Eve's probe-measurement basis.  Uniform is the reference
  // attack; the knob exists so tests can degrade the protocol to a
  // single-basis scheme.
  std::array<double, 3> eve_basis_weights{1.0 / 3, 1.0 / 3, 1.0 / 3};
};

struct RoundRecord {
  Axis bob_prep_basis = Axis::Z;
  int bob_prep_bit = 0;
  int alice_basis = 0;
  int alice_element = 0;
  int alice_bit = 0;
  Axis bob_meas_basis = Axis::Z;
  int bob_outcome = 0;
  bool sifted = false;
  std::optional<int> bob_bit;        // present iff sifted
  std::optional<int> eve_meas_basis; // present iff Eve active
  bool eve_bit_known = false;
};

struct PerBasisStats {
  std::uint64_t rounds = 0;
  std::uint64_t sifted = 0;
  std::uint64_t errors = 0;
  std::uint64_t eve_known = 0;
};

struct QkdReport {
  std::uint64_t rounds = 0;
  double sift_rate = 0.0;
  std::optional<double> qber;  // over sifted rounds; absent if none sifted
  double eve_gain = 0.0;       // fraction of sifted bits Eve knows
  std::array<PerBasisStats, 3> per_basis{};
  ProtocolConfig config;
};

// The two announced subsets of a basis, with the canonical 0,1,1,0 bit
// assignment per element.
struct ConclusiveSubsets {
  std::array<std::array<int, 2>, 2> pairs{};
  std::array<int, 4> bits{0, 1, 1, 0};
};

// Pairs chosen so that, for every preparation state of every conclusive
// (prep, measure) combination of the basis, the two paired elements produce
// orthogonal outputs and carry distinct bits.  First valid partition in
// canonical order; for B0 this recovers {I, σ2} / {σ1, σ3}.
inline ConclusiveSubsets conclusive_subsets(int basis_index, double tol = kEps) {
  if (basis_index < 0 || basis_index > 2)
    throw InvalidInputError("conclusive_subsets: basis index must be 0..2");
  const MuubFamily family = builtin_qubit_family(tol);
  const ActionTable action = basis_action_table(tol);
  const auto& elements = family.bases[basis_index].elements;

  std::vector<Axis> conclusive_preps;
  for (int p = 0; p < 2; ++p)
    if (action.out[basis_index][p] != Axis::Y)
      conclusive_preps.push_back(static_cast<Axis>(p));

  ConclusiveSubsets subsets;
  auto pair_valid = [&](int a, int b) {
    if (subsets.bits[a] == subsets.bits[b]) return false;
    for (Axis p : conclusive_preps)
      for (int e = 0; e < 2; ++e) {
        const Vector prep = axis_eigenstate(p, e);
        const Vector va = elements[a] * prep, vb = elements[b] * prep;
        if (std::abs(va.dot(vb)) > tol) return false;
      }
    return true;
  };
  static constexpr std::array<std::array<std::array<int, 2>, 2>, 3> partitions = {{
      {{{0, 1}, {2, 3}}},
      {{{0, 2}, {1, 3}}},
      {{{0, 3}, {1, 2}}},
  }};
  for (const auto& part : partitions)
    if (pair_valid(part[0][0], part[0][1]) && pair_valid(part[1][0], part[1][1])) {
      subsets.pairs = part;
      return subsets;
    }
  throw NoValidPairingError("conclusive_subsets: no distinguishable partition for basis " +
                            std::to_string(basis_index));
}

namespace detail {

// Precomputed protocol tables shared by all rounds.
struct ProtocolTables {
  MuubFamily family;
  ActionTable action;
  std::array<ConclusiveSubsets, 3> subsets;
  std::array<EntangledBasis, 3> state_bases;
  std::array<int, 3> probe_image;  // mapping-table image of B0 under each B_j
  Vector bell_probe;

  ProtocolTables()
      : family(builtin_qubit_family()),
        action(basis_action_table()),
        subsets{conclusive_subsets(0), conclusive_subsets(1), conclusive_subsets(2)},
        state_bases(bell_and_magic_bases()),
        bell_probe(bell_state(0)) {
    const MappingTable mapping = entangled_mapping_table();
    for (int j = 0; j < 3; ++j) probe_image[j] = mapping.image[0][j];
  }
};

inline int born_sample(const std::vector<double>& probs, Rng& rng) {
  double total = 0.0;
  for (double p : probs) total += p;
  double r = rng.next_double() * total;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    if (r < probs[i]) return static_cast<int>(i);
    r -= probs[i];
  }
  return static_cast<int>(probs.size()) - 1;
}

// Eve's intercept-resend: she stores Bob's qubit, sends one half of |Φ⁺⟩
// through Alice's encoding, measures the probe in a random basis B_m, commits
// to the unitary whose vectorization matches her outcome, and applies that
// estimate to the stored qubit.  Returns the qubit forwarded to Bob.
inline Vector eve_intercept_resend(const ProtocolTables& tables, const Matrix& alice_unitary,
                                   int alice_basis, const Vector& stored_qubit, Rng& rng,
                                   const std::array<double, 3>& eve_weights, int& eve_basis_out,
                                   bool& eve_bit_known_out) {
  const Matrix id2 = Matrix::Identity(2, 2);
  const Vector probe = tensor(alice_unitary, id2) * tables.bell_probe;
  const int m = rng.next_weighted(eve_weights);
  std::vector<double> probs(4);
  for (int s = 0; s < 4; ++s) probs[s] = std::norm(tables.state_bases[m].states[s].dot(probe));
  const int outcome = born_sample(probs, rng);
  // (W ⊗ I)|Φ⁺⟩ = |Wᵀ⟩⟩/√2, so the encoding consistent with outcome
  // vec(B_m[outcome]) is its transpose.
  const Matrix estimate = tables.family.bases[m].elements[outcome].transpose();
  eve_basis_out = m;
  eve_bit_known_out = (m == tables.probe_image[alice_basis]);
  return estimate * stored_qubit;
}

}  // namespace detail

// Seeded Monte-Carlo run of the protocol.  Rounds draw from per-round derived
// seeds, so reports are reproducible and independent of evaluation order.  An
// optional sink receives every RoundRecord (round dumps).
inline QkdReport run_protocol(const ProtocolConfig& config,
                              const std::function<void(const RoundRecord&)>& sink = nullptr) {
  if (config.rounds < 1) throw InvalidInputError("run_protocol: rounds must be >= 1");
  for (double w : config.basis_weights)
    if (w < 0) throw InvalidInputError("run_protocol: weights must be nonnegative");

  static const detail::ProtocolTables tables;
  const Rng root(config.seed);

  QkdReport report;
  report.config = config;
  report.rounds = config.rounds;
  std::uint64_t sifted = 0, errors = 0, eve_known_count = 0;

  for (std::uint64_t round = 0; round < config.rounds; ++round) {
    Rng rng = root.derive(round);
    RoundRecord rec;

    rec.bob_prep_basis = static_cast<Axis>(rng.next_below(2));
    rec.bob_prep_bit = static_cast<int>(rng.next_below(2));
    const Vector prep = axis_eigenstate(rec.bob_prep_basis, rec.bob_prep_bit);

    rec.alice_basis = rng.next_weighted(config.basis_weights);
    rec.alice_element = static_cast<int>(rng.next_below(4));
    const auto& subsets = tables.subsets[rec.alice_basis];
    rec.alice_bit = subsets.bits[rec.alice_element];
    const Matrix& alice_u = tables.family.bases[rec.alice_basis].elements[rec.alice_element];

    Vector to_bob;
    if (config.eve) {
      int eve_basis = 0;
      bool known = false;
      to_bob = detail::eve_intercept_resend(tables, alice_u, rec.alice_basis, prep, rng,
                                            config.eve_basis_weights, eve_basis, known);
      rec.eve_meas_basis = eve_basis;
      rec.eve_bit_known = known;
    } else {
      to_bob = alice_u * prep;
    }

    rec.bob_meas_basis = static_cast<Axis>(rng.next_below(2));
    std::vector<double> probs(2);
    for (int o = 0; o < 2; ++o)
      probs[o] = std::norm(axis_eigenstate(rec.bob_meas_basis, o).dot(to_bob));
    rec.bob_outcome = detail::born_sample(probs, rng);

    rec.sifted = tables.action.out[rec.alice_basis][static_cast<int>(rec.bob_prep_basis)] ==
                 rec.bob_meas_basis;
    if (rec.sifted) {
      // Announced subset: within it, the outcome identifies the element.
      const Vector outcome_state = axis_eigenstate(rec.bob_meas_basis, rec.bob_outcome);
      const auto& pair =
          (rec.alice_element == subsets.pairs[0][0] || rec.alice_element == subsets.pairs[0][1])
              ? subsets.pairs[0]
              : subsets.pairs[1];
      for (int f : pair) {
        const Vector image = tables.family.bases[rec.alice_basis].elements[f] * prep;
        if (states_equal_up_to_phase(image, outcome_state)) {
          rec.bob_bit = subsets.bits[f];
          break;
        }
      }
      ++sifted;
      auto& stats = report.per_basis[rec.alice_basis];
      ++stats.sifted;
      if (!rec.bob_bit || *rec.bob_bit != rec.alice_bit) {
        ++errors;
        ++stats.errors;
      }
      if (rec.eve_bit_known) {
        ++eve_known_count;
        ++stats.eve_known;
      }
    }
    ++report.per_basis[rec.alice_basis].rounds;
    if (sink) sink(rec);
  }

  report.sift_rate = static_cast<double>(sifted) / static_cast<double>(config.rounds);
  if (sifted > 0) {
    report.qber = static_cast<double>(errors) / static_cast<double>(sifted);
    report.eve_gain = static_cast<double>(eve_known_count) / static_cast<double>(sifted);
  }
  return report;
}

}  // namespace muub
