#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "muub/basis.hpp"
#include "muub/linalg.hpp"
#include "muub/pauli.hpp"
#include "muub/rng.hpp"

namespace muub {

// Basis of d² maximally entangled states of H_d ⊗ H_d.
struct EntangledBasis {
  int d = 0;
  std::vector<Vector> states;
};

// ── Bell / magic bases ───────────────────────────────────────────────────────
// Sign convention pinned here: |Ψ⁻⟩ = (|10⟩ - |01⟩)/√2.  With this choice the
// magic-basis parity Π c_j = (-1)^k and the vectorization images of the qubit
// family agree at the same time: B_k[i] = vectorize(B_k qubit element i)
// exactly for k = 1, 2.

inline Vector bell_state(int which) {
  Vector v = Vector::Zero(4);
  const double s = 1.0 / std::sqrt(2.0);
  switch (which) {
    case 0: v(0) = s; v(3) = s; break;    // |Φ⁺⟩
    case 1: v(1) = s; v(2) = s; break;    // |Ψ⁺⟩
    case 2: v(1) = -s; v(2) = s; break;   // |Ψ⁻⟩ = (|10⟩-|01⟩)/√2
    case 3: v(0) = s; v(3) = -s; break;   // |Φ⁻⟩
    default: throw InvalidInputError("bell_state: index must be in 0..3");
  }
  return v;
}

// The three mutually unbiased bases of maximally entangled two-qubit states:
// B0 is the Bell set; B1, B2 are built on the magic basis
// {|Φ⁺⟩, i|Ψ⁺⟩, |Ψ⁻⟩, i|Φ⁻⟩} with sign products (-1)^k.
inline std::array<EntangledBasis, 3> bell_and_magic_bases() {
  std::array<EntangledBasis, 3> out;
  out[0].d = 2;
  for (int i = 0; i < 4; ++i) out[0].states.push_back(bell_state(i));
  std::array<Vector, 4> magic = {bell_state(0), Complex(0, 1) * bell_state(1), bell_state(2),
                                 Complex(0, 1) * bell_state(3)};
  for (int k = 1; k <= 2; ++k) {
    out[k].d = 2;
    for (const auto& c : qubit_family_signs(k)) {
      Vector v = magic[0];
      for (int j = 0; j < 3; ++j) v += static_cast<double>(c[j]) * magic[j + 1];
      out[k].states.push_back(v / 2.0);
    }
  }
  return out;
}

// Index of the basis state equal to psi up to a global phase, if any.
inline std::optional<int> find_state_in_basis(const Vector& psi, const EntangledBasis& basis,
                                              double tol = kEps) {
  for (std::size_t i = 0; i < basis.states.size(); ++i)
    if (states_equal_up_to_phase(psi, basis.states[i], tol)) return static_cast<int>(i);
  return std::nullopt;
}

// States orthonormal and all reduced density matrices maximally mixed.
inline void validate_entangled_basis(const EntangledBasis& basis, double tol = kEps) {
  const Eigen::Index d = basis.d;
  if (basis.states.size() != static_cast<std::size_t>(d * d))
    throw InvalidInputError("validate_entangled_basis: need d^2 states");
  for (std::size_t i = 0; i < basis.states.size(); ++i) {
    const Vector& s = basis.states[i];
    if (s.size() != d * d) throw DimError("validate_entangled_basis: state dimension");
    if (std::abs(s.norm() - 1.0) > tol)
      throw InvalidInputError("validate_entangled_basis: state " + std::to_string(i) +
                              " not normalized");
    const Matrix mixed = Matrix::Identity(d, d) / static_cast<double>(d);
    if ((partial_trace_first(s, d) - mixed).cwiseAbs().maxCoeff() > tol ||
        (partial_trace_second(s, d) - mixed).cwiseAbs().maxCoeff() > tol)
      throw InvalidInputError("validate_entangled_basis: state " + std::to_string(i) +
                              " not maximally entangled");
    for (std::size_t j = i + 1; j < basis.states.size(); ++j)
      if (std::abs(s.dot(basis.states[j])) > tol)
        throw NotOrthogonalError(i, j, "validate_entangled_basis: states not orthogonal");
  }
}

// ── prime-d entangled MUB recipe ─────────────────────────────────────────────

namespace detail {

inline bool is_prime(int d) {
  if (d < 2) return false;
  for (int k = 2; k * k <= d; ++k)
    if (d % k == 0) return false;
  return true;
}

// Base basis state |U_d^{n,m}⟩⟩ = (1/√d) Σ_p η_d^{np} |(p+m) mod d⟩|p⟩.
inline Vector entangled_base_state(int d, int n, int m) {
  Vector v = Vector::Zero(d * d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int p = 0; p < d; ++p)
    v(((p + m) % d) * d + p) = eta_pow(d, static_cast<long long>(n) * p) * s;
  return v;
}

// I ⊗ V acting on a state of H_d ⊗ H_d in the i*d+j index convention.
inline Vector apply_second(const Matrix& v, const Vector& s, int d) {
  Vector out = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i)
    for (int l = 0; l < d; ++l) {
      Complex acc = 0;
      for (int j = 0; j < d; ++j) acc += v(l, j) * s(i * d + j);
      out(i * d + l) = acc;
    }
  return out;
}

// Weyl-phase unitary (1/d) Σ_{a,b} η_d^{αa² + βab + γb²} X^a Z^b.  Unitary iff
// 4αγ - β(β-1) ≠ 0 mod d; the quotient of two such operators stays fully
// Weyl-spread iff the difference quadratic form is nondegenerate, which is
// what makes the resulting entangled bases pairwise unbiased.
inline Matrix quadratic_weyl_unitary(int d, int alpha, int beta, int gamma) {
  Matrix u = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const long long e = static_cast<long long>(alpha) * a * a +
                          static_cast<long long>(beta) * a * b +
                          static_cast<long long>(gamma) * b * b;
      u += eta_pow(d, e) * weyl(d, a, b);
    }
  return u / static_cast<double>(d);
}

// Transition unitaries for odd prime d: the scalar family t(a² + b²) for
// t = 1..d-1 plus one extra quadratic form whose matrix has no eigenvalue in
// Z_d^* (first fit in lexicographic order), giving d transitions with all
// pairwise difference forms nondegenerate.
inline std::vector<Matrix> odd_prime_transitions(int d) {
  std::vector<Matrix> out;
  for (int t = 1; t < d; ++t) out.push_back(quadratic_weyl_unitary(d, t, 0, t));
  auto mod = [d](long long x) { return static_cast<int>(((x % d) + d) % d); };
  for (int alpha = 0; alpha < d; ++alpha)
    for (int beta = 0; beta < d; ++beta)
      for (int gamma = 0; gamma < d; ++gamma) {
        if (mod(4LL * alpha * gamma - static_cast<long long>(beta) * (beta - 1)) == 0)
          continue;  // not unitary
        bool ok = true;
        for (int t = 1; t < d && ok; ++t)
          ok = mod(4LL * (alpha - t) * (gamma - t) - static_cast<long long>(beta) * beta) != 0;
        if (!ok) continue;
        out.push_back(quadratic_weyl_unitary(d, alpha, beta, gamma));
        return out;
      }
  throw InvalidInputError("odd_prime_transitions: no extra quadratic form found for d = " +
                          std::to_string(d));
}

}  // namespace detail

// d+1 pairwise mutually unbiased bases of maximally entangled states of
// H_d ⊗ H_d for prime d ≤ 7: the base basis {|U_d^{n,m}⟩⟩} plus d bases
// I ⊗ V_t |U_d^{n,m}⟩⟩ for transition unitaries V_t.  All cross-basis overlap
// moduli equal 1/d.
inline std::vector<EntangledBasis> prime_entangled_mubs(int d) {
  if (!detail::is_prime(d)) throw NonPrimeError("prime_entangled_mubs: d must be prime");
  if (d > 7) throw InvalidInputError("prime_entangled_mubs: d must be <= 7");

  EntangledBasis base;
  base.d = d;
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) base.states.push_back(detail::entangled_base_state(d, n, m));

  std::vector<Matrix> transitions;
  if (d == 2) {
    // representatives of the two phase bases; both are fully Pauli-spread
    transitions.push_back(detail::qubit_phase_element(qubit_family_signs(1)[0]));
    transitions.push_back(detail::qubit_phase_element(qubit_family_signs(2)[0]));
  } else {
    transitions = detail::odd_prime_transitions(d);
  }

  std::vector<EntangledBasis> out{base};
  for (const Matrix& v : transitions) {
    if (!is_unitary(v)) throw InvalidInputError("prime_entangled_mubs: transition not unitary");
    EntangledBasis eb;
    eb.d = d;
    for (const Vector& s : base.states) eb.states.push_back(detail::apply_second(v, s, d));
    out.push_back(std::move(eb));
  }
  return out;
}

// ── action and mapping tables ────────────────────────────────────────────────

// Single-qubit Pauli axes; values double as table indices.
enum class Axis : int { Z = 0, X = 1, Y = 2 };

inline Vector axis_eigenstate(Axis axis, int index) {
  Vector v(2);
  const double s = 1.0 / std::sqrt(2.0);
  switch (axis) {
    case Axis::Z: v << (index == 0 ? 1 : 0), (index == 0 ? 0 : 1); break;
    case Axis::X: v << s, (index == 0 ? s : -s); break;
    case Axis::Y: v << s, (index == 0 ? Complex(0, s) : Complex(0, -s)); break;
  }
  return v;
}

// Axis whose eigenstate equals psi up to phase, if any.
inline std::optional<std::pair<Axis, int>> classify_axis_state(const Vector& psi,
                                                               double tol = kEps) {
  for (Axis a : {Axis::Z, Axis::X, Axis::Y})
    for (int i = 0; i < 2; ++i)
      if (states_equal_up_to_phase(psi, axis_eigenstate(a, i), tol))
        return std::make_pair(a, i);
  return std::nullopt;
}

// out[j][p]: the axis every element of qubit basis B_j sends eigenstates of
// preparation axis p ∈ {Z, X} to.  All four elements of a basis must agree;
// a disagreement would falsify the protocol model and raises
// InconsistentActionError.
struct ActionTable {
  std::array<std::array<Axis, 2>, 3> out;
};

inline ActionTable basis_action_table(double tol = kEps) {
  const MuubFamily family = builtin_qubit_family(tol);
  ActionTable table{};
  for (int j = 0; j < 3; ++j)
    for (int p = 0; p < 2; ++p) {
      std::optional<Axis> common;
      for (const Matrix& u : family.bases[j].elements)
        for (int e = 0; e < 2; ++e) {
          const Vector psi = u * axis_eigenstate(static_cast<Axis>(p), e);
          const auto cls = classify_axis_state(psi, tol);
          if (!cls)
            throw InconsistentActionError("basis_action_table: output not a Pauli eigenstate");
          if (common && *common != cls->first)
            throw InconsistentActionError("basis_action_table: elements of basis " +
                                          std::to_string(j) + " disagree on prep axis " +
                                          std::to_string(p));
          common = cls->first;
        }
      table.out[j][p] = *common;
    }
  return table;
}

// image[i][j]: the unique k with (U ⊗ I)|ψ⟩ ∈ B_k (up to phase) for every
// |ψ⟩ ∈ B_i and U ∈ B_j, computed by brute force over all 16 pairs.  The
// closed-form guess "(i+j) mod 2" is kept alongside as a claim under test;
// consumers use the computed table only.
struct MappingTable {
  std::array<std::array<int, 3>, 3> image{};
  int mod2_formula(int i, int j) const { return (i + j) % 2; }
  bool matches_mod2_formula() const {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (image[i][j] != mod2_formula(i, j)) return false;
    return true;
  }
};

inline MappingTable entangled_mapping_table(double tol = kEps) {
  const auto state_bases = bell_and_magic_bases();
  const MuubFamily family = builtin_qubit_family(tol);
  const Matrix id2 = Matrix::Identity(2, 2);
  MappingTable table;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int common = -1;
      for (const Vector& psi : state_bases[i].states)
        for (const Matrix& u : family.bases[j].elements) {
          const Vector phi = tensor(u, id2) * psi;
          int k = -1;
          for (int cand = 0; cand < 3; ++cand)
            if (find_state_in_basis(phi, state_bases[cand], tol)) {
              k = cand;
              break;
            }
          if (k < 0 || (common >= 0 && k != common))
            throw NoConsistentImageError(i, j,
                                         "entangled_mapping_table: orbit of (" +
                                             std::to_string(i) + "," + std::to_string(j) +
                                             ") splits across bases");
          common = k;
        }
      table.image[i][j] = common;
    }
  return table;
}

// ── estimation fidelity ──────────────────────────────────────────────────────

struct FidelityResult {
  double value = 0.0;
  std::string mode;  // "exact" | "monte-carlo"
  std::uint64_t trials = 0;
  double std_error = 0.0;
};

// Exact average estimation fidelity (1/12) Σ_{u,s} P(s|u) |⟨s|u⟩|² for inputs
// uniform over the twelve states of B0 ∪ B1 ∪ B2 and orthogonal measurement
// onto B_measure.
inline FidelityResult average_fidelity_exact(int measure_basis = 0) {
  if (measure_basis < 0 || measure_basis > 2)
    throw InvalidInputError("average_fidelity_exact: basis index must be 0..2");
  const auto bases = bell_and_magic_bases();
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& basis : bases)
    for (const Vector& u : basis.states) {
      for (const Vector& s : bases[measure_basis].states) {
        const double overlap = std::norm(s.dot(u));
        sum += overlap * overlap;  // P(s|u)·|⟨s|u⟩|² with Born P(s|u) = |⟨s|u⟩|²
      }
      ++count;
    }
  return FidelityResult{sum / static_cast<double>(count), "exact", 0, 0.0};
}

// Monte-Carlo estimate over an explicit input pool (test hook); the public
// operation below uses the full twelve-state pool.
inline FidelityResult average_fidelity_mc_pool(const std::vector<Vector>& pool,
                                               const EntangledBasis& measure,
                                               std::uint64_t trials, Rng& rng) {
  if (trials < 1) throw InvalidInputError("average_fidelity_mc: trials must be >= 1");
  const Rng root(rng.next_u64());  // consume once so repeated calls differ
  double sum = 0.0, sum_sq = 0.0;
  std::vector<double> probs(measure.states.size());
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng local = root.derive(t);
    const Vector& u = pool[local.next_below(pool.size())];
    double acc = 0.0;
    for (std::size_t s = 0; s < measure.states.size(); ++s) {
      probs[s] = std::norm(measure.states[s].dot(u));
      acc += probs[s];
    }
    double r = local.next_double() * acc;
    std::size_t outcome = measure.states.size() - 1;
    for (std::size_t s = 0; s < measure.states.size(); ++s) {
      if (r < probs[s]) {
        outcome = s;
        break;
      }
      r -= probs[s];
    }
    const double x = std::norm(measure.states[outcome].dot(u));
    sum += x;
    sum_sq += x * x;
  }
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return FidelityResult{mean, "monte-carlo", trials,
                        std::sqrt(var / std::max(1.0, n - 1.0))};
}

inline FidelityResult average_fidelity_mc(std::uint64_t trials, Rng& rng,
                                          int measure_basis = 0) {
  const auto bases = bell_and_magic_bases();
  std::vector<Vector> pool;
  for (const auto& b : bases)
    for (const Vector& s : b.states) pool.push_back(s);
  return average_fidelity_mc_pool(pool, bases[measure_basis], trials, rng);
}

// ── state-averaged overlap (guess quality of a unitary estimate) ─────────────

struct OverlapComparison {
  double monte_carlo = 0.0;   // |empirical mean of ⟨α|ur†u|α⟩|²
  double closed_form = 0.0;   // |Tr(u ur†)|² / d²
  Complex sample_mean{0, 0};
  double mean_std_error = 0.0;
  std::uint64_t samples = 0;
};

inline OverlapComparison state_average_overlap(const Matrix& u, const Matrix& ur,
                                               std::uint64_t samples, Rng& rng) {
  if (!is_unitary(u) || !is_unitary(ur))
    throw InvalidInputError("state_average_overlap: both arguments must be unitary");
  if (u.rows() != ur.rows()) throw DimError("state_average_overlap: dimension mismatch");
  const int d = static_cast<int>(u.rows());
  const Matrix v = ur.adjoint() * u;
  const Rng root(rng.next_u64());
  Complex acc(0, 0);
  double re_sq = 0.0, im_sq = 0.0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    Rng local = root.derive(k);
    const Vector alpha = haar_random_state(d, local);
    const Complex z = alpha.dot(v * alpha);
    acc += z;
    re_sq += z.real() * z.real();
    im_sq += z.imag() * z.imag();
  }
  OverlapComparison result;
  result.samples = samples;
  const double n = static_cast<double>(samples);
  result.sample_mean = acc / n;
  const double var_re = std::max(0.0, re_sq / n - result.sample_mean.real() * result.sample_mean.real());
  const double var_im = std::max(0.0, im_sq / n - result.sample_mean.imag() * result.sample_mean.imag());
  result.mean_std_error = std::sqrt((var_re + var_im) / std::max(1.0, n - 1.0));
  result.monte_carlo = std::norm(result.sample_mean);
  result.closed_form = std::norm((u * ur.adjoint()).trace()) / static_cast<double>(d * d);
  return result;
}

// ── covariant measurement orbit check ────────────────────────────────────────

// H_4 coordinates of a two-qubit state over the Bell labels
// |Φ⁺⟩≡|0⟩, |Ψ⁺⟩≡|1⟩, |Ψ⁻⟩≡|2⟩, |Φ⁻⟩≡|3⟩ (GF4 order 0, 1, ω, ω²).
inline Vector h4_coordinates(const Vector& two_qubit_state) {
  if (two_qubit_state.size() != 4) throw DimError("h4_coordinates: need a 4-dim state");
  Vector out(4);
  for (int m = 0; m < 4; ++m) out(m) = bell_state(m).dot(two_qubit_state);
  return out;
}

struct OrbitCheck {
  bool ok = false;
  int basis_index = -1;     // which B_k the initial state belongs to; -1 if none
  int distinct_states = 0;  // orbit classes under phase equivalence
};

// Applies all 16 representation operators R(q,w) to the initial H_4 state and
// checks that the orbit projectors are exactly the (H_4-coordinate) states of
// the basis the initial state belongs to.
inline OrbitCheck covariant_orbit_check(const Vector& initial, double tol = kEps) {
  if (initial.size() != 4) throw DimError("covariant_orbit_check: need a 4-dim state");
  if (std::abs(initial.norm() - 1.0) > tol)
    throw InvalidInputError("covariant_orbit_check: state must be normalized");

  OrbitCheck result;
  std::vector<Vector> orbit_classes;
  for (std::uint8_t q = 0; q < 4; ++q)
    for (std::uint8_t w = 0; w < 4; ++w) {
      const Vector s = rep_operator(GF4Element(q), GF4Element(w)) * initial;
      bool seen = false;
      for (const Vector& t : orbit_classes) seen |= states_equal_up_to_phase(s, t, tol);
      if (!seen) orbit_classes.push_back(s);
    }
  result.distinct_states = static_cast<int>(orbit_classes.size());

  const auto bases = bell_and_magic_bases();
  std::vector<std::vector<Vector>> coords(3);
  for (int k = 0; k < 3; ++k)
    for (const Vector& s : bases[k].states) coords[k].push_back(h4_coordinates(s));
  for (int k = 0; k < 3 && result.basis_index < 0; ++k)
    for (const Vector& s : coords[k])
      if (states_equal_up_to_phase(initial, s, tol)) {
        result.basis_index = k;
        break;
      }
  if (result.basis_index < 0 || result.distinct_states != 4) return result;

  std::array<bool, 4> covered{};
  for (const Vector& s : orbit_classes) {
    bool matched = false;
    for (int i = 0; i < 4; ++i)
      if (!covered[i] && states_equal_up_to_phase(s, coords[result.basis_index][i], tol)) {
        covered[i] = true;
        matched = true;
        break;
      }
    if (!matched) return result;
  }
  result.ok = covered[0] && covered[1] && covered[2] && covered[3];
  return result;
}

}  // namespace muub
