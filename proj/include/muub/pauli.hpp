#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "muub/linalg.hpp"

namespace muub {

// Qubit Pauli matrix; index 0 is the identity.
inline Matrix pauli(int i) {
  Matrix m(2, 2);
  switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw InvalidInputError("pauli: index must be in 0..3");
  }
  return m;
}

// Principal d-th root of unity η_d = exp(2πi/d).
inline Complex eta(int d) {
  if (d < 2) throw InvalidInputError("eta: d must be >= 2");
  const double a = 2.0 * std::numbers::pi / d;
  return Complex(std::cos(a), std::sin(a));
}

inline Complex eta_pow(int d, long long k) {
  const long long r = ((k % d) + d) % d;
  const double a = 2.0 * std::numbers::pi * static_cast<double>(r) / d;
  return Complex(std::cos(a), std::sin(a));
}

// Index (a, b) of the generalized Pauli (Weyl) operator X^a Z^b on H_d.
// Convention fixed here and used consistently by the search and the built-in
// constructions: X|k⟩ = |k+1 mod d⟩, Z|k⟩ = η_d^k |k⟩.
struct WeylIndex {
  int d;
  int a;
  int b;
};

inline Matrix weyl(const WeylIndex& idx) {
  if (idx.d < 2 || idx.a < 0 || idx.a >= idx.d || idx.b < 0 || idx.b >= idx.d)
    throw InvalidInputError("weyl: need d >= 2 and 0 <= a,b < d");
  Matrix m = Matrix::Zero(idx.d, idx.d);
  for (int k = 0; k < idx.d; ++k)
    m((k + idx.a) % idx.d, k) = eta_pow(idx.d, static_cast<long long>(idx.b) * k);
  return m;
}

inline Matrix weyl(int d, int a, int b) { return weyl(WeylIndex{d, a, b}); }

// ── GF(4) ────────────────────────────────────────────────────────────────────
// Elements encoded as the bit tuple (s1, s2): 0 ↔ (0,0), 1 ↔ (0,1), ω ↔ (1,0),
// ω² ↔ (1,1), i.e. value = 2*s1 + s2.  The bit order is pinned so the
// character χ below is reproducible bit-exactly.
struct GF4Element {
  std::uint8_t v;  // 0..3

  constexpr GF4Element(std::uint8_t value = 0) : v(value) {}
  constexpr int s1() const { return (v >> 1) & 1; }
  constexpr int s2() const { return v & 1; }
  friend constexpr bool operator==(GF4Element a, GF4Element b) { return a.v == b.v; }
};

inline GF4Element gf4_add(GF4Element x, GF4Element y) {
  return GF4Element(static_cast<std::uint8_t>(x.v ^ y.v));
}

// Multiplication in GF(2)[ω]/(ω²+ω+1).
inline GF4Element gf4_mul(GF4Element x, GF4Element y) {
  static constexpr std::uint8_t table[4][4] = {
      {0, 0, 0, 0},
      {0, 1, 2, 3},
      {0, 2, 3, 1},
      {0, 3, 1, 2},
  };
  return GF4Element(table[x.v][y.v]);
}

// Nontrivial additive character χ(x) = exp(πi s1): +1 on {0, 1}, -1 on {ω, ω²}.
inline Complex chi(GF4Element x) { return Complex(x.s1() ? -1.0 : 1.0, 0.0); }

// Projective representation of F4 × F4 on H_4: R(q, w) = U_q V_w with
// U_q|i⟩ = |i ⊕ q⟩ and V_w|i⟩ = χ(w ⊙ i)|i⟩.
inline Matrix rep_operator(GF4Element q, GF4Element w) {
  Matrix m = Matrix::Zero(4, 4);
  for (std::uint8_t i = 0; i < 4; ++i)
    m(gf4_add(GF4Element(i), q).v, i) = chi(gf4_mul(w, GF4Element(i)));
  return m;
}

}  // namespace muub
