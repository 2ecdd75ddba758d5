#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "muub/linalg.hpp"
#include "muub/pauli.hpp"

namespace muub {

// Ordered list of n pairwise Hilbert-Schmidt-orthogonal unitaries spanning an
// n-dimensional subspace of M(d, C).  Construct through certify_basis.
struct OperatorBasis {
  int d = 0;
  int n = 0;
  std::vector<Matrix> elements;
};

// Set of operator bases, pairwise mutually unbiased with a common constant C.
// For any such family C = d²/n.
struct MuubFamily {
  double constant = 0.0;
  std::vector<OperatorBasis> bases;
};

// Validates the basis premise: all elements unitary, pairwise HS-orthogonal,
// common dimension.  Throws NonUnitaryError / NotOrthogonalError / DimError.
inline OperatorBasis certify_basis(const std::vector<Matrix>& elements, double tol = kEps) {
  if (elements.empty()) throw InvalidInputError("certify_basis: empty element list");
  const Eigen::Index d = elements[0].rows();
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const Matrix& m = elements[k];
    if (!is_square(m) || m.rows() != d)
      throw DimError("certify_basis: element " + std::to_string(k) +
                     " is not square of common dimension");
    if (!all_finite(m))
      throw InvalidInputError("certify_basis: element " + std::to_string(k) +
                              " has non-finite entries");
    if (!is_unitary(m, tol))
      throw NonUnitaryError(k, "certify_basis: element " + std::to_string(k) +
                                   " is not unitary");
  }
  if (elements.size() > static_cast<std::size_t>(d * d))
    throw InvalidInputError("certify_basis: more than d^2 elements cannot be orthogonal");
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      if (std::abs(hs_inner(elements[i], elements[j])) > tol * static_cast<double>(d))
        throw NotOrthogonalError(i, j, "certify_basis: elements " + std::to_string(i) +
                                           " and " + std::to_string(j) +
                                           " are not HS-orthogonal");
    }
  OperatorBasis basis;
  basis.d = static_cast<int>(d);
  basis.n = static_cast<int>(elements.size());
  basis.elements = elements;
  return basis;
}

// The mutual-unbiasedness constant: |Tr(A_i† B_j)|² must agree (within
// tol·max(1,C)) over all n² cross pairs and be nonzero.  First failing pair in
// row-major order is reported.
inline double unbiasedness_constant(const OperatorBasis& a, const OperatorBasis& b,
                                    double tol = kEps) {
  if (a.d != b.d || a.n != b.n)
    throw DimError("unbiasedness_constant: bases must share d and n");
  double c = -1.0;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < b.n; ++j) {
      const double v = std::norm(hs_inner(a.elements[i], b.elements[j]));
      if (c < 0.0) c = v;
      if (std::abs(v - c) > tol * std::max(1.0, c))
        throw NotUnbiasedError(i, j, v,
                               "unbiasedness_constant: pair (" + std::to_string(i) + "," +
                                   std::to_string(j) + ") gives " + std::to_string(v) +
                                   ", expected " + std::to_string(c));
    }
  if (c <= tol) throw ZeroConstantError("unbiasedness_constant: constant is zero");
  return c;
}

// Assembles a family after verifying every cross-basis pair shares one
// constant.
inline MuubFamily certify_family(std::vector<OperatorBasis> bases, double tol = kEps) {
  if (bases.size() < 2) throw InvalidInputError("certify_family: need at least two bases");
  double c = -1.0;
  for (std::size_t i = 0; i < bases.size(); ++i)
    for (std::size_t j = i + 1; j < bases.size(); ++j) {
      const double v = unbiasedness_constant(bases[i], bases[j], tol);
      if (c < 0.0) c = v;
      if (std::abs(v - c) > tol * std::max(1.0, c))
        throw NotUnbiasedError(i, j, v, "certify_family: bases " + std::to_string(i) +
                                            " and " + std::to_string(j) +
                                            " have a different constant");
    }
  return MuubFamily{c, std::move(bases)};
}

// Basis equivalence under a common left rotation: returns the witness unitary
// U = Y_0 X_0† if U X_j matches Y_j up to a unit-modulus factor for every j;
// absent otherwise.
inline std::optional<Matrix> bases_equivalent(const OperatorBasis& x, const OperatorBasis& y,
                                              double tol = kEps) {
  if (x.d != y.d || x.n != y.n)
    throw DimError("bases_equivalent: bases must share d and n");
  const Matrix u = y.elements[0] * x.elements[0].adjoint();
  for (int j = 0; j < x.n; ++j)
    if (!equal_up_to_phase(u * x.elements[j], y.elements[j], tol)) return std::nullopt;
  return u;
}

namespace detail {

// Sign vectors (d1,d2,d3) in {±1}³ with the given product parity, enumerated
// with +1 ordered first in each slot.
inline std::vector<std::array<int, 3>> sign_vectors(int parity) {
  std::vector<std::array<int, 3>> out;
  for (int mask = 0; mask < 8; ++mask) {
    std::array<int, 3> d{};
    int prod = 1;
    for (int j = 0; j < 3; ++j) {
      d[j] = (mask >> (2 - j)) & 1 ? -1 : 1;
      prod *= d[j];
    }
    if (prod == parity) out.push_back(d);
  }
  return out;
}

// (I + i Σ d_j σ_j) / 2
inline Matrix qubit_phase_element(const std::array<int, 3>& d) {
  Matrix m = pauli(0);
  for (int j = 0; j < 3; ++j) m += Complex(0, d[j]) * pauli(j + 1);
  return m / 2.0;
}

}  // namespace detail

// Element sign vectors of the built-in qubit basis B_k (k = 1, 2), in the
// canonical element order used everywhere (bit assignments, subsets, tests).
inline std::vector<std::array<int, 3>> qubit_family_signs(int k) {
  if (k != 1 && k != 2) throw InvalidInputError("qubit_family_signs: k must be 1 or 2");
  return detail::sign_vectors(k == 1 ? -1 : 1);
}

// The three-basis qubit family {B0, B1, B2} with C = 1:
//   B0 = {I, σ1, σ2, σ3},
//   B_k = {(I + i Σ d_j σ_j)/2 | d_j ∈ {±1}, Π d_j = (-1)^k}, k = 1, 2.
inline MuubFamily builtin_qubit_family(double tol = kEps) {
  std::vector<Matrix> b0;
  for (int i = 0; i < 4; ++i) b0.push_back(pauli(i));
  std::vector<OperatorBasis> bases{certify_basis(b0, tol)};
  for (int k = 1; k <= 2; ++k) {
    std::vector<Matrix> elems;
    for (const auto& d : qubit_family_signs(k)) elems.push_back(detail::qubit_phase_element(d));
    bases.push_back(certify_basis(elems, tol));
  }
  return certify_family(std::move(bases), tol);
}

// The two-basis n = 2 family for axis ∈ {2, 3}: {I, σ_axis} paired with
// {(I ± i σ_axis)/√2}; C = 2.
inline MuubFamily builtin_qubit_n2(int axis, double tol = kEps) {
  if (axis != 2 && axis != 3) throw InvalidInputError("builtin_qubit_n2: axis must be 2 or 3");
  const Matrix id = pauli(0), s = pauli(axis);
  const double r2 = std::sqrt(2.0);
  std::vector<OperatorBasis> bases{
      certify_basis({id, s}, tol),
      certify_basis({(id + Complex(0, 1) * s) / r2, (id - Complex(0, 1) * s) / r2}, tol)};
  return certify_family(std::move(bases), tol);
}

namespace detail {

// Coefficient exponents (powers of η₃) of the qutrit combination operators
// R_1..R_7 over the term list
//   [I, X, X², Z, Z², XZ, (XZ)², XZ², (XZ²)²].
inline const std::array<std::array<int, 9>, 7>& qutrit_r_exponents() {
  static const std::array<std::array<int, 9>, 7> table = {{
      {0, 1, 2, 1, 2, 1, 2, 1, 2},
      {0, 0, 1, 0, 1, 2, 0, 2, 0},
      {0, 0, 1, 0, 2, 0, 2, 2, 2},
      {0, 0, 1, 0, 2, 1, 0, 1, 1},
      {0, 0, 2, 0, 1, 0, 2, 1, 0},
      {0, 0, 2, 0, 1, 1, 0, 0, 2},
      {0, 0, 2, 0, 2, 2, 2, 0, 1},
  }};
  return table;
}

inline std::vector<Matrix> qutrit_r_terms() {
  const Matrix x = weyl(3, 1, 0), z = weyl(3, 0, 1);
  const Matrix xz = x * z, xzz = x * z * z;
  return {Matrix::Identity(3, 3), x, x * x, z, z * z, xz, xz * xz, xzz, xzz * xzz};
}

}  // namespace detail

// The combination operator R_l (l = 1..7) divided by 3 so it is unitary.
// Each R_l is a sum of nine unit-modulus terms, so the 1/3 normalization is
// required for the basis elements to be unitary (consistent with the qubit
// case where coefficients have modulus 1/2).
inline Matrix qutrit_r(int l) {
  if (l < 1 || l > 7) throw InvalidInputError("qutrit_r: l must be in 1..7");
  const auto terms = detail::qutrit_r_terms();
  const auto& exps = detail::qutrit_r_exponents()[l - 1];
  Matrix r = Matrix::Zero(3, 3);
  for (int t = 0; t < 9; ++t) r += eta_pow(3, exps[t]) * terms[t];
  return r / 3.0;
}

// The eight-basis qutrit family with C = 1: B30 = {X³^j Z³^k} plus
// B3l = {(R_l/3) X^j Z^k} for l = 1..7, elements in lexicographic (j, k) order.
inline MuubFamily builtin_qutrit_family(double tol = kEps) {
  std::vector<Matrix> weyls;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) weyls.push_back(weyl(3, j, k));
  std::vector<OperatorBasis> bases{certify_basis(weyls, tol)};
  for (int l = 1; l <= 7; ++l) {
    const Matrix r = qutrit_r(l);
    std::vector<Matrix> elems;
    for (const Matrix& w : weyls) elems.push_back(r * w);
    bases.push_back(certify_basis(elems, tol));
  }
  return certify_family(std::move(bases), tol);
}

// The three-basis family on the 3-dimensional subspace spanned by {I, A, A²}
// for a nonidentity qutrit Weyl generator A; C = 3.  D_j = (I + η₃^j A +
// η₃^j A²)/√3 for j = 1, 2 (normalized to unitary).
inline MuubFamily builtin_qutrit_subspace(const WeylIndex& a, double tol = kEps) {
  if (a.d != 3) throw InvalidInputError("builtin_qutrit_subspace: generator must have d = 3");
  const Matrix gen = weyl(a);
  const Matrix id = Matrix::Identity(3, 3);
  const Matrix gen2 = gen * gen;
  std::vector<Matrix> d0{id, gen, gen2};
  for (const Matrix& m : d0)
    if (!is_unitary(m, tol))
      throw InvalidGeneratorError("builtin_qutrit_subspace: {I, A, A²} not all unitary");
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      if (std::abs(hs_inner(d0[i], d0[j])) > tol * 3.0)
        throw InvalidGeneratorError(
            "builtin_qutrit_subspace: {I, A, A²} is not an orthogonal triple");
  std::vector<OperatorBasis> bases{certify_basis(d0, tol)};
  const double r3 = std::sqrt(3.0);
  for (int j = 1; j <= 2; ++j) {
    const Matrix d = (id + eta_pow(3, j) * gen + eta_pow(3, j) * gen2) / r3;
    bases.push_back(certify_basis({d, d * gen, d * gen2}, tol));
  }
  return certify_family(std::move(bases), tol);
}

// Frame potential (1/N²) Σ_{a,b} |Tr(a†b)|⁴ over all ordered pairs of a set of
// same-dimension unitaries.  Equals 2 for a unitary 2-design at d = 2 and
// never falls below the Haar value.
inline double frame_potential(const std::vector<Matrix>& us, double tol = kEps) {
  if (us.empty()) throw InvalidInputError("frame_potential: empty set");
  for (std::size_t k = 0; k < us.size(); ++k) {
    if (us[k].rows() != us[0].rows())
      throw DimError("frame_potential: mixed dimensions");
    if (!is_unitary(us[k], tol))
      throw NonUnitaryError(k, "frame_potential: element " + std::to_string(k) +
                                   " is not unitary");
  }
  double sum = 0.0;
  for (const Matrix& a : us)
    for (const Matrix& b : us) {
      const double t = std::norm(hs_inner(a, b));
      sum += t * t;
    }
  const double n = static_cast<double>(us.size());
  return sum / (n * n);
}

}  // namespace muub
