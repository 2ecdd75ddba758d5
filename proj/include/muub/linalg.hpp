#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace muub {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Global tolerance for every unitarity / orthogonality / phase-equality test.
// Entries of all matrices handled here are built from low-order roots of unity,
// so accumulated error stays far below 1e-9 while the smallest structural gap
// between "equal" and "distinct" is O(1).
inline constexpr double kEps = 1e-9;

// ── errors ───────────────────────────────────────────────────────────────────

// Base error carrying a stable machine-readable kind string.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct DimError : Error {
  explicit DimError(const std::string& w) : Error("dim_mismatch", w) {}
};

struct InvalidInputError : Error {
  explicit InvalidInputError(const std::string& w) : Error("invalid_input", w) {}
};

struct NonUnitaryError : Error {
  explicit NonUnitaryError(std::size_t idx, const std::string& w)
      : Error("non_unitary", w), index(idx) {}
  std::size_t index;
};

struct NotOrthogonalError : Error {
  NotOrthogonalError(std::size_t i_, std::size_t j_, const std::string& w)
      : Error("not_orthogonal", w), i(i_), j(j_) {}
  std::size_t i, j;
};

struct NotUnbiasedError : Error {
  NotUnbiasedError(std::size_t i_, std::size_t j_, double obs, const std::string& w)
      : Error("not_unbiased", w), i(i_), j(j_), observed(obs) {}
  std::size_t i, j;
  double observed;
};

struct ZeroConstantError : Error {
  explicit ZeroConstantError(const std::string& w) : Error("zero_constant", w) {}
};

struct InvalidGeneratorError : Error {
  explicit InvalidGeneratorError(const std::string& w) : Error("invalid_generator", w) {}
};

struct InconsistentActionError : Error {
  explicit InconsistentActionError(const std::string& w)
      : Error("inconsistent_action", w) {}
};

struct NoConsistentImageError : Error {
  NoConsistentImageError(int i_, int j_, const std::string& w)
      : Error("no_consistent_image", w), i(i_), j(j_) {}
  int i, j;
};

struct NoValidPairingError : Error {
  explicit NoValidPairingError(const std::string& w) : Error("no_valid_pairing", w) {}
};

struct NonPrimeError : Error {
  explicit NonPrimeError(const std::string& w) : Error("non_prime", w) {}
};

struct ScanBudgetError : Error {
  explicit ScanBudgetError(const std::string& w) : Error("scan_budget", w) {}
};

// ── basic operations ─────────────────────────────────────────────────────────

inline bool is_square(const Matrix& a) { return a.rows() == a.cols(); }

// Hilbert-Schmidt inner product Tr(a† b).  Both arguments must be square and of
// the same dimension.
inline Complex hs_inner(const Matrix& a, const Matrix& b) {
  if (!is_square(a) || !is_square(b) || a.rows() != b.rows())
    throw DimError("hs_inner: arguments must be square matrices of equal dimension");
  return (a.adjoint() * b).trace();
}

// True iff max-entry deviation of a†a from the identity is <= tol.
inline bool is_unitary(const Matrix& a, double tol = kEps) {
  if (!is_square(a)) return false;
  Matrix g = a.adjoint() * a;
  g -= Matrix::Identity(a.rows(), a.cols());
  return g.cwiseAbs().maxCoeff() <= tol;
}

// Kronecker product, a's indices major (block (i,j) of the result is a(i,j)*b).
inline Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Vectorization |U⟩⟩/√d: the d²-dim vector whose amplitude at index i*d+j is
// ⟨j|U|i⟩/√d.  This index convention is the wire convention for all state
// files.  The output is normalized iff u is unitary.
inline Vector vectorize(const Matrix& u) {
  if (!is_square(u)) throw DimError("vectorize: input must be square");
  const Eigen::Index d = u.rows();
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  Vector v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = u(j, i) * s;
  return v;
}

// True iff a = λ b for some unit-modulus λ, i.e. |Tr(a†b)| = d within tol.
// Both inputs must be unitary.
inline bool equal_up_to_phase(const Matrix& a, const Matrix& b, double tol = kEps) {
  if (!is_square(a) || !is_square(b) || a.rows() != b.rows())
    throw DimError("equal_up_to_phase: arguments must be square matrices of equal dimension");
  if (!is_unitary(a, tol) || !is_unitary(b, tol))
    throw InvalidInputError("equal_up_to_phase: both arguments must be unitary");
  const double d = static_cast<double>(a.rows());
  return std::abs(std::abs(hs_inner(a, b)) - d) <= tol * d;
}

// True iff |⟨a|b⟩| = 1 within tol; a, b must be normalized.
inline bool states_equal_up_to_phase(const Vector& a, const Vector& b, double tol = kEps) {
  if (a.size() != b.size())
    throw DimError("states_equal_up_to_phase: dimension mismatch");
  return std::abs(std::abs(a.dot(b)) - 1.0) <= tol;
}

// Reduced density matrix over the second factor (first traced out) of a state
// in H_d ⊗ H_d using the i*d+j index convention.
inline Matrix partial_trace_first(const Vector& v, Eigen::Index d) {
  if (v.size() != d * d) throw DimError("partial_trace_first: size != d*d");
  Matrix rho = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < d; ++k)
      for (Eigen::Index i = 0; i < d; ++i)
        rho(j, k) += v(i * d + j) * std::conj(v(i * d + k));
  return rho;
}

// Reduced density matrix over the first factor (second traced out).
inline Matrix partial_trace_second(const Vector& v, Eigen::Index d) {
  if (v.size() != d * d) throw DimError("partial_trace_second: size != d*d");
  Matrix rho = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index k = 0; k < d; ++k)
      for (Eigen::Index j = 0; j < d; ++j)
        rho(i, k) += v(i * d + j) * std::conj(v(k * d + j));
  return rho;
}

// Canonical global-phase fixing: rotate so the first entry (row-major) of
// largest modulus becomes positive real.  Used to make search output
// byte-stable.
inline Matrix canonical_phase(const Matrix& m) {
  double max_mod = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      max_mod = std::max(max_mod, std::abs(m(r, c)));
  if (max_mod == 0.0) return m;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex e = m(r, c);
      if (std::abs(e) >= max_mod - kEps) return m * (std::conj(e) / std::abs(e));
    }
  return m;  // unreachable
}

// Strict row-major lexicographic order on (re, im) entry pairs; matrices of
// different shape order by shape first.
inline bool matrix_lex_less(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  if (a.cols() != b.cols()) return a.cols() < b.cols();
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      const Complex &x = a(r, c), &y = b(r, c);
      if (x.real() != y.real()) return x.real() < y.real();
      if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
  return false;
}

inline bool all_finite(const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) return false;
  return true;
}

inline bool all_finite(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  return true;
}

}  // namespace muub
