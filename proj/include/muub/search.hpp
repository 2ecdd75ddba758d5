#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "muub/basis.hpp"
#include "muub/linalg.hpp"
#include "muub/pauli.hpp"

namespace muub {

// Result of an exhaustive root-of-unity phase scan against a seed basis.
// All orderings are canonical so reports are byte-stable: candidates are
// enumerated with the first exponent fixed to 0, survivors are
// phase-canonicalized and sorted lexicographically, bases and families follow
// the survivor order.
struct SearchReport {
  int d = 0;
  int n = 0;
  int order = 0;
  std::uint64_t candidates_scanned = 0;
  std::vector<Matrix> unitaries;        // nonequivalent survivors
  std::vector<OperatorBasis> bases;     // maximal pairwise-orthogonal n-sets
  std::vector<MuubFamily> families;     // maximum cliques over {seed} ∪ bases
};

namespace detail {

// Bron-Kerbosch with pivoting over an adjacency matrix; vertices are visited
// in index order so the clique list is deterministic.
inline void bron_kerbosch(const std::vector<std::vector<bool>>& adj, std::vector<int>& r,
                          std::vector<int> p, std::vector<int> x,
                          std::vector<std::vector<int>>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  int pivot = -1;
  std::size_t best = 0;
  for (const auto& cand : {p, x})
    for (int v : cand) {
      std::size_t cnt = 0;
      for (int u : p)
        if (adj[v][u]) ++cnt;
      if (pivot < 0 || cnt > best) pivot = v, best = cnt;
    }
  std::vector<int> ext;
  for (int v : p)
    if (pivot < 0 || !adj[pivot][v]) ext.push_back(v);
  for (int v : ext) {
    std::vector<int> np, nx;
    for (int u : p)
      if (adj[v][u]) np.push_back(u);
    for (int u : x)
      if (adj[v][u]) nx.push_back(u);
    r.push_back(v);
    bron_kerbosch(adj, r, std::move(np), std::move(nx), out);
    r.pop_back();
    p.erase(std::find(p.begin(), p.end(), v));
    x.push_back(v);
  }
}

inline std::vector<std::vector<int>> maximal_cliques(const std::vector<std::vector<bool>>& adj) {
  std::vector<int> r, p, x;
  for (std::size_t v = 0; v < adj.size(); ++v) p.push_back(static_cast<int>(v));
  std::vector<std::vector<int>> out;
  bron_kerbosch(adj, r, std::move(p), std::move(x), out);
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Canonical seed bases for the standard scans: the Pauli basis and axis pairs
// at d = 2, the Weyl grid at n = d², powers of X at n = d.
inline OperatorBasis default_seed_basis(int d, int n, double tol = kEps) {
  if (d == 2 && n == 4) return certify_basis({pauli(0), pauli(1), pauli(2), pauli(3)}, tol);
  if (d == 2 && n == 3) return certify_basis({pauli(0), pauli(1), pauli(2)}, tol);
  if (d == 2 && n == 2) return certify_basis({pauli(0), pauli(3)}, tol);
  if (d >= 2 && n == d * d) {
    std::vector<Matrix> elems;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) elems.push_back(weyl(d, a, b));
    return certify_basis(elems, tol);
  }
  if (d >= 2 && n == d) {
    std::vector<Matrix> elems;
    for (int a = 0; a < d; ++a) elems.push_back(weyl(d, a, 0));
    return certify_basis(elems, tol);
  }
  throw InvalidInputError("default_seed_basis: no built-in seed for d = " + std::to_string(d) +
                          ", n = " + std::to_string(n) + "; provide a seed file");
}

// Exhaustive scan over all order^(n-1) phase assignments (first exponent fixed
// to 0 to quotient out the global phase):
//   U(t) = Σ_j η_order^{t_j} seed_j / √n.
// Candidates passing is_unitary are deduplicated by equal_up_to_phase, grouped
// into maximal pairwise-orthogonal sets of size n, and families are assembled
// as maximum cliques of the mutual-unbiasedness graph over {seed} ∪ bases.
// Scans larger than max_candidates are refused unless force is set.
inline SearchReport phase_search(const OperatorBasis& seed, int order, double tol = kEps,
                                 bool force = false,
                                 std::uint64_t max_candidates = 100000000ULL) {
  if (order < 2) throw InvalidInputError("phase_search: order must be >= 2");
  certify_basis(seed.elements, tol);  // pre: seed certified
  const int n = seed.n;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));

  double log_count = (n - 1) * std::log(static_cast<double>(order));
  if (!force && log_count > std::log(static_cast<double>(max_candidates)))
    throw ScanBudgetError("phase_search: more than " + std::to_string(max_candidates) +
                          " candidates; pass force to proceed");
  std::uint64_t total = 1;
  for (int j = 1; j < n; ++j) total *= static_cast<std::uint64_t>(order);

  std::vector<Complex> phases(order);
  for (int k = 0; k < order; ++k) phases[k] = eta_pow(order, k);

  SearchReport report;
  report.d = seed.d;
  report.n = n;
  report.order = order;
  report.candidates_scanned = total;

  std::vector<Matrix> scaled;
  for (const Matrix& m : seed.elements) scaled.push_back(m * scale);

  std::vector<Matrix> kept;
  std::vector<int> exps(n, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rem = idx;
    for (int j = n - 1; j >= 1; --j) {
      exps[j] = static_cast<int>(rem % order);
      rem /= order;
    }
    Matrix u = scaled[0];
    for (int j = 1; j < n; ++j) u += phases[exps[j]] * scaled[j];
    if (!is_unitary(u, tol)) continue;
    // unbiasedness against the seed holds by construction; re-checked in tests
    bool duplicate = false;
    for (const Matrix& v : kept)
      if (equal_up_to_phase(u, v, tol)) {
        duplicate = true;
        break;
      }
    if (!duplicate) kept.push_back(u);
  }

  for (Matrix& m : kept) m = canonical_phase(m);
  std::sort(kept.begin(), kept.end(), matrix_lex_less);
  report.unitaries = kept;

  // orthogonality graph over survivors
  const int s = static_cast<int>(kept.size());
  std::vector<std::vector<bool>> ortho(s, std::vector<bool>(s, false));
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j)
      if (std::abs(hs_inner(kept[i], kept[j])) <= tol * seed.d)
        ortho[i][j] = ortho[j][i] = true;
  for (const auto& clique : detail::maximal_cliques(ortho)) {
    if (static_cast<int>(clique.size()) != n) continue;
    std::vector<Matrix> elems;
    for (int v : clique) elems.push_back(kept[v]);
    report.bases.push_back(certify_basis(elems, tol));
  }

  // mutual-unbiasedness graph over {seed} ∪ bases
  std::vector<OperatorBasis> verts{seed};
  for (const auto& b : report.bases) verts.push_back(b);
  const int nv = static_cast<int>(verts.size());
  std::vector<std::vector<bool>> unb(nv, std::vector<bool>(nv, false));
  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j) {
      try {
        unbiasedness_constant(verts[i], verts[j], tol);
        unb[i][j] = unb[j][i] = true;
      } catch (const Error&) {
      }
    }
  auto cliques = detail::maximal_cliques(unb);
  std::size_t best = 0;
  for (const auto& c : cliques) best = std::max(best, c.size());
  for (const auto& c : cliques) {
    if (c.size() != best || best < 2) continue;
    std::vector<OperatorBasis> fam;
    for (int v : c) fam.push_back(verts[v]);
    report.families.push_back(certify_family(std::move(fam), tol));
  }
  return report;
}

// Size of the largest family found (including the seed).
inline int count_family(const OperatorBasis& seed, int order, double tol = kEps) {
  const SearchReport r = phase_search(seed, order, tol);
  int best = 1;
  for (const auto& f : r.families) best = std::max(best, static_cast<int>(f.bases.size()));
  return best;
}

// Closure test behind the subspace-dimension theorem: an index set containing
// (0,0) supports a second unbiased basis only if it is closed under
// componentwise addition mod d (hence has size d or d²).
inline bool closure_check(const std::vector<std::pair<int, int>>& index_set, int d) {
  if (d < 2) throw InvalidInputError("closure_check: d must be >= 2");
  bool has_origin = false;
  for (const auto& p : index_set) has_origin |= (p.first == 0 && p.second == 0);
  if (!has_origin) throw InvalidInputError("closure_check: set must contain (0,0)");
  auto contains = [&](int a, int b) {
    for (const auto& p : index_set)
      if (p.first == a && p.second == b) return true;
    return false;
  };
  for (const auto& p : index_set)
    for (const auto& q : index_set)
      if (!contains((p.first + q.first) % d, (p.second + q.second) % d)) return false;
  return true;
}

// Certificates for the nonexistence of a second basis unbiased to
// {I, σ_i, σ_j} (the n = 3 case).
struct N3PairCertificate {
  int i = 0, j = 0;
  std::array<double, 3> span_overlaps{};  // |Tr((σiσj)† M)| for M in {I, σi, σj}
  double product_norm_sq = 0.0;           // ‖σiσj‖²_HS, nonzero
  std::uint64_t survivors_order4 = 0;
  std::uint64_t complete_bases_order4 = 0;
  std::uint64_t survivors_order8 = 0;
  std::uint64_t complete_bases_order8 = 0;
};

struct N3Report {
  std::vector<N3PairCertificate> pairs;
  bool nonexistence_certified = false;
};

// For each axis pair i ≠ j: verifies σ_iσ_j is orthogonal to I, σ_i, σ_j but
// has nonzero norm (span exclusion), and that exhaustive phase searches at
// orders 4 and 8 produce no complete second basis.
inline N3Report certify_n3_nonexistence(double tol = kEps) {
  N3Report report;
  report.nonexistence_certified = true;
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) {
      N3PairCertificate cert;
      cert.i = i;
      cert.j = j;
      const Matrix prod = pauli(i) * pauli(j);
      const Matrix span[3] = {pauli(0), pauli(i), pauli(j)};
      bool excluded = true;
      for (int k = 0; k < 3; ++k) {
        cert.span_overlaps[k] = std::abs(hs_inner(prod, span[k]));
        excluded &= cert.span_overlaps[k] <= tol * 2.0;
      }
      cert.product_norm_sq = hs_inner(prod, prod).real();
      excluded &= cert.product_norm_sq > tol;

      const OperatorBasis seed = certify_basis({pauli(0), pauli(i), pauli(j)}, tol);
      const SearchReport r4 = phase_search(seed, 4, tol);
      const SearchReport r8 = phase_search(seed, 8, tol);
      cert.survivors_order4 = r4.unitaries.size();
      cert.complete_bases_order4 = r4.bases.size();
      cert.survivors_order8 = r8.unitaries.size();
      cert.complete_bases_order8 = r8.bases.size();

      report.nonexistence_certified =
          report.nonexistence_certified && excluded && r4.bases.empty() && r8.bases.empty();
      report.pairs.push_back(cert);
    }
  return report;
}

}  // namespace muub
