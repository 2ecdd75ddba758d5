#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "muub/linalg.hpp"

namespace muub {

// Splittable, seedable pseudorandom generator (SplitMix64 core).  One instance
// is passed explicitly wherever randomness is needed; there is no global RNG
// state.  derive(label) produces an independent child stream without touching
// the parent, so parallel blocks (Monte-Carlo trials, protocol rounds) get
// reproducible per-block seeds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Standard normal via Box-Muller (second member of the pair discarded);
  // avoids platform-dependent std::normal_distribution sequences.
  double next_gaussian() {
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex next_complex_gaussian() {
    const double re = next_gaussian();
    const double im = next_gaussian();
    return Complex(re, im);
  }

  // Index sampled from a finite nonnegative weight vector.
  template <typename Weights>
  int next_weighted(const Weights& w) {
    double total = 0.0;
    for (double x : w) total += x;
    double r = next_double() * total;
    int i = 0;
    const int last = static_cast<int>(w.size()) - 1;
    for (double x : w) {
      if (r < x || i == last) return i;
      r -= x;
      ++i;
    }
    return last;
  }

  // Independent child stream; the parent state is unaffected.
  Rng derive(std::uint64_t label) const {
    std::uint64_t z = state_ ^ (0xD1342543DE82EF95ULL * (label + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::uint64_t state_;
};

// Normalized vector distributed by the unitarily invariant measure: normalize
// a vector of independent standard complex Gaussians.
inline Vector haar_random_state(int d, Rng& rng) {
  if (d < 1) throw InvalidInputError("haar_random_state: d must be >= 1");
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.next_complex_gaussian();
  return v / v.norm();
}

// Haar-distributed unitary: QR of a complex Ginibre matrix with the R diagonal
// phase fix.
inline Matrix haar_random_unitary(int d, Rng& rng) {
  if (d < 1) throw InvalidInputError("haar_random_unitary: d must be >= 1");
  Matrix g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = rng.next_complex_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    Complex x = rmat(i, i);
    q.col(i) *= (std::abs(x) > 0 ? x / std::abs(x) : Complex(1, 0));
  }
  return q;
}

}  // namespace muub
