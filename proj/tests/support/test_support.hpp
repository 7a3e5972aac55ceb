#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ngd/rational_tf.hpp"
#include "ngd/waveform.hpp"

namespace ngd::testing {

inline constexpr std::uint64_t kSeed = 20240611;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(kSeed);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

/// Product of random first- and second-order factors with left-half-plane
/// roots, time constants in [0.05, 1] s.
inline Polynomial random_stable_poly(int degree) {
  Polynomial p{1.0};
  while (degree > 0) {
    if (degree >= 2 && uniform(0.0, 1.0) < 0.5) {
      const double tau = uniform(0.05, 1.0);
      const double zeta = uniform(0.2, 1.5);
      p = p * Polynomial{1.0, 2.0 * zeta * tau, tau * tau};
      degree -= 2;
    } else {
      p = p * Polynomial{1.0, uniform(0.05, 1.0)};
      degree -= 1;
    }
  }
  return uniform(0.5, 2.0) * p;
}

/// Random zeros anywhere (either half plane), nonzero at s = 0.
inline Polynomial random_poly(int degree) {
  Polynomial p{uniform(0.5, 2.0)};
  for (int i = 0; i < degree; ++i) p = p * Polynomial{1.0, uniform(-1.0, 1.0)};
  return p;
}

inline RationalTF random_stable_tf(int max_den_degree, bool strictly_proper = false) {
  const int dd = uniform_int(1, max_den_degree);
  const int nd = uniform_int(0, strictly_proper ? dd - 1 : dd);
  return {random_poly(nd), random_stable_poly(dd)};
}

inline double max_abs_diff(const Waveform& a, const Waveform& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.samples[k] - b.samples[k]));
  return m;
}

/// Continuous phase of tf along a dense sweep from 0 to omega (nearest-branch).
inline double unwrapped_phase(const RationalTF& tf, double omega, int steps = 2000) {
  double phi = std::arg(tf(0.0));
  std::complex<double> prev = tf(0.0);
  for (int i = 1; i <= steps; ++i) {
    const auto cur = tf(omega * i / steps);
    phi += std::arg(cur / prev);
    prev = cur;
  }
  return phi;
}

}  // namespace ngd::testing
