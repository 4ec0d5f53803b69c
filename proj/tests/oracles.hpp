#pragma once

// Test-only reference computations. Nothing here calls into the library's
// implementation paths, so agreement with them is evidence rather than
// tautology.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

/// Literal temperature formula p^(1/T) / (p^(1/T) + (1-p)^(1/T)).
inline double temperature_literal(double p, double temperature) {
  const double a = std::pow(p, 1.0 / temperature);
  const double b = std::pow(1.0 - p, 1.0 / temperature);
  return a / (a + b);
}

/// Direct Bayes with the corrective signal: P(R=1|Z=0)=1-gamma,
/// P(R=1|Z=1)=gamma.
inline double corrective_bayes(double pi0, double gamma) {
  const double num = (1.0 - gamma) * pi0;
  return num / (num + gamma * (1.0 - pi0));
}

inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// Joint over (z, r, x) with x = 0 for the alternating continuation and 1 for
// the repeat. Without a signal R is a constant (gamma = 1/2 and r collapsed).
struct Joint {
  double p[2][2][2] = {};  // [z][r][x]
};

inline Joint build_joint(double pi0, double gamma) {
  Joint j;
  const double pz[2] = {pi0, 1.0 - pi0};
  for (int z = 0; z < 2; ++z) {
    for (int r = 0; r < 2; ++r) {
      const double pr = (r == z) ? gamma : 1.0 - gamma;
      for (int x = 0; x < 2; ++x) {
        const double px = z == 0 ? (x == 0 ? 1.0 : 0.0) : 0.5;
        j.p[z][r][x] = pz[z] * pr * px;
      }
    }
  }
  return j;
}

/// I(X; Z | R) in bits by summing p log p(z,r,x) p(r) / (p(z,r) p(r,x)).
inline double conditional_mi(const Joint& j) {
  double total = 0.0;
  for (int r = 0; r < 2; ++r) {
    double p_r = 0.0, p_zr[2] = {}, p_rx[2] = {};
    for (int z = 0; z < 2; ++z) {
      for (int x = 0; x < 2; ++x) {
        p_r += j.p[z][r][x];
        p_zr[z] += j.p[z][r][x];
        p_rx[x] += j.p[z][r][x];
      }
    }
    for (int z = 0; z < 2; ++z) {
      for (int x = 0; x < 2; ++x) {
        const double v = j.p[z][r][x];
        if (v <= 0.0) continue;
        total += v * std::log2(v * p_r / (p_zr[z] * p_rx[x]));
      }
    }
  }
  return total;
}

/// I(X; Z) with no signal: gamma = 1/2 makes R independent of everything.
inline double plain_mi(double pi0) { return conditional_mi(build_joint(pi0, 0.5)); }

/// Hand-rolled generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int bit() { return static_cast<int>(rng_() & 1U); }
  std::uint64_t u64() { return rng_(); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle
