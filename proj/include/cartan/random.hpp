#pragma once

// Reproducible random numbers. The double mapping is fixed here rather than
// delegated to <random> distributions, whose output differs across standard
// libraries.

#include <cstdint>
#include <random>
#include <vector>

namespace cartan {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

/// Exponent vectors of all monomials of total degree <= degree, graded then lexicographic.
std::vector<std::vector<int>> monomials_up_to(int nvars, int degree);

/// Coefficients in [-1, 1] for each monomial of monomials_up_to(nvars, degree).
std::vector<double> randpoly_coefficients(int nvars, int degree, std::uint64_t seed);

}  // namespace cartan
