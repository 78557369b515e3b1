#pragma once

// Bundled landmark configurations and matching problems, built deterministically.

#include "srd/hamiltonian.hpp"
#include "srd/kernel.hpp"
#include "srd/matching.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace srd {

/// mt19937_64 with an explicit 53-bit mapping, so draws agree across standard libraries.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Point uniform_point(int d, double lo, double hi);
  int index(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 eng_;
};

struct LandmarkExample {
  std::string name;
  KernelSpec spec;
  LandmarkState state;
};

/// pair_full, five_full, twenty_full (R^2) and pair_heisenberg, five_heisenberg,
/// twenty_heisenberg (constrained to the Heisenberg frame on R^3).
std::vector<LandmarkExample> bundled_examples();
LandmarkExample bundled_example(const std::string& name);
std::vector<std::string> bundled_example_names();

struct MatchExample {
  std::string name;
  MatchProblem problem;
};

/// line_1d (n = 1, q0 = 0 -> 1, lambda = 1), crossing_pair (n = 2, d = 2, lambda = 10)
/// and five_full (lambda = 1). All Full mode.
std::vector<MatchExample> bundled_matches();
MatchExample bundled_match(const std::string& name);

/// Random distinct points in [lo, hi]^d with pairwise separation >= min_sep.
Points random_landmarks(DeterministicRng& rng, int n, int d, double lo, double hi, double min_sep);

}  // namespace srd
