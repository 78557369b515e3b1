#pragma once

// Shared helpers for the test executables: random instances and finite-difference oracles.

#include "srd/examples.hpp"
#include "srd/hamiltonian.hpp"
#include "srd/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>

namespace srd::test {

inline double max_abs_diff(const Point& a, const Point& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const Points& a, const Points& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, max_abs_diff(a[i], b[i]));
  return m;
}

inline double max_norm(const Points& a) {
  double m = 0.0;
  for (const auto& x : a) m = std::max(m, x.cwiseAbs().maxCoeff());
  return m;
}

/// Full mode in dimension d or the frame-constrained spec whose frame fixes d.
inline KernelSpec random_spec(DeterministicRng& rng, bool constrained, int d) {
  const double sigma = rng.uniform(0.3, 1.5);
  if (!constrained) return KernelSpec::full(sigma);
  if (d == 2) return KernelSpec::constrained(sigma, rng.uniform() < 0.5 ? "grushin" : "torus_sine");
  if (d == 3) return KernelSpec::constrained(sigma, "heisenberg");
  return KernelSpec::constrained(sigma, "translation", d);
}

inline LandmarkState random_state(DeterministicRng& rng, int n, int d, double pscale = 1.0) {
  LandmarkState s;
  s.q = random_landmarks(rng, n, d, -1.0, 1.0, 0.15);
  for (int i = 0; i < n; ++i) s.p.push_back(rng.uniform_point(d, -pscale, pscale));
  return s;
}

/// Central differences of h: (dh/dp, -dh/dq).
inline PhaseVelocity fd_symplectic(const KernelSpec& spec, const LandmarkState& s, double h) {
  PhaseVelocity out;
  for (int i = 0; i < s.size(); ++i) {
    Point dq(s.dim()), dp(s.dim());
    for (int a = 0; a < s.dim(); ++a) {
      LandmarkState sp = s, sm = s;
      sp.p[i][a] += h;
      sm.p[i][a] -= h;
      dq[a] = (hamiltonian(spec, sp) - hamiltonian(spec, sm)) / (2.0 * h);
      sp = s;
      sm = s;
      sp.q[i][a] += h;
      sm.q[i][a] -= h;
      dp[a] = -(hamiltonian(spec, sp) - hamiltonian(spec, sm)) / (2.0 * h);
    }
    out.dq.push_back(dq);
    out.dp.push_back(dp);
  }
  return out;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (std::log(x[k]) - mx) * (std::log(y[k]) - my);
    sxx += (std::log(x[k]) - mx) * (std::log(x[k]) - mx);
  }
  return sxy / sxx;
}

}  // namespace srd::test
