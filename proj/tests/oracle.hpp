#pragma once

// Independent oracles: direct optimisation over piecewise-constant control paths and a
// hand-written normal geodesic system for the Heisenberg frame.

#include "srd/kernel.hpp"
#include "srd/matching.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>

namespace srd::test {

/// Control path alpha(t) constant on m segments, q' = sum_j K(q_i, q_j) alpha_j,
/// cost = int alpha.K alpha dt + lambda |q(1) - target|^2. Parameters are flattened [segment][landmark][axis].
class ControlPathOracle {
 public:
  ControlPathOracle(const MatchProblem& prob, int segments = 10, int substeps = 100)
      : prob_(prob), m_(segments), sub_(substeps), n_(prob.size()), d_(prob.dim()) {}

  int parameters() const { return m_ * n_ * d_; }

  double objective(const Eigen::VectorXd& alpha) const {
    Eigen::VectorXd q(n_ * d_);
    for (int i = 0; i < n_; ++i) q.segment(i * d_, d_) = prob_.q0[i];
    double cost = 0.0;
    const double h = 1.0 / (m_ * sub_);
    for (int k = 0; k < m_; ++k) {
      const Eigen::VectorXd a = alpha.segment(k * n_ * d_, n_ * d_);
      for (int s = 0; s < sub_; ++s) {
        // RK4 on (q, cost); the rate of cost is a.q'
        Eigen::VectorXd k1 = velocity(q, a), k2 = velocity(q + 0.5 * h * k1, a), k3 = velocity(q + 0.5 * h * k2, a),
                        k4 = velocity(q + h * k3, a);
        cost += h / 6.0 * (a.dot(k1) + 2 * a.dot(k2) + 2 * a.dot(k3) + a.dot(k4));
        q += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      }
    }
    double miss = 0.0;
    for (int i = 0; i < n_; ++i) miss += (q.segment(i * d_, d_) - prob_.q_target[i]).squaredNorm();
    return cost + prob_.lambda * miss;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& alpha, double h = 1e-6) const {
    Eigen::VectorXd g(alpha.size());
    for (Eigen::Index k = 0; k < alpha.size(); ++k) {
      Eigen::VectorXd ap = alpha, am = alpha;
      ap[k] += h;
      am[k] -= h;
      g[k] = (objective(ap) - objective(am)) / (2 * h);
    }
    return g;
  }

  struct Result {
    double objective = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
  };

  /// The descent scheme of the shooting optimiser (secant trial step, Armijo backtracking) from zero.
  Result minimise(int max_iters = 2000, double grad_tol = 1e-6) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(parameters());
    double f = objective(x);
    Eigen::VectorXd g = gradient(x);
    double step0 = 1.0;
    int it = 0;
    for (; it < max_iters && g.norm() > grad_tol; ++it) {
      double step = step0, ft = f;
      Eigen::VectorXd xt;
      bool ok = false;
      while (step > 1e-14) {
        xt = x - step * g;
        ft = objective(xt);
        if (ft <= f - 1e-4 * step * g.squaredNorm()) {
          ok = true;
          break;
        }
        step *= 0.5;
      }
      if (!ok) break;
      const Eigen::VectorXd gt = gradient(xt);
      const double sy = (xt - x).dot(gt - g), yy = (gt - g).squaredNorm();
      step0 = (sy > 0 && yy > 0) ? std::min(sy / yy, 1e6) : std::min(2 * step, 1e6);
      x = xt;
      f = ft;
      g = gt;
    }
    return {f, g.norm(), it};
  }

 private:
  Eigen::VectorXd velocity(const Eigen::VectorXd& q, const Eigen::VectorXd& a) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n_ * d_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        v.segment(i * d_, d_) +=
            kernel_apply(prob_.spec, q.segment(i * d_, d_), q.segment(j * d_, d_), a.segment(j * d_, d_));
    return v;
  }

  MatchProblem prob_;
  int m_, sub_, n_, d_;
};

/// Normal geodesic of the Heisenberg distribution written out by hand:
/// X1 = (1, 0, 0), X2 = (0, 1, x); with u1 = a1, u2 = a2 + x a3,
/// x' = u1 X1 + u2 X2, a' = -(u2 a3, 0, 0).
inline std::array<double, 6> heisenberg_normal_geodesic(std::array<double, 6> s, double T, int steps) {
  auto f = [](const std::array<double, 6>& z) {
    const double u1 = z[3], u2 = z[4] + z[0] * z[5];
    return std::array<double, 6>{u1, u2, z[0] * u2, -u2 * z[5], 0.0, 0.0};
  };
  const double h = T / steps;
  for (int k = 0; k < steps; ++k) {
    std::array<double, 6> y{}, k1 = f(s), k2{}, k3{}, k4{};
    for (int c = 0; c < 6; ++c) y[c] = s[c] + 0.5 * h * k1[c];
    k2 = f(y);
    for (int c = 0; c < 6; ++c) y[c] = s[c] + 0.5 * h * k2[c];
    k3 = f(y);
    for (int c = 0; c < 6; ++c) y[c] = s[c] + h * k3[c];
    k4 = f(y);
    for (int c = 0; c < 6; ++c) s[c] += h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
  }
  return s;
}

}  // namespace srd::test
