#pragma once

// Inexact landmark matching by geodesic shooting on the penalized functional
//   J(p0) = 2 h(q0, p0) + lambda * sum_i |q_i(1) - target_i|^2,
// with the gradient obtained by a reverse sweep through the discrete RK4 trajectory.

#include "srd/hamiltonian.hpp"
#include "srd/integrator.hpp"
#include "srd/kernel.hpp"

#include <vector>

namespace srd {

struct OptimizerOptions {
  int max_iters = 5000;
  double grad_tol = 1e-8;
  double shrink = 0.5;
  double armijo = 1e-4;
};

struct MatchProblem {
  Points q0;
  Points q_target;
  KernelSpec spec;
  double lambda = 1.0;
  int steps = kStepsPerUnitTime;
  OptimizerOptions optimizer;

  void validate() const;
  int size() const { return static_cast<int>(q0.size()); }
  int dim() const { return q0.empty() ? 0 : static_cast<int>(q0.front().size()); }
};

double shoot_objective(const MatchProblem& prob, const Points& p0);

struct ObjectiveGradient {
  double value = 0.0;
  Points gradient;
};

/// Exact gradient of the discrete objective (discretize-then-differentiate).
ObjectiveGradient shoot_value_and_gradient(const MatchProblem& prob, const Points& p0);
Points shoot_gradient(const MatchProblem& prob, const Points& p0);

/// |P(1) + dG/2| / lambda over all landmarks, i.e. the distance of p_i(1) from
/// lambda (target_i - q_i(1)). Vanishes at stationary points of J.
double transversality_residual(const MatchProblem& prob, const LandmarkState& final_state);

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct MatchReport {
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double transversality = 0.0;
  double mismatch = 0.0;  // sum_i |q_i(1) - target_i|^2
  std::vector<IterationRecord> log;
};

struct MatchResult {
  Points p0;
  Trajectory trajectory;
  MatchReport report;
};

/// Gradient descent with Armijo backtracking from p0 = 0. Hitting max_iters yields a
/// non-converged report rather than an exception.
MatchResult match(const MatchProblem& prob);

double norm(const Points& v);

}  // namespace srd
