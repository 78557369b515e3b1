#pragma once

// Chow-Rashevski machinery on finitely many particles: elementary horizontal flows,
// commutator compositions, Taylor-order fits, the fractionally scaled chart map,
// local point steering and its ball-box length bound.

#include "srd/core.hpp"
#include "srd/frame.hpp"

#include <vector>

namespace srd {

/// Control u(y) X_field(y) applied for `duration`. u(y) = amplitude + linear.y + y^T quadratic y;
/// empty `linear` / `quadratic` mean a constant profile.
struct ControlProfile {
  int field = 1;
  double amplitude = 0.0;
  Point linear;
  SmallMat quadratic;
  double duration = 1.0;

  double control(const Point& y) const;
  bool constant() const { return linear.size() == 0 && quadratic.size() == 0; }
};

/// Integrates dy/dt = u(y) X_field(y) with RK4 at 1000 steps per unit time, pointwise.
Points elementary_flow(const FrameField& frame, const ControlProfile& profile, const Points& points);
Points replay(const FrameField& frame, const std::vector<ControlProfile>& profiles, const Points& points);

enum class CommutatorOrder {
  /// Right-nested group commutators: Phi_(i) is the flow of u X_i and
  /// Phi_(i, J) = Phi_J^{-1} o Phi_i^{-u} o Phi_J o Phi_i^{u}. Reduces to the flat order
  /// for words of length 2, and displaces by t^j u_1...u_j X_I + O(t^{j+1}).
  Nested,
  /// Phi^{-u_j} o ... o Phi^{-u_1} o Phi^{u_j} o ... o Phi^{u_1}: 2j flows, applied
  /// first-to-last. Only a depth-j commutator for j <= 2.
  Flat,
};

/// Elementary profiles (in application order) realising Phi_I(t, u_1, ..., u_j).
std::vector<ControlProfile> commutator_profiles(const BracketWord& word, const std::vector<double>& amplitudes,
                                                double t, CommutatorOrder order = CommutatorOrder::Nested);

Points commutator_flow(const FrameField& frame, const BracketWord& word, const std::vector<double>& amplitudes,
                       double t, const Points& points, CommutatorOrder order = CommutatorOrder::Nested);

struct TaylorFit {
  double slope = 0.0;        // NaN when fewer than two samples survive
  Point coefficient;         // displacement / (t^j prod u) at the smallest usable t
  bool underflow = false;    // some samples dropped below 10 eps
  int used_samples = 0;
  std::vector<double> displacements;
};

/// Least-squares slope of log |Phi_I(t)(x) - x| against log t. t_values must decrease and
/// span at least one decade.
TaylorFit taylor_order_check(const FrameField& frame, const BracketWord& word, const std::vector<double>& amplitudes,
                             const Point& point, const std::vector<double>& t_values,
                             CommutatorOrder order = CommutatorOrder::Nested);

struct ChartOptions {
  double radius = 0.1;
  CommutatorOrder order = CommutatorOrder::Nested;
};

/// Profiles of phi_m(u_m) o ... o phi_1(u_1) where phi_k(u) = Phi_{I_k}(1, |u|^{(1-j)/j} u, |u|^{1/j}, ...).
/// Families with u_k = 0 contribute nothing. Throws OutOfChart when |u_k| > radius.
std::vector<ControlProfile> chart_profiles(const std::vector<BracketWord>& families, const std::vector<double>& u,
                                           const ChartOptions& opts = {});

Point chart_map(const FrameField& frame, const std::vector<BracketWord>& families, const std::vector<double>& u,
                const Point& point, const ChartOptions& opts = {});

struct SteeringPlan {
  std::vector<ControlProfile> profiles;
  std::vector<BracketWord> families;
  std::vector<double> chart_coordinates;
  /// C * sum_k |u_k|^{1/j_k}.
  double total_length_bound = 0.0;
  /// sum over profiles of |u| * duration (the frame is orthonormal for the metric, so
  /// each field has unit norm). Length of the replayed horizontal path.
  double path_length = 0.0;
};

struct SteerOptions {
  ChartOptions chart;
  double damping = 0.5;
  double fd_step = 1e-6;
  int max_iters = 50;
  double tolerance = 1e-10;
  double length_constant = 1.0;
};

struct SteerResult {
  SteeringPlan plan;
  Point achieved;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

/// Damped Newton on u -> chart_map(u, start) - target with a central-difference Jacobian.
/// Stagnation returns the best iterate with converged = false.
SteerResult steer_point(const FrameField& frame, const Point& start, const Point& target,
                        const std::vector<BracketWord>& families, const SteerOptions& opts = {});

struct SweepRow {
  double delta = 0.0;
  double length_bound = 0.0;
  double path_length = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Steers start -> start + delta * direction for each delta.
std::vector<SweepRow> steer_sweep(const FrameField& frame, const Point& start, const Point& direction,
                                  const std::vector<double>& deltas, const std::vector<BracketWord>& families,
                                  const SteerOptions& opts = {});

/// Largest over smallest of bound / delta^exponent across the rows.
double ratio_spread(const std::vector<SweepRow>& rows, double exponent);

}  // namespace srd
