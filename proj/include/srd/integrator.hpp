#pragma once

// Fixed-step classical RK4 with per-step monitors and blow-up detection.

#include "srd/core.hpp"
#include "srd/hamiltonian.hpp"

#include <functional>
#include <string>
#include <vector>

namespace srd {

/// dz = f(t, z). Implementations must fully overwrite dz (already sized like z).
using Rhs = std::function<void(double t, const Eigen::VectorXd& z, Eigen::VectorXd& dz)>;

struct Monitor {
  std::string name;
  std::function<double(double t, const Eigen::VectorXd& z)> fn;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<std::string> monitor_names;
  /// monitors[k][m] is monitor m evaluated at states[k].
  std::vector<std::vector<double>> monitors;

  std::size_t size() const { return times.size(); }
  const Eigen::VectorXd& final_state() const { return states.back(); }
  /// Column of monitor `name` over all samples; throws InvalidInput when absent.
  std::vector<double> monitor(const std::string& name) const;
};

/// Any state component with |value| above this aborts the integration.
inline constexpr double kBlowUpThreshold = 1e12;
inline constexpr int kStepsPerUnitTime = 1000;

class BlowUpError : public Error {
 public:
  BlowUpError(int step, const std::string& what, Trajectory partial = {})
      : Error(what), step_(step), partial_(std::move(partial)) {}
  int step() const { return step_; }
  const Trajectory& partial() const { return partial_; }

 private:
  int step_;
  Trajectory partial_;
};

/// One classical four-stage step. Throws BlowUpError(step_index) on non-finite or
/// oversized stage values.
Eigen::VectorXd rk4_step(const Rhs& rhs, double t, const Eigen::VectorXd& z, double dt,
                         int step_index = 0);

/// Uniform grid t_k = k T / steps. Samples every `record_stride` steps plus the final one.
/// T == 0 returns the single initial sample.
Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& z0, double T, int steps,
                     const std::vector<Monitor>& monitors = {}, int record_stride = 1);

int default_steps(double T);

// Landmark geodesics.

Rhs geodesic_rhs(const KernelSpec& spec, int n, int d, Exec exec = Exec::Parallel);

/// Monitors: "hamiltonian", "max_covector_norm", "min_pair_distance".
std::vector<Monitor> geodesic_monitors(const KernelSpec& spec, int n, int d);

Trajectory integrate_geodesic(const KernelSpec& spec, const LandmarkState& state0, double T,
                              int steps, Exec exec = Exec::Parallel);

std::vector<LandmarkState> landmark_states(const Trajectory& traj, int n, int d);

}  // namespace srd
