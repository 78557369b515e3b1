#include "srd/integrator.hpp"

#include "srd/detail/phase_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace srd {

std::vector<double> Trajectory::monitor(const std::string& name) const {
  const auto it = std::find(monitor_names.begin(), monitor_names.end(), name);
  if (it == monitor_names.end()) throw InvalidInput("no monitor named '" + name + "'");
  const auto m = static_cast<std::size_t>(it - monitor_names.begin());
  std::vector<double> out;
  out.reserve(monitors.size());
  for (const auto& row : monitors) out.push_back(row[m]);
  return out;
}

namespace {

bool blown_up(const Eigen::VectorXd& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (!std::isfinite(v[k]) || std::abs(v[k]) > kBlowUpThreshold) return true;
  return false;
}

}  // namespace

Eigen::VectorXd rk4_step(const Rhs& rhs, double t, const Eigen::VectorXd& z, double dt,
                         int step_index) {
  if (!(dt > 0.0) && !(dt < 0.0)) return z;
  const Eigen::Index m = z.size();
  Eigen::VectorXd k1(m), k2(m), k3(m), k4(m), y(m);
  auto stage = [&](double ts, const Eigen::VectorXd& at, Eigen::VectorXd& k) {
    rhs(ts, at, k);
    if (blown_up(k))
      throw BlowUpError(step_index, "integration blew up at step " + std::to_string(step_index));
  };
  stage(t, z, k1);
  y = z + (0.5 * dt) * k1;
  stage(t + 0.5 * dt, y, k2);
  y = z + (0.5 * dt) * k2;
  stage(t + 0.5 * dt, y, k3);
  y = z + dt * k3;
  stage(t + dt, y, k4);
  Eigen::VectorXd out = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (blown_up(out))
    throw BlowUpError(step_index, "integration blew up at step " + std::to_string(step_index));
  return out;
}

Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& z0, double T, int steps,
                     const std::vector<Monitor>& monitors, int record_stride) {
  if (steps < 1) throw InvalidInput("steps must be >= 1");
  if (!std::isfinite(T)) throw InvalidInput("non-finite horizon");
  if (record_stride < 1) throw InvalidInput("record_stride must be >= 1");
  Trajectory traj;
  for (const auto& m : monitors) traj.monitor_names.push_back(m.name);
  auto record = [&](double t, const Eigen::VectorXd& z) {
    traj.times.push_back(t);
    traj.states.push_back(z);
    std::vector<double> row;
    row.reserve(monitors.size());
    for (const auto& m : monitors) row.push_back(m.fn(t, z));
    traj.monitors.push_back(std::move(row));
  };
  record(0.0, z0);
  if (T == 0.0) return traj;

  const double dt = T / steps;
  Eigen::VectorXd z = z0;
  for (int k = 0; k < steps; ++k) {
    const double t = (k == 0) ? 0.0 : T * static_cast<double>(k) / steps;
    try {
      z = rk4_step(rhs, t, z, dt, k);
    } catch (const BlowUpError& e) {
      throw BlowUpError(e.step(), e.what(), std::move(traj));
    }
    const bool last = (k + 1 == steps);
    if (last || (k + 1) % record_stride == 0) record(last ? T : T * static_cast<double>(k + 1) / steps, z);
  }
  return traj;
}

int default_steps(double T) {
  return std::max(1, static_cast<int>(std::lround(std::abs(T) * kStepsPerUnitTime)));
}

Rhs geodesic_rhs(const KernelSpec& spec, int n, int d, Exec exec) {
  return [spec, n, d, exec](double, const Eigen::VectorXd& z, Eigen::VectorXd& dz) {
    phase_field(spec, n, d, z.data(), dz.data(), exec);
  };
}

std::vector<Monitor> geodesic_monitors(const KernelSpec& spec, int n, int d) {
  std::vector<Monitor> m;
  m.push_back({"hamiltonian", [spec, n, d](double, const Eigen::VectorXd& z) {
                 return detail::hamiltonian_flat<double>(spec, n, d, z.data(), z.data() + n * d);
               }});
  m.push_back({"max_covector_norm", [n, d](double, const Eigen::VectorXd& z) {
                 double best = 0.0;
                 for (int i = 0; i < n; ++i) best = std::max(best, z.segment(n * d + i * d, d).norm());
                 return best;
               }});
  m.push_back({"min_pair_distance", [n, d](double, const Eigen::VectorXd& z) {
                 double best = std::numeric_limits<double>::infinity();
                 for (int i = 0; i < n; ++i)
                   for (int j = i + 1; j < n; ++j)
                     best = std::min(best, (z.segment(i * d, d) - z.segment(j * d, d)).norm());
                 return best;
               }});
  return m;
}

Trajectory integrate_geodesic(const KernelSpec& spec, const LandmarkState& state0, double T,
                              int steps, Exec exec) {
  spec.validate();
  state0.validate();
  const int n = state0.size();
  const int d = state0.dim();
  if (spec.mode == KernelMode::FrameConstrained && spec.frame->dim != d)
    throw ConfigurationError("kernel frame dimension does not match landmark dimension");
  Trajectory traj = integrate(geodesic_rhs(spec, n, d, exec), state0.flatten(), T, steps,
                              geodesic_monitors(spec, n, d));
  if (state0.time != 0.0)
    for (auto& t : traj.times) t += state0.time;
  return traj;
}

std::vector<LandmarkState> landmark_states(const Trajectory& traj, int n, int d) {
  std::vector<LandmarkState> out;
  out.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k)
    out.push_back(LandmarkState::unflatten(traj.states[k].head(2 * n * d), n, d, traj.times[k]));
  return out;
}

}  // namespace srd
