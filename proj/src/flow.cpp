#include "srd/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace srd {

FlowRecord advect(const KernelSpec& spec, const LandmarkState& state0, const Points& seeds, double T,
                  int steps, const AdvectOptions& opts) {
  spec.validate();
  state0.validate();
  const int n = state0.size();
  const int d = state0.dim();
  if (spec.mode == KernelMode::FrameConstrained && spec.frame->dim != d)
    throw ConfigurationError("kernel frame dimension does not match landmark dimension");
  for (const auto& s : seeds)
    if (s.size() != d || !all_finite(s)) throw InvalidInput("seed dimension mismatch or non-finite seed");

  const int P = static_cast<int>(seeds.size());
  const int nd = n * d;
  const int seed_off = 2 * nd;
  const int jac_off = seed_off + P * d;
  Eigen::VectorXd z0(jac_off + P * d * d);
  z0.head(2 * nd) = state0.flatten();
  for (int s = 0; s < P; ++s) {
    z0.segment(seed_off + s * d, d) = seeds[s];
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) z0[jac_off + s * d * d + a * d + b] = (a == b) ? 1.0 : 0.0;
  }

  const Exec exec = opts.exec;
  Rhs rhs = [&spec, n, d, P, nd, seed_off, jac_off, exec](double, const Eigen::VectorXd& z,
                                                           Eigen::VectorXd& dz) {
    phase_field(spec, n, d, z.data(), dz.data(), exec);
    const double* q = z.data();
    const double* p = z.data() + nd;
    auto seed = [&](int s) {
      double DX[kMaxDim * kMaxDim];
      field_and_jacobian(spec, n, d, q, p, z.data() + seed_off + s * d, dz.data() + seed_off + s * d, DX);
      const double* J = z.data() + jac_off + s * d * d;
      double* dJ = dz.data() + jac_off + s * d * d;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          double acc = 0.0;
          for (int c = 0; c < d; ++c) acc += DX[a * d + c] * J[c * d + b];
          dJ[a * d + b] = acc;
        }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
      for (int s = 0; s < P; ++s) seed(s);
    } else {
      for (int s = 0; s < P; ++s) seed(s);
    }
  };

  const Trajectory traj = integrate(rhs, z0, T, steps, {}, opts.record_stride);

  FlowRecord rec;
  rec.spec = spec;
  rec.n = n;
  rec.d = d;
  rec.times = traj.times;
  rec.seeds = seeds;
  rec.landmarks = landmark_states(traj, n, d);
  rec.particles.assign(P, {});
  rec.jacobians.assign(P, {});
  rec.min_det = std::numeric_limits<double>::infinity();
  rec.max_det = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < P; ++s) {
    rec.particles[s].reserve(traj.size());
    rec.jacobians[s].reserve(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const Eigen::VectorXd& z = traj.states[k];
      rec.particles[s].push_back(z.segment(seed_off + s * d, d));
      SmallMat J(d, d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) J(a, b) = z[jac_off + s * d * d + a * d + b];
      const double det = J.determinant();
      rec.min_det = std::min(rec.min_det, det);
      rec.max_det = std::max(rec.max_det, det);
      rec.jacobians[s].push_back(J);
    }
  }
  if (P == 0) rec.min_det = rec.max_det = 1.0;
  return rec;
}

namespace {

int seed_on(const FlowRecord& rec, const Point& x) {
  for (std::size_t s = 0; s < rec.seeds.size(); ++s)
    if ((rec.seeds[s] - x).norm() <= 1e-12 * (1.0 + x.norm())) return static_cast<int>(s);
  return -1;
}

}  // namespace

double pushforward_residual(const FlowRecord& record) {
  if (record.landmarks.empty()) throw ConfigurationError("empty flow record");
  double worst = 0.0;
  for (int i = 0; i < record.n; ++i) {
    const int s = seed_on(record, record.landmarks.front().q[i]);
    if (s < 0) throw ConfigurationError("no Jacobian recorded at landmark " + std::to_string(i));
    const Point& p0 = record.landmarks.front().p[i];
    const double scale = p0.norm() > 0.0 ? p0.norm() : 1.0;
    for (std::size_t k = 0; k < record.times.size(); ++k) {
      const Point pt = record.landmarks[k].p[i];
      const Point pulled = (pt.transpose() * record.jacobians[s][k]).transpose();
      worst = std::max(worst, (pulled - p0).norm() / scale);
    }
  }
  return worst;
}

LagrangianDensity transport_density(const FlowRecord& record, const GridField& f0) {
  if (f0.components != 1) throw InvalidInput("density must be a scalar field");
  if (f0.d != record.d || record.seeds.size() != f0.nodes())
    throw PreconditionError("flow particles are not seeded on the density grid");
  const double tol = 1e-12;
  for (std::size_t s = 0; s < f0.nodes(); ++s)
    if ((record.seeds[s] - f0.node_position(s)).norm() > tol)
      throw PreconditionError("seed " + std::to_string(s) + " is not at its grid node");

  LagrangianDensity out;
  out.values = GridField(f0.N, f0.d, 1);
  out.positions.resize(f0.nodes());
  out.det.resize(f0.nodes());
  double m0 = 0.0;
  double m1 = 0.0;
  const double vol = f0.cell_volume();
  for (std::size_t s = 0; s < f0.nodes(); ++s) {
    const double det = record.jacobians[s].back().determinant();
    if (!(det > 0.0))
      throw OrientationError("non-positive Jacobian determinant at particle " + std::to_string(s));
    out.det[s] = det;
    out.positions[s] = record.particles[s].back();
    out.values.values[s] = f0.values[s] / det;
    m0 += f0.values[s] * vol;
    m1 += out.values.values[s] * det * vol;
  }
  out.mass_residual = std::abs(m1 - m0) / std::max(std::abs(m0), std::numeric_limits<double>::min());
  return out;
}

}  // namespace srd
