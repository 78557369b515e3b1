#include "srd/hamiltonian.hpp"

#include "srd/detail/phase_field.hpp"

#include <algorithm>
#include <cmath>

namespace srd {

void LandmarkState::validate() const {
  if (q.empty()) throw InvalidInput("landmark state needs at least one landmark");
  if (p.size() != q.size()) throw InvalidInput("q and p differ in landmark count");
  require_distinct(q);
  for (const auto& c : p) {
    if (c.size() != q.front().size()) throw InvalidInput("covector dimension mismatch");
    if (!all_finite(c)) throw InvalidInput("non-finite covector");
  }
  if (!std::isfinite(time)) throw InvalidInput("non-finite time");
}

Eigen::VectorXd LandmarkState::flatten() const {
  const int n = size();
  const int d = dim();
  Eigen::VectorXd z(2 * n * d);
  for (int i = 0; i < n; ++i) {
    z.segment(i * d, d) = q[i];
    z.segment(n * d + i * d, d) = p[i];
  }
  return z;
}

LandmarkState LandmarkState::unflatten(const Eigen::VectorXd& z, int n, int d, double t) {
  LandmarkState s;
  s.time = t;
  s.q.resize(n);
  s.p.resize(n);
  for (int i = 0; i < n; ++i) {
    s.q[i] = z.segment(i * d, d);
    s.p[i] = z.segment(n * d + i * d, d);
  }
  return s;
}

namespace {

void check(const KernelSpec& spec, const LandmarkState& s) {
  spec.validate();
  s.validate();
  if (spec.frame && spec.mode == KernelMode::FrameConstrained && spec.frame->dim != s.dim())
    throw ConfigurationError("kernel frame dimension does not match landmark dimension");
}

}  // namespace

double hamiltonian(const KernelSpec& spec, const LandmarkState& state) {
  check(spec, state);
  const Eigen::VectorXd z = state.flatten();
  const int n = state.size();
  const int d = state.dim();
  return detail::hamiltonian_flat<double>(spec, n, d, z.data(), z.data() + n * d);
}

void phase_field(const KernelSpec& spec, int n, int d, const double* z, double* out, Exec exec) {
  detail::phase_field_flat<double>(spec, n, d, z, z + n * d, out, out + n * d, exec);
}

PhaseVelocity symplectic_gradient(const KernelSpec& spec, const LandmarkState& state, Exec exec) {
  check(spec, state);
  const int n = state.size();
  const int d = state.dim();
  const Eigen::VectorXd z = state.flatten();
  Eigen::VectorXd out(z.size());
  phase_field(spec, n, d, z.data(), out.data(), exec);
  const LandmarkState v = LandmarkState::unflatten(out, n, d, state.time);
  return {v.q, v.p};
}

void field_and_jacobian(const KernelSpec& spec, int n, int d, const double* q, const double* p,
                        const double* x, double* v, double* jac) {
  const double inv_sigma = 1.0 / spec.sigma;
  for (int a = 0; a < d; ++a) v[a] = 0.0;
  if (jac)
    for (int a = 0; a < d * d; ++a) jac[a] = 0.0;
  Point y(d);
  for (int a = 0; a < d; ++a) y[a] = x[a];

  std::vector<Point> Xy;
  std::vector<SmallMat> DXy;
  if (spec.mode == KernelMode::FrameConstrained) {
    for (int k = 1; k <= spec.frame->count; ++k) {
      Xy.push_back(frame_field<double>(*spec.frame, k, y));
      if (jac) DXy.push_back(frame_jacobian<double>(*spec.frame, k, y));
    }
  }

  for (int j = 0; j < n; ++j) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double dx = x[a] - q[j * d + a];
      r2 += dx * dx;
    }
    const double e = std::exp(-r2 * 0.5 * inv_sigma);
    if (spec.mode == KernelMode::Full) {
      for (int a = 0; a < d; ++a) v[a] += e * p[j * d + a];
      if (jac)
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b)
            jac[a * d + b] += -inv_sigma * e * p[j * d + a] * (x[b] - q[j * d + b]);
      continue;
    }
    Point xj(d);
    for (int a = 0; a < d; ++a) xj[a] = q[j * d + a];
    for (int k = 1; k <= spec.frame->count; ++k) {
      const Point Xk = frame_field<double>(*spec.frame, k, xj);
      double w = 0.0;
      for (int a = 0; a < d; ++a) w += p[j * d + a] * Xk[a];
      const Point& Xky = Xy[k - 1];
      for (int a = 0; a < d; ++a) v[a] += e * w * Xky[a];
      if (jac) {
        const SmallMat& D = DXy[k - 1];
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b)
            jac[a * d + b] += w * (-inv_sigma * e * Xky[a] * (x[b] - q[j * d + b]) + e * D(a, b));
      }
    }
  }
}

Point field_from_momenta(const KernelSpec& spec, const LandmarkState& state, const Point& x) {
  check(spec, state);
  if (x.size() != state.dim() || !all_finite(x)) throw InvalidInput("bad evaluation point");
  const Eigen::VectorXd z = state.flatten();
  const int n = state.size();
  const int d = state.dim();
  Point v(d);
  field_and_jacobian(spec, n, d, z.data(), z.data() + n * d, x.data(), v.data(), nullptr);
  return v;
}

SmallMat field_jacobian(const KernelSpec& spec, const LandmarkState& state, const Point& x) {
  check(spec, state);
  if (x.size() != state.dim() || !all_finite(x)) throw InvalidInput("bad evaluation point");
  const Eigen::VectorXd z = state.flatten();
  const int n = state.size();
  const int d = state.dim();
  Point v(d);
  std::vector<double> jac(d * d);
  field_and_jacobian(spec, n, d, z.data(), z.data() + n * d, x.data(), v.data(), jac.data());
  SmallMat J(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) J(a, b) = jac[a * d + b];
  return J;
}

double abnormal_residual(const FrameField& frame, const std::vector<LandmarkState>& trajectory) {
  if (trajectory.empty()) throw InvalidInput("empty trajectory");
  double num = 0.0;
  double den = 0.0;
  for (const auto& s : trajectory) {
    if (s.dim() != frame.dim) throw ConfigurationError("frame dimension does not match trajectory");
    for (int i = 0; i < s.size(); ++i) {
      den = std::max(den, s.p[i].norm());
      for (int k = 1; k <= frame.count; ++k)
        num = std::max(num, std::abs(s.p[i].dot(frame_field<double>(frame, k, s.q[i]))));
    }
  }
  if (den == 0.0) throw DegenerateCovector("singular covector must be nonzero");
  return num / den;
}

}  // namespace srd
