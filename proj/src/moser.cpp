#include "srd/moser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace srd {

namespace {

void check_torus_frame(const FrameField& frame, int d) {
  if (!frame.periodic()) throw ConfigurationError("frame '" + frame.id + "' does not descend to the torus");
  if (frame.dim != d) throw ConfigurationError("grid dimension does not match frame dimension");
}

void check_scalar(const FrameField& frame, const GridField& g, const char* what) {
  if (g.components != 1) throw InvalidInput(std::string(what) + " must be a scalar field");
  if (g.values.size() != g.nodes()) throw InvalidInput(std::string(what) + " has the wrong number of values");
  check_torus_frame(frame, g.d);
}

void check_density(const GridField& f) {
  for (double v : f.values)
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("density must be strictly positive");
}

SmallMat metric_tensor(const FrameField& frame, const Point& x) {
  SmallMat A = SmallMat::Zero(frame.dim, frame.dim);
  for (int i = 1; i <= frame.count; ++i) {
    const Point X = frame_field<double>(frame, i, x);
    A += X * X.transpose();
  }
  return A;
}

// f * sub-Laplacian with the face conductances and cross weights precomputed for one density.
class WeightedOperator {
 public:
  WeightedOperator(const FrameField& frame, const GridField& f) : st_(f.N, f.d), f_(f.values) {
    const int d = f.d;
    const double h = f.spacing();
    const std::size_t n = f.nodes();
    face_.assign(d, std::vector<double>(n));
    cross_.assign(d * d, std::vector<double>());
    std::vector<SmallMat> A(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Point x = f.node_position(k);
      A[k] = metric_tensor(frame, x);
      for (int a = 0; a < d; ++a) {
        Point xf = x;
        xf[a] += 0.5 * h;
        face_[a][k] = 0.5 * (f_[k] + f_[st_.plus[a][k]]) * metric_tensor(frame, xf)(a, a) / (h * h);
      }
    }
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        if (a == b) continue;
        bool any = false;
        std::vector<double> w(n);
        for (std::size_t k = 0; k < n; ++k) {
          w[k] = f_[k] * A[k](a, b) / (4.0 * h * h);
          any = any || w[k] != 0.0;
        }
        if (any) cross_[a * d + b] = std::move(w);
      }
  }

  // out = f * L F
  void apply(const std::vector<double>& F, std::vector<double>& out, Exec exec) const {
    const int d = st_.d;
    const std::size_t n = F.size();
    out.assign(n, 0.0);
    auto node = [&](std::size_t k) {
      double acc = 0.0;
      for (int a = 0; a < d; ++a) {
        const std::size_t p = st_.plus[a][k];
        const std::size_t m = st_.minus[a][k];
        acc += face_[a][k] * (F[p] - F[k]) - face_[a][m] * (F[k] - F[m]);
      }
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const auto& w = cross_[a * d + b];
          if (w.empty()) continue;
          // D0_a (w D0_b F), the 1/(2h)^2 folded into w
          const std::size_t p = st_.plus[a][k];
          const std::size_t m = st_.minus[a][k];
          const double gp = w[p] * (F[st_.plus[b][p]] - F[st_.minus[b][p]]);
          const double gm = w[m] * (F[st_.plus[b][m]] - F[st_.minus[b][m]]);
          acc += gp - gm;
        }
      out[k] = acc;
    };
    const long long nn = static_cast<long long>(n);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
      for (long long k = 0; k < nn; ++k) node(static_cast<std::size_t>(k));
    } else {
      for (long long k = 0; k < nn; ++k) node(static_cast<std::size_t>(k));
    }
  }

  const std::vector<double>& density() const { return f_; }

 private:
  GridStencil st_;
  std::vector<double> f_;
  std::vector<std::vector<double>> face_;
  std::vector<std::vector<double>> cross_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

GridField frame_derivatives(const FrameField& frame, const GridField& F) {
  check_scalar(frame, F, "potential");
  const int d = F.d;
  const GridStencil st(F.N, d);
  const double inv2h = 0.5 * F.N;
  GridField c(F.N, d, frame.count);
  for (std::size_t k = 0; k < F.nodes(); ++k) {
    Point g(d);
    for (int a = 0; a < d; ++a) g[a] = (F.values[st.plus[a][k]] - F.values[st.minus[a][k]]) * inv2h;
    const Point x = F.node_position(k);
    for (int i = 1; i <= frame.count; ++i) c.at(k, i - 1) = frame_field<double>(frame, i, x).dot(g);
  }
  return c;
}

GridField horizontal_gradient(const FrameField& frame, const GridField& F) {
  const GridField c = frame_derivatives(frame, F);
  GridField out(F.N, F.d, F.d);
  for (std::size_t k = 0; k < F.nodes(); ++k) {
    const Point x = F.node_position(k);
    Point v = Point::Zero(F.d);
    for (int i = 1; i <= frame.count; ++i) v += c.at(k, i - 1) * frame_field<double>(frame, i, x);
    for (int a = 0; a < F.d; ++a) out.at(k, a) = v[a];
  }
  return out;
}

GridField sub_laplacian_apply(const FrameField& frame, const GridField& density, const GridField& F, Exec exec) {
  check_scalar(frame, density, "density");
  check_scalar(frame, F, "field");
  if (!density.same_shape(F)) throw InvalidInput("density and field grids differ");
  check_density(density);
  const WeightedOperator op(frame, density);
  GridField out(F.N, F.d, 1);
  op.apply(F.values, out.values, exec);
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] /= density.values[k];
  return out;
}

GridField solve_sub_laplacian(const FrameField& frame, const GridField& density, const GridField& rhs,
                              const CgOptions& opts, CgReport* report, const GridField* initial_guess) {
  check_scalar(frame, density, "density");
  check_scalar(frame, rhs, "rhs");
  if (!density.same_shape(rhs)) throw InvalidInput("density and rhs grids differ");
  check_density(density);
  const std::size_t n = rhs.nodes();
  const auto& f = density.values;

  double fsum = 0.0, frhs = 0.0, rmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    fsum += f[k];
    frhs += f[k] * rhs.values[k];
    rmax = std::max(rmax, std::abs(rhs.values[k]));
  }
  if (std::abs(frhs / fsum) > 1e-8 * std::max(1.0, rmax))
    throw IncompatibleRhs("rhs has nonzero density-weighted mean");

  // Solve M F = b with M = -f L (symmetric, positive semi-definite, kernel = constants).
  std::vector<double> b(n);
  double bmean = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    b[k] = -f[k] * rhs.values[k];
    bmean += b[k];
  }
  bmean /= static_cast<double>(n);
  for (auto& v : b) v -= bmean;

  GridField F(rhs.N, rhs.d, 1);
  if (initial_guess) {
    if (!initial_guess->same_shape(rhs)) throw InvalidInput("initial guess grid differs");
    F.values = initial_guess->values;
  }

  const WeightedOperator op(frame, density);
  auto residual_norm = [&](const std::vector<double>& r) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += (r[k] / f[k]) * (r[k] / f[k]);
    return std::sqrt(s);
  };
  double bnorm = residual_norm(b);
  const int cap = opts.max_iters > 0 ? opts.max_iters
                                     : static_cast<int>(std::min<double>(10.0 * static_cast<double>(n), 2e9));

  std::vector<double> r(n), p(n), Mp(n);
  op.apply(F.values, Mp, opts.exec);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] + Mp[k];
  CgReport rep;
  double rn = residual_norm(r);
  if (bnorm == 0.0) {
    F.values.assign(n, 0.0);
    rn = 0.0;
    bnorm = 1.0;
  }
  p = r;
  double rr = dot(r, r);
  while (rn > opts.tol * bnorm) {
    if (rep.iterations >= cap) {
      throw NotConverged("CG reached " + std::to_string(cap) + " iterations, relative residual " +
                         std::to_string(rn / bnorm));
    }
    op.apply(p, Mp, opts.exec);
    for (auto& v : Mp) v = -v;
    const double pMp = dot(p, Mp);
    if (!(pMp > 0.0)) break;
    const double alpha = rr / pMp;
    for (std::size_t k = 0; k < n; ++k) {
      F.values[k] += alpha * p[k];
      r[k] -= alpha * Mp[k];
    }
    const double rr_new = dot(r, r);
    for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + (rr_new / rr) * p[k];
    rr = rr_new;
    rn = residual_norm(r);
    ++rep.iterations;
  }

  double fF = 0.0;
  for (std::size_t k = 0; k < n; ++k) fF += f[k] * F.values[k];
  fF /= fsum;
  for (auto& v : F.values) v -= fF;
  rep.relative_residual = rn / bnorm;
  if (report) *report = rep;
  return F;
}

namespace {

struct ParticleState {
  Point x;
  SmallMat J;
};

// Velocity sum_i c_i X_i and its Jacobian at an arbitrary position.
void velocity(const FrameField& frame, const GridField& c, const Point& x, Point& v, SmallMat& Dv) {
  const int d = frame.dim;
  v = Point::Zero(d);
  Dv = SmallMat::Zero(d, d);
  for (int i = 1; i <= frame.count; ++i) {
    const InterpSample s = interpolate_cubic(c, i - 1, x);
    const Point X = frame_field<double>(frame, i, x);
    v += s.value * X;
    Dv += X * s.grad.transpose() + s.value * frame_jacobian<double>(frame, i, x);
  }
}

ParticleState rk4_particle(const FrameField& frame, const GridField& c, const ParticleState& s, double dt) {
  Point v1, v2, v3, v4;
  SmallMat D1, D2, D3, D4;
  velocity(frame, c, s.x, v1, D1);
  const SmallMat K1 = D1 * s.J;
  const Point x2 = s.x + 0.5 * dt * v1;
  const SmallMat J2 = s.J + 0.5 * dt * K1;
  velocity(frame, c, x2, v2, D2);
  const SmallMat K2 = D2 * J2;
  const Point x3 = s.x + 0.5 * dt * v2;
  const SmallMat J3 = s.J + 0.5 * dt * K2;
  velocity(frame, c, x3, v3, D3);
  const SmallMat K3 = D3 * J3;
  const Point x4 = s.x + dt * v3;
  const SmallMat J4 = s.J + dt * K3;
  velocity(frame, c, x4, v4, D4);
  const SmallMat K4 = D4 * J4;
  ParticleState out;
  out.x = s.x + (dt / 6.0) * (v1 + 2.0 * v2 + 2.0 * v3 + v4);
  out.J = s.J + (dt / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
  return out;
}

}  // namespace

MoserResult moser_transport(const FrameField& frame, const GridField& f0, const GridField& f1,
                            const MoserOptions& opts) {
  check_scalar(frame, f0, "f0");
  check_scalar(frame, f1, "f1");
  if (!f0.same_shape(f1)) throw PreconditionError("f0 and f1 live on different grids");
  if (opts.n_time < 1 || opts.substeps < 1) throw InvalidInput("n_time and substeps must be >= 1");
  for (std::size_t k = 0; k < f0.nodes(); ++k)
    if (!(f0.values[k] > 0.0) || !(f1.values[k] > 0.0) || !std::isfinite(f0.values[k]) ||
        !std::isfinite(f1.values[k]))
      throw PreconditionError("densities must be strictly positive");
  const double m0 = f0.sum();
  const double m1 = f1.sum();
  if (std::abs(m0 - m1) > 1e-10 * std::abs(m0)) throw PreconditionError("f0 and f1 carry different mass");

  const std::size_t n = f0.nodes();
  const int d = f0.d;
  const double vol = f0.cell_volume();

  MoserResult res;
  std::vector<ParticleState> parts(n);
  for (std::size_t k = 0; k < n; ++k) parts[k] = {f0.node_position(k), SmallMat::Identity(d, d)};

  auto positions_now = [&]() {
    Points p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = parts[k].x;
    return p;
  };
  res.times.push_back(0.0);
  if (opts.record_paths) res.paths.push_back(positions_now());

  const double mass0 = m0 * vol;
  GridField F_prev(f0.N, d, 1);
  GridField fmid(f0.N, d, 1);
  GridField rhs(f0.N, d, 1);
  const double dt = 1.0 / (opts.n_time * opts.substeps);
  auto& rep = res.report;
  rep.min_det = 1.0;
  rep.max_det = 1.0;
  for (int step = 0; step < opts.n_time; ++step) {
    MoserStep info;
    info.t_mid = (step + 0.5) / opts.n_time;
    for (std::size_t k = 0; k < n; ++k) {
      fmid.values[k] = (1.0 - info.t_mid) * f0.values[k] + info.t_mid * f1.values[k];
      rhs.values[k] = -(f1.values[k] - f0.values[k]) / fmid.values[k];
    }
    CgReport cg;
    const GridField F = solve_sub_laplacian(frame, fmid, rhs, opts.cg, &cg, &F_prev);
    F_prev = F;
    info.cg_iterations = cg.iterations;
    info.cg_residual = cg.relative_residual;
    rep.total_cg_iterations += cg.iterations;
    const GridField c = frame_derivatives(frame, F);

    const long long nn = static_cast<long long>(n);
    auto advance = [&](long long k) {
      for (int s = 0; s < opts.substeps; ++s) parts[k] = rk4_particle(frame, c, parts[k], dt);
    };
    if (opts.cg.exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
      for (long long k = 0; k < nn; ++k) advance(k);
    } else {
      for (long long k = 0; k < nn; ++k) advance(k);
    }

    double mass = 0.0, volume = 0.0;
    info.min_det = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      const double det = parts[k].J.determinant();
      if (!(det > 0.0)) throw OrientationError("particle Jacobian lost orientation during transport");
      info.min_det = std::min(info.min_det, det);
      rep.max_det = std::max(rep.max_det, det);
      mass += (f0.values[k] / det) * det * vol;
      volume += det * vol;
    }
    info.mass_drift = std::abs(mass - mass0) / mass0;
    info.volume_drift = std::abs(volume - 1.0);
    rep.mass_drift = std::max(rep.mass_drift, info.mass_drift);
    rep.volume_drift = std::max(rep.volume_drift, info.volume_drift);
    rep.min_det = std::min(rep.min_det, info.min_det);
    rep.steps.push_back(info);
    res.times.push_back(static_cast<double>(step + 1) / opts.n_time);
    if (opts.record_paths) res.paths.push_back(positions_now());
  }

  res.positions = positions_now();
  res.jacobians.resize(n);
  res.achieved = GridField(f0.N, d, 1);
  double err = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double det = parts[k].J.determinant();
    res.jacobians[k] = parts[k].J;
    res.achieved.values[k] = f0.values[k] / det;
    const double target = interpolate_cubic(f1, 0, parts[k].x).value;
    err += std::abs(res.achieved.values[k] - target) * det * vol;
  }
  rep.error = err / (m1 * vol);
  return res;
}

}  // namespace srd
