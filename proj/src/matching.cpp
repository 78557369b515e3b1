#include "srd/matching.hpp"

#include "srd/detail/phase_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace srd {

void MatchProblem::validate() const {
  spec.validate();
  if (q0.empty()) throw InvalidInput("match problem needs landmarks");
  if (q0.size() != q_target.size()) throw InvalidInput("source and target landmark counts differ");
  require_distinct(q0);
  for (const auto& t : q_target)
    if (t.size() != q0.front().size() || !all_finite(t)) throw InvalidInput("bad target landmark");
  if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
  if (steps < 1) throw InvalidInput("steps must be >= 1");
  if (spec.mode == KernelMode::FrameConstrained && spec.frame->dim != dim())
    throw ConfigurationError("kernel frame dimension does not match landmark dimension");
  if (!(optimizer.shrink > 0.0 && optimizer.shrink < 1.0)) throw InvalidInput("shrink must be in (0,1)");
}

double norm(const Points& v) {
  double s = 0.0;
  for (const auto& x : v) s += x.squaredNorm();
  return std::sqrt(s);
}

namespace {

LandmarkState initial_state(const MatchProblem& prob, const Points& p0) {
  if (p0.size() != prob.q0.size()) throw InvalidInput("p0 has the wrong landmark count");
  LandmarkState s{prob.q0, p0, 0.0};
  return s;
}

double mismatch(const MatchProblem& prob, const Eigen::VectorXd& z) {
  const int d = prob.dim();
  double m = 0.0;
  for (int i = 0; i < prob.size(); ++i) m += (z.segment(i * d, d) - prob.q_target[i]).squaredNorm();
  return m;
}

double objective_from(const MatchProblem& prob, const Eigen::VectorXd& z0, const Eigen::VectorXd& z1) {
  const int n = prob.size();
  const int d = prob.dim();
  const double h0 = detail::hamiltonian_flat<double>(prob.spec, n, d, z0.data(), z0.data() + n * d);
  return 2.0 * h0 + prob.lambda * mismatch(prob, z1);
}

// (df/dz)^T lam via a Hessian-vector product of h: f = (h_p, -h_q), so
// f'^T lam = (-D dp[w], D dq[w]) with w = (-lam_p, lam_q).
Eigen::VectorXd phase_vjp(const KernelSpec& spec, int n, int d, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& lam) {
  using D = Dual<double>;
  const int nd = n * d;
  std::vector<D> z(2 * nd), out(2 * nd);
  for (int k = 0; k < nd; ++k) {
    z[k] = D(y[k], -lam[nd + k]);
    z[nd + k] = D(y[nd + k], lam[k]);
  }
  detail::phase_field_flat<D>(spec, n, d, z.data(), z.data() + nd, out.data(), out.data() + nd,
                              Exec::Serial);
  Eigen::VectorXd g(2 * nd);
  for (int k = 0; k < nd; ++k) {
    g[k] = -out[nd + k].d;
    g[nd + k] = out[k].d;
  }
  return g;
}

}  // namespace

double shoot_objective(const MatchProblem& prob, const Points& p0) {
  prob.validate();
  const LandmarkState s0 = initial_state(prob, p0);
  const Eigen::VectorXd z0 = s0.flatten();
  const Trajectory traj =
      integrate(geodesic_rhs(prob.spec, prob.size(), prob.dim()), z0, 1.0, prob.steps, {}, prob.steps);
  return objective_from(prob, z0, traj.final_state());
}

ObjectiveGradient shoot_value_and_gradient(const MatchProblem& prob, const Points& p0) {
  prob.validate();
  const int n = prob.size();
  const int d = prob.dim();
  const int nd = n * d;
  const LandmarkState s0 = initial_state(prob, p0);
  const Eigen::VectorXd z0 = s0.flatten();
  const Rhs rhs = geodesic_rhs(prob.spec, n, d);
  const Trajectory traj = integrate(rhs, z0, 1.0, prob.steps);
  const Eigen::VectorXd& z1 = traj.final_state();

  ObjectiveGradient out;
  out.value = objective_from(prob, z0, z1);

  Eigen::VectorXd lam = Eigen::VectorXd::Zero(2 * nd);
  for (int i = 0; i < n; ++i)
    lam.segment(i * d, d) = 2.0 * prob.lambda * (z1.segment(i * d, d) - prob.q_target[i]);

  const double dt = 1.0 / prob.steps;
  Eigen::VectorXd k1(2 * nd), k2(2 * nd), k3(2 * nd), k4(2 * nd);
  for (int k = prob.steps - 1; k >= 0; --k) {
    const Eigen::VectorXd& z = traj.states[k];
    const double t = traj.times[k];
    rhs(t, z, k1);
    const Eigen::VectorXd y2 = z + 0.5 * dt * k1;
    rhs(t + 0.5 * dt, y2, k2);
    const Eigen::VectorXd y3 = z + 0.5 * dt * k2;
    rhs(t + 0.5 * dt, y3, k3);
    const Eigen::VectorXd y4 = z + dt * k3;

    const Eigen::VectorXd kb4 = (dt / 6.0) * lam;
    const Eigen::VectorXd yb4 = phase_vjp(prob.spec, n, d, y4, kb4);
    const Eigen::VectorXd kb3 = (dt / 3.0) * lam + dt * yb4;
    const Eigen::VectorXd yb3 = phase_vjp(prob.spec, n, d, y3, kb3);
    const Eigen::VectorXd kb2 = (dt / 3.0) * lam + 0.5 * dt * yb3;
    const Eigen::VectorXd yb2 = phase_vjp(prob.spec, n, d, y2, kb2);
    const Eigen::VectorXd kb1 = (dt / 6.0) * lam + 0.5 * dt * yb2;
    const Eigen::VectorXd yb1 = phase_vjp(prob.spec, n, d, z, kb1);
    lam += yb1 + yb2 + yb3 + yb4;
  }

  // d(2h(z0))/dp0 = 2 dq(z0).
  Eigen::VectorXd f0(2 * nd);
  rhs(0.0, z0, f0);
  out.gradient.resize(n);
  for (int i = 0; i < n; ++i)
    out.gradient[i] = (2.0 * f0.segment(i * d, d) + lam.segment(nd + i * d, d)).eval();
  return out;
}

Points shoot_gradient(const MatchProblem& prob, const Points& p0) {
  return shoot_value_and_gradient(prob, p0).gradient;
}

double transversality_residual(const MatchProblem& prob, const LandmarkState& final_state) {
  double s = 0.0;
  for (int i = 0; i < prob.size(); ++i)
    s += (final_state.p[i] - prob.lambda * (prob.q_target[i] - final_state.q[i])).squaredNorm();
  return std::sqrt(s) / prob.lambda;
}

MatchResult match(const MatchProblem& prob) {
  prob.validate();
  const int n = prob.size();
  const int d = prob.dim();
  const auto& opt = prob.optimizer;

  Points p(n, Point::Zero(d));
  ObjectiveGradient cur = shoot_value_and_gradient(prob, p);
  MatchResult res;
  double step0 = 1.0;
  int iter = 0;
  bool converged = false;
  res.report.log.push_back({0, cur.value, norm(cur.gradient), 0.0});
  while (true) {
    const double gn = norm(cur.gradient);
    if (gn <= opt.grad_tol) {
      converged = true;
      break;
    }
    if (iter >= opt.max_iters) break;

    double step = step0;
    Points trial(n);
    double f_trial = 0.0;
    bool accepted = false;
    while (step > 1e-14) {
      for (int i = 0; i < n; ++i) trial[i] = p[i] - step * cur.gradient[i];
      try {
        f_trial = shoot_objective(prob, trial);
      } catch (const BlowUpError&) {
        step *= opt.shrink;
        continue;
      }
      // Near the optimum the decrease drops below the rounding of J itself; accept
      // trial values within a few ulps so the iteration can still reach grad_tol.
      const double noise = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(cur.value);
      if (f_trial <= cur.value - opt.armijo * step * gn * gn + noise) {
        accepted = true;
        break;
      }
      step *= opt.shrink;
    }
    if (!accepted) break;  // line search stagnated

    ObjectiveGradient next = shoot_value_and_gradient(prob, trial);
    // Next trial step from the secant pair (Barzilai-Borwein, s.y / y.y); Armijo
    // backtracking from it keeps the descent monotone.
    double sy = 0.0, yy = 0.0;
    for (int i = 0; i < n; ++i) {
      const Point s = trial[i] - p[i];
      const Point y = next.gradient[i] - cur.gradient[i];
      sy += s.dot(y);
      yy += y.squaredNorm();
    }
    p = trial;
    cur = std::move(next);
    ++iter;
    res.report.log.push_back({iter, cur.value, norm(cur.gradient), step});
    step0 = (sy > 0.0 && yy > 0.0) ? std::min(sy / yy, 1e6) : std::min(step / opt.shrink, 1e6);
  }

  res.p0 = p;
  res.trajectory = integrate_geodesic(prob.spec, LandmarkState{prob.q0, p, 0.0}, 1.0, prob.steps);
  const LandmarkState fin = LandmarkState::unflatten(res.trajectory.final_state(), n, d, 1.0);
  res.report.converged = converged;
  res.report.iterations = iter;
  res.report.objective = cur.value;
  res.report.grad_norm = norm(cur.gradient);
  res.report.transversality = transversality_residual(prob, fin);
  res.report.mismatch = mismatch(prob, res.trajectory.final_state());
  return res;
}

}  // namespace srd
