#include "srd/steering.hpp"

#include "srd/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace srd {

double ControlProfile::control(const Point& y) const {
  double u = amplitude;
  if (linear.size() != 0) u += linear.dot(y);
  if (quadratic.size() != 0) u += y.dot(quadratic * y);
  return u;
}

namespace {

void check_profile(const FrameField& frame, const ControlProfile& p) {
  if (p.field < 1 || p.field > frame.count) throw InvalidInput("control profile field index out of range");
  if (!(p.duration >= 0.0) || !std::isfinite(p.duration)) throw InvalidInput("control duration must be >= 0");
  if (!std::isfinite(p.amplitude)) throw InvalidInput("non-finite control amplitude");
  if (p.linear.size() != 0 && p.linear.size() != frame.dim) throw InvalidInput("linear profile has wrong size");
  if (p.quadratic.size() != 0 && (p.quadratic.rows() != frame.dim || p.quadratic.cols() != frame.dim))
    throw InvalidInput("quadratic profile has wrong shape");
}

ControlProfile constant_profile(int field, double u, double t) {
  ControlProfile p;
  p.field = field;
  p.amplitude = u;
  p.duration = t;
  return p;
}

// Profiles of the inverse composition: reversed, with negated amplitudes.
std::vector<ControlProfile> inverse_of(const std::vector<ControlProfile>& seq) {
  std::vector<ControlProfile> inv(seq.rbegin(), seq.rend());
  for (auto& p : inv) p.amplitude = -p.amplitude;
  return inv;
}

std::vector<ControlProfile> nested(const std::vector<int>& letters, const std::vector<double>& amps,
                                   std::size_t from, double t) {
  const ControlProfile head = constant_profile(letters[from], amps[from], t);
  if (from + 1 == letters.size()) return {head};
  const std::vector<ControlProfile> rest = nested(letters, amps, from + 1, t);
  std::vector<ControlProfile> out;
  out.reserve(2 + 2 * rest.size());
  out.push_back(head);
  out.insert(out.end(), rest.begin(), rest.end());
  ControlProfile back = head;
  back.amplitude = -head.amplitude;
  out.push_back(back);
  const auto rest_inv = inverse_of(rest);
  out.insert(out.end(), rest_inv.begin(), rest_inv.end());
  return out;
}

}  // namespace

Points elementary_flow(const FrameField& frame, const ControlProfile& profile, const Points& points) {
  check_profile(frame, profile);
  for (const auto& x : points)
    if (x.size() != frame.dim) throw InvalidInput("point dimension does not match frame");
  if (profile.duration == 0.0 || points.empty()) return points;
  if (profile.constant() && profile.amplitude == 0.0) return points;

  const int d = frame.dim;
  const int P = static_cast<int>(points.size());
  Eigen::VectorXd z(P * d);
  for (int s = 0; s < P; ++s) z.segment(s * d, d) = points[s];
  const Rhs rhs = [&frame, &profile, d, P](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    for (int s = 0; s < P; ++s) {
      const Point x = y.segment(s * d, d);
      dy.segment(s * d, d) = profile.control(x) * frame_field<double>(frame, profile.field, x);
    }
  };
  const int steps = std::max(1, static_cast<int>(std::ceil(kStepsPerUnitTime * profile.duration - 1e-9)));
  const double dt = profile.duration / steps;
  for (int k = 0; k < steps; ++k) z = rk4_step(rhs, k * dt, z, dt, k);

  Points out(P);
  for (int s = 0; s < P; ++s) out[s] = z.segment(s * d, d);
  return out;
}

Points replay(const FrameField& frame, const std::vector<ControlProfile>& profiles, const Points& points) {
  Points cur = points;
  for (const auto& p : profiles) cur = elementary_flow(frame, p, cur);
  return cur;
}

std::vector<ControlProfile> commutator_profiles(const BracketWord& word, const std::vector<double>& amplitudes,
                                                double t, CommutatorOrder order) {
  if (word.length() == 0) throw InvalidInput("empty bracket word");
  if (static_cast<int>(amplitudes.size()) != word.length())
    throw InvalidInput("amplitude count must equal word length");
  if (!(t >= 0.0)) throw InvalidInput("commutator time must be >= 0");
  if (word.length() == 1) return {constant_profile(word.letters[0], amplitudes[0], t)};
  if (order == CommutatorOrder::Nested) return nested(word.letters, amplitudes, 0, t);
  std::vector<ControlProfile> out;
  for (int k = 0; k < word.length(); ++k) out.push_back(constant_profile(word.letters[k], amplitudes[k], t));
  for (int k = 0; k < word.length(); ++k) out.push_back(constant_profile(word.letters[k], -amplitudes[k], t));
  return out;
}

Points commutator_flow(const FrameField& frame, const BracketWord& word, const std::vector<double>& amplitudes,
                       double t, const Points& points, CommutatorOrder order) {
  return replay(frame, commutator_profiles(word, amplitudes, t, order), points);
}

TaylorFit taylor_order_check(const FrameField& frame, const BracketWord& word, const std::vector<double>& amplitudes,
                             const Point& point, const std::vector<double>& t_values, CommutatorOrder order) {
  if (t_values.size() < 2) throw InvalidInput("need at least two t values");
  for (double t : t_values)
    if (!(t > 0.0) || !std::isfinite(t)) throw InvalidInput("t values must be positive");
  const auto [tmin_it, tmax_it] = std::minmax_element(t_values.begin(), t_values.end());
  if (*tmax_it < 10.0 * *tmin_it * (1.0 - 1e-12)) throw InvalidInput("t values must span at least one decade");

  const int j = word.length();
  double prod = 1.0;
  for (double u : amplitudes) prod *= u;

  TaylorFit fit;
  const double floor = 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, point.norm());
  std::vector<double> lx, ly;
  double t_small = std::numeric_limits<double>::infinity();
  Point disp_small = Point::Zero(point.size());
  double t_any = std::numeric_limits<double>::infinity();
  Point disp_any = Point::Zero(point.size());
  for (double t : t_values) {
    const Point y = commutator_flow(frame, word, amplitudes, t, {point}, order).front();
    const Point disp = y - point;
    const double r = disp.norm();
    fit.displacements.push_back(r);
    if (t < t_any) {
      t_any = t;
      disp_any = disp;
    }
    if (r <= floor) {
      fit.underflow = true;
      continue;
    }
    lx.push_back(std::log(t));
    ly.push_back(std::log(r));
    if (t < t_small) {
      t_small = t;
      disp_small = disp;
    }
  }
  fit.used_samples = static_cast<int>(lx.size());
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      mx += lx[k];
      my += ly[k];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      sxy += (lx[k] - mx) * (ly[k] - my);
      sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    fit.slope = sxy / sxx;
  } else {
    fit.slope = std::numeric_limits<double>::quiet_NaN();
  }
  const double ts = lx.empty() ? t_any : t_small;
  const Point& ds = lx.empty() ? disp_any : disp_small;
  fit.coefficient = (prod == 0.0) ? Point(Point::Zero(point.size())) : Point(ds / (std::pow(ts, j) * prod));
  return fit;
}

std::vector<ControlProfile> chart_profiles(const std::vector<BracketWord>& families, const std::vector<double>& u,
                                           const ChartOptions& opts) {
  if (families.size() != u.size()) throw InvalidInput("chart coordinates must match families");
  for (double v : u) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite chart coordinate");
    if (std::abs(v) > opts.radius) throw OutOfChart("chart coordinate beyond radius");
  }
  std::vector<ControlProfile> out;
  for (std::size_t k = 0; k < families.size(); ++k) {
    if (u[k] == 0.0) continue;
    const int j = families[k].length();
    const double s = std::pow(std::abs(u[k]), 1.0 / j);
    std::vector<double> amps(j, s);
    amps[0] = std::copysign(s, u[k]);
    const auto seq = commutator_profiles(families[k], amps, 1.0, opts.order);
    out.insert(out.end(), seq.begin(), seq.end());
  }
  return out;
}

Point chart_map(const FrameField& frame, const std::vector<BracketWord>& families, const std::vector<double>& u,
                const Point& point, const ChartOptions& opts) {
  return replay(frame, chart_profiles(families, u, opts), {point}).front();
}

namespace {

SteeringPlan make_plan(const std::vector<BracketWord>& families, const std::vector<double>& u,
                       const SteerOptions& opts) {
  SteeringPlan plan;
  plan.families = families;
  plan.chart_coordinates = u;
  plan.profiles = chart_profiles(families, u, opts.chart);
  for (std::size_t k = 0; k < u.size(); ++k)
    plan.total_length_bound += std::pow(std::abs(u[k]), 1.0 / families[k].length());
  plan.total_length_bound *= opts.length_constant;
  for (const auto& p : plan.profiles) plan.path_length += std::abs(p.amplitude) * p.duration;
  return plan;
}

}  // namespace

SteerResult steer_point(const FrameField& frame, const Point& start, const Point& target,
                        const std::vector<BracketWord>& families, const SteerOptions& opts) {
  const int d = frame.dim;
  if (start.size() != d || target.size() != d) throw InvalidInput("steering endpoints have the wrong dimension");
  if (!all_finite(start) || !all_finite(target)) throw InvalidInput("non-finite steering endpoint");
  if (static_cast<int>(families.size()) != d) throw InvalidInput("steering needs exactly dim families");
  if ((target - start).norm() > opts.chart.radius) throw OutOfChart("target beyond the chart radius");

  const int m = d;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  auto as_std = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  auto residual = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return chart_map(frame, families, as_std(v), start, opts.chart) - target;
  };
  auto inside = [&](const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff() <= opts.chart.radius; };

  Eigen::VectorXd r = residual(u);
  double rn = r.norm();
  SteerResult res;
  int it = 0;
  while (rn > opts.tolerance && it < opts.max_iters) {
    Eigen::MatrixXd J(d, m);
    for (int k = 0; k < m; ++k) {
      const double h = opts.fd_step;
      Eigen::VectorXd up = u, um = u;
      up[k] += h;
      um[k] -= h;
      double span = 2.0 * h;
      Eigen::VectorXd fp, fm;
      if (!inside(up)) {
        up = u;
        span = h;
      }
      if (!inside(um)) {
        um = u;
        span = h;
      }
      fp = residual(up);
      fm = residual(um);
      J.col(k) = (fp - fm) / span;
    }
    const Eigen::VectorXd delta = J.fullPivHouseholderQr().solve(-r);
    double alpha = 1.0;
    bool accepted = false;
    for (int b = 0; b < 40; ++b, alpha *= opts.damping) {
      const Eigen::VectorXd trial = u + alpha * delta;
      if (!inside(trial) || !trial.allFinite()) continue;
      const Eigen::VectorXd rt = residual(trial);
      if (rt.norm() < rn) {
        u = trial;
        r = rt;
        rn = rt.norm();
        accepted = true;
        break;
      }
    }
    ++it;
    if (!accepted) break;
  }

  res.converged = rn <= opts.tolerance;
  res.iterations = it;
  res.residual = rn;
  res.plan = make_plan(families, as_std(u), opts);
  res.achieved = replay(frame, res.plan.profiles, {start}).front();
  return res;
}

std::vector<SweepRow> steer_sweep(const FrameField& frame, const Point& start, const Point& direction,
                                  const std::vector<double>& deltas, const std::vector<BracketWord>& families,
                                  const SteerOptions& opts) {
  const int n = static_cast<int>(deltas.size());
  std::vector<SweepRow> rows(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n; ++k) {
    try {
      const SteerResult r = steer_point(frame, start, (start + deltas[k] * direction).eval(), families, opts);
      rows[k] = {deltas[k], r.plan.total_length_bound, r.plan.path_length, r.residual, r.iterations, r.converged};
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

double ratio_spread(const std::vector<SweepRow>& rows, double exponent) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& r : rows) {
    const double q = r.length_bound / std::pow(r.delta, exponent);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return hi / lo;
}

}  // namespace srd
