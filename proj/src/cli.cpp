#include "srd/cli.hpp"

#include "srd/examples.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace srd::cli {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::Shoot: return "shoot";
    case Command::Match: return "match";
    case Command::Steer: return "steer";
    case Command::Moser: return "moser";
    case Command::Verify: return "verify";
  }
  return "?";
}

class Outputs {
 public:
  explicit Outputs(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw PreconditionError("output directory '" + dir + "' is not writable");
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw PreconditionError("cannot write '" + (dir_ / name).string() + "'");
    f << content;
    files_.push_back(name);
  }
  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

struct LandmarkInput {
  KernelSpec spec;
  LandmarkState state;
};

LandmarkInput landmark_input(const Json& c) {
  if (c.contains("example")) {
    const LandmarkExample e = bundled_example(c["example"].get<std::string>());
    return {e.spec, e.state};
  }
  if (!c.contains("kernel") || !c.contains("state"))
    throw InvalidInput("shoot needs \"kernel\" and \"state\" (or \"example\")");
  LandmarkInput in{kernel_from_json(c["kernel"]), state_from_json(c["state"])};
  if (in.spec.mode == KernelMode::FrameConstrained && in.spec.frame_dim() != in.state.dim())
    throw ConfigurationError("kernel frame dimension does not match landmark dimension");
  return in;
}

Points grid_seeds(const Json& g, int d) {
  const int N = g.value("N", 8);
  const double lo = g.value("lo", -1.0);
  const double hi = g.value("hi", 1.0);
  if (N < 1 || !(hi > lo)) throw InvalidInput("particle_grid needs N >= 1 and hi > lo");
  Points pts;
  std::size_t count = 1;
  for (int a = 0; a < d; ++a) count *= static_cast<std::size_t>(N);
  for (std::size_t k = 0; k < count; ++k) {
    Point x(d);
    std::size_t r = k;
    for (int a = d - 1; a >= 0; --a) {
      const int i = static_cast<int>(r % N);
      r /= N;
      x[a] = N == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (N - 1);
    }
    pts.push_back(x);
  }
  return pts;
}

template <class F>
std::string to_text(F&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

RunResult run_shoot(const ExperimentConfig& cfg, Outputs& out, std::ostream& log) {
  const Json& c = cfg.raw;
  const LandmarkInput in = landmark_input(c);
  const int n = in.state.size();
  const int d = in.state.dim();
  const double T = c.value("T", 1.0);
  if (!(T >= 0.0)) throw InvalidInput("T must be >= 0");
  const int steps = c.value("steps", default_steps(T));
  const Trajectory traj = integrate_geodesic(in.spec, in.state, T, steps);

  RunResult res;
  out.write("trajectory.csv", to_text([&](std::ostream& os) { write_trajectory_csv(os, in.spec, traj, n, d); }));
  out.write_json("trajectory.json", trajectory_to_json(in.spec, traj, n, d));

  const auto h = traj.monitor("hamiltonian");
  double drift = 0.0;
  for (double v : h) drift = std::max(drift, std::abs(v - h.front()));
  res.residuals["hamiltonian_drift"] = drift / std::max(std::abs(h.front()), std::numeric_limits<double>::min());
  if (in.spec.mode == KernelMode::FrameConstrained)
    res.residuals["abnormal_residual"] = abnormal_residual(*in.spec.frame, landmark_states(traj, n, d));

  if (c.contains("particles") || c.contains("particle_grid")) {
    Points seeds = c.contains("particles") ? points_from_json(c["particles"]) : grid_seeds(c["particle_grid"], d);
    const std::size_t user = seeds.size();
    // landmark base points ride along so the pushforward identity can be checked
    for (const auto& q : in.state.q) seeds.push_back(q);
    const FlowRecord rec = advect(in.spec, in.state, seeds, T, steps);
    out.write("flow.csv", to_text([&](std::ostream& os) { write_flow_csv(os, rec); }));
    Json summary = flow_summary_json(rec);
    summary["landmark_seed_offset"] = user;
    out.write_json("flow.json", summary);
    res.residuals["pushforward_residual"] = summary["pushforward_residual"].get<double>();
    res.residuals["min_det"] = rec.min_det;
  }
  log << "shoot: " << n << " landmarks, T=" << T << ", " << steps << " steps, relative h drift "
      << res.residuals["hamiltonian_drift"] << "\n";
  return res;
}

RunResult run_match(const ExperimentConfig& cfg, Outputs& out, std::ostream& log) {
  const Json& c = cfg.raw;
  MatchProblem prob;
  if (c.contains("example"))
    prob = bundled_match(c["example"].get<std::string>()).problem;
  else if (c.contains("problem"))
    prob = match_problem_from_json(c["problem"]);
  else
    throw InvalidInput("match needs \"problem\" or \"example\"");
  const MatchResult m = match(prob);

  Json report = match_report_json(m);
  report["problem"] = match_problem_to_json(prob);
  out.write_json("match_report.json", report);
  out.write("trajectory.csv", to_text([&](std::ostream& os) {
              write_trajectory_csv(os, prob.spec, m.trajectory, prob.size(), prob.dim());
            }));

  RunResult res;
  res.residuals["objective"] = m.report.objective;
  res.residuals["grad_norm"] = m.report.grad_norm;
  res.residuals["transversality"] = m.report.transversality;
  res.residuals["mismatch"] = m.report.mismatch;
  res.residuals["iterations"] = m.report.iterations;
  if (!m.report.converged) {
    res.status = kNotConverged;
    res.message = "matching stopped before grad_tol";
  }
  log << "match: " << (m.report.converged ? "converged" : "NOT converged") << " after " << m.report.iterations
      << " iterations, objective " << m.report.objective << ", |grad| " << m.report.grad_norm << "\n";
  return res;
}

SteerOptions steer_options(const Json& c) {
  SteerOptions o;
  o.chart.radius = c.value("radius", o.chart.radius);
  const std::string order = c.value("order", std::string("nested"));
  if (order == "nested")
    o.chart.order = CommutatorOrder::Nested;
  else if (order == "flat")
    o.chart.order = CommutatorOrder::Flat;
  else
    throw ConfigurationError("order must be \"nested\" or \"flat\"");
  o.damping = c.value("damping", o.damping);
  o.fd_step = c.value("fd_step", o.fd_step);
  o.max_iters = c.value("max_iters", o.max_iters);
  o.tolerance = c.value("tolerance", o.tolerance);
  o.length_constant = c.value("length_constant", o.length_constant);
  return o;
}

RunResult run_steer(const ExperimentConfig& cfg, Outputs& out, std::ostream& log) {
  const Json& c = cfg.raw;
  if (!c.contains("frame")) throw InvalidInput("steer needs \"frame\"");
  const FrameField frame = make_frame(c["frame"].get<std::string>(), c.value("dim", 0));
  const Point start = c.contains("start") ? point_from_json(c["start"]) : Point(Point::Zero(frame.dim));
  if (start.size() != frame.dim) throw InvalidInput("start has the wrong dimension");
  const int depth = c.value("max_depth", 3);
  const RankResult rank = bracket_generating_rank(frame, start, depth);
  if (rank.rank < frame.dim)
    throw PreconditionError("frame '" + frame.id + "' is not bracket-generating at start up to depth " +
                            std::to_string(depth));
  const SteerOptions opts = steer_options(c);
  if (!c.contains("target") && !c.contains("sweep")) throw InvalidInput("steer needs \"target\" and/or \"sweep\"");

  RunResult res;
  if (c.contains("target")) {
    const Point target = point_from_json(c["target"]);
    const SteerResult s = steer_point(frame, start, target, rank.families, opts);
    Json j = plan_to_json(s.plan);
    j["frame"] = frame.id;
    j["start"] = point_to_json(start);
    j["target"] = point_to_json(target);
    j["achieved"] = point_to_json(s.achieved);
    j["residual"] = s.residual;
    j["converged"] = s.converged;
    j["iterations"] = s.iterations;
    out.write_json("plan.json", j);
    res.residuals["steer_residual"] = s.residual;
    res.residuals["total_length_bound"] = s.plan.total_length_bound;
    if (!s.converged) res.status = kNotConverged;
    log << "steer: residual " << s.residual << ", length bound " << s.plan.total_length_bound << "\n";
  }
  if (c.contains("sweep")) {
    const Json& sw = c["sweep"];
    const Point dir = point_from_json(sw.at("direction"));
    const auto deltas = sw.at("deltas").get<std::vector<double>>();
    const auto rows = steer_sweep(frame, start, dir, deltas, rank.families, opts);
    out.write("sweep.csv", to_text([&](std::ostream& os) { write_sweep_csv(os, rows); }));
    double worst = 0.0;
    for (const auto& r : rows) {
      worst = std::max(worst, r.residual);
      if (!r.converged) res.status = kNotConverged;
    }
    res.residuals["sweep_max_residual"] = worst;
    res.residuals["sweep_spread_exponent_half"] = ratio_spread(rows, 0.5);
    res.residuals["sweep_spread_exponent_one"] = ratio_spread(rows, 1.0);
    log << "steer: sweep of " << rows.size() << " targets, worst residual " << worst << "\n";
  }
  if (res.status == kNotConverged) res.message = "steering Newton iteration did not converge";
  return res;
}

GridField density_from_json(const Json& j, int N, int d) {
  if (j.is_number()) return GridField::scalar(N, d, [v = j.get<double>()](const Point&) { return v; });
  if (!j.is_object()) throw InvalidInput("density must be a number or an object");
  if (j.contains("csv")) {
    std::ifstream in(j["csv"].get<std::string>());
    if (!in) throw InvalidInput("cannot open density file");
    GridField g = read_grid_csv(in);
    if (g.N != N || g.d != d) throw PreconditionError("density file grid does not match N and frame dimension");
    return g;
  }
  if (j.contains("constant")) {
    const double v = j["constant"].get<double>();
    return GridField::scalar(N, d, [v](const Point&) { return v; });
  }
  const double base = j.value("base", 1.0);
  struct Mode {
    double amp;
    Point wave;
    bool cosine;
  };
  std::vector<Mode> modes;
  for (const auto& m : j.value("modes", Json::array())) {
    Mode md{m.value("amplitude", 0.0), point_from_json(m.at("wave")), m.value("kind", std::string("sin")) == "cos"};
    if (md.wave.size() != d) throw InvalidInput("density mode wave vector has the wrong dimension");
    modes.push_back(md);
  }
  return GridField::scalar(N, d, [&](const Point& x) {
    double v = base;
    for (const auto& m : modes) {
      const double ph = 2.0 * std::numbers::pi * m.wave.dot(x);
      v += m.amp * (m.cosine ? std::cos(ph) : std::sin(ph));
    }
    return v;
  });
}

RunResult run_moser(const ExperimentConfig& cfg, Outputs& out, std::ostream& log) {
  const Json& c = cfg.raw;
  const FrameField frame = make_frame(c.value("frame", std::string("torus_sine")), c.value("dim", 0));
  const int N = c.value("N", 64);
  if (N < 4) throw InvalidInput("N must be >= 4");
  if (!c.contains("f0")) throw InvalidInput("moser needs \"f0\"");
  const GridField f0 = density_from_json(c["f0"], N, frame.dim);
  const GridField f1 = density_from_json(c.value("f1", Json(1.0)), N, frame.dim);
  MoserOptions opts;
  opts.n_time = c.value("n_time", opts.n_time);
  opts.substeps = c.value("substeps", opts.substeps);
  opts.cg.tol = c.value("cg_tol", opts.cg.tol);
  opts.cg.max_iters = c.value("cg_max_iters", opts.cg.max_iters);
  const MoserResult m = moser_transport(frame, f0, f1, opts);

  out.write_json("moser_report.json", moser_report_json(m.report));
  out.write("achieved.csv", to_text([&](std::ostream& os) { write_grid_csv(os, m.achieved); }));
  out.write("particles.csv", to_text([&](std::ostream& os) {
              os << "node";
              for (int a = 1; a <= frame.dim; ++a) os << ",x" << a;
              os << ",det\n";
              for (std::size_t k = 0; k < m.positions.size(); ++k) {
                os << k;
                for (int a = 0; a < frame.dim; ++a) os << ',' << format_number(m.positions[k][a]);
                os << ',' << format_number(m.jacobians[k].determinant()) << '\n';
              }
            }));
  RunResult res;
  res.residuals["transport_error"] = m.report.error;
  res.residuals["mass_drift"] = m.report.mass_drift;
  res.residuals["volume_drift"] = m.report.volume_drift;
  res.residuals["min_det"] = m.report.min_det;
  res.residuals["cg_iterations"] = m.report.total_cg_iterations;
  log << "moser: " << frame.id << " N=" << N << " n_time=" << opts.n_time << ", transport error " << m.report.error
      << "\n";
  return res;
}

// --- verify -------------------------------------------------------------------

struct Check {
  double residual = 0.0;
  double tolerance = 0.0;
  bool lower_is_better = true;
  bool pass() const { return lower_is_better ? residual <= tolerance : residual >= tolerance; }
};

KernelSpec random_spec(DeterministicRng& rng, bool constrained) {
  const double sigma = rng.uniform(0.3, 1.0);
  return constrained ? KernelSpec::constrained(sigma, "heisenberg") : KernelSpec::full(sigma);
}

LandmarkState random_state(DeterministicRng& rng, int n, int d) {
  LandmarkState s;
  s.q = random_landmarks(rng, n, d, -1.0, 1.0, 0.2);
  for (int i = 0; i < n; ++i) s.p.push_back(rng.uniform_point(d, -1.0, 1.0));
  return s;
}

double rel(double err, double scale) { return err / std::max(scale, 1e-12); }

Check check_symplectic(DeterministicRng& rng, int instances) {
  Check c{0.0, 1e-5};
  for (int k = 0; k < instances; ++k) {
    const bool cons = k % 2 == 1;
    const KernelSpec spec = random_spec(rng, cons);
    const int d = cons ? 3 : 2;
    LandmarkState s = random_state(rng, 1 + rng.index(4), d);
    const PhaseVelocity g = symplectic_gradient(spec, s);
    const double h = 1e-6;
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < s.size(); ++i)
      for (int a = 0; a < d; ++a) {
        LandmarkState sp = s, sm = s;
        sp.p[i][a] += h;
        sm.p[i][a] -= h;
        const double dq = (hamiltonian(spec, sp) - hamiltonian(spec, sm)) / (2 * h);
        sp = s;
        sm = s;
        sp.q[i][a] += h;
        sm.q[i][a] -= h;
        const double dp = -(hamiltonian(spec, sp) - hamiltonian(spec, sm)) / (2 * h);
        err = std::max({err, std::abs(dq - g.dq[i][a]), std::abs(dp - g.dp[i][a])});
        scale = std::max({scale, std::abs(dq), std::abs(dp)});
      }
    c.residual = std::max(c.residual, rel(err, scale));
  }
  return c;
}

Check check_shoot_gradient(DeterministicRng& rng, int instances) {
  Check c{0.0, 1e-4};
  for (int k = 0; k < instances; ++k) {
    const bool cons = k % 2 == 1;
    const int d = cons ? 3 : 2;
    const int n = 1 + rng.index(3);
    MatchProblem prob;
    prob.spec = random_spec(rng, cons);
    prob.q0 = random_landmarks(rng, n, d, -1.0, 1.0, 0.2);
    for (int i = 0; i < n; ++i) prob.q_target.push_back(rng.uniform_point(d, -1.0, 1.0));
    prob.lambda = rng.uniform(0.5, 5.0);
    prob.steps = 100;
    Points p0;
    for (int i = 0; i < n; ++i) p0.push_back(rng.uniform_point(d, -0.5, 0.5));
    const Points g = shoot_gradient(prob, p0);
    const double h = 1e-5;
    double err = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < d; ++a) {
        Points pp = p0, pm = p0;
        pp[i][a] += h;
        pm[i][a] -= h;
        const double fd = (shoot_objective(prob, pp) - shoot_objective(prob, pm)) / (2 * h);
        err = std::max(err, std::abs(fd - g[i][a]));
        scale = std::max(scale, std::abs(fd));
      }
    c.residual = std::max(c.residual, rel(err, scale));
  }
  return c;
}

Check check_gram(DeterministicRng& rng, int instances) {
  Check c{0.0, 1e-10};
  for (int k = 0; k < instances; ++k) {
    const bool cons = k % 2 == 1;
    const int d = cons ? 3 : 2;
    const KernelSpec spec = random_spec(rng, cons);
    const Points pts = random_landmarks(rng, 2 + rng.index(8), d, -1.0, 1.0, 0.05);
    const Eigen::MatrixXd G = gram_matrix(spec, pts);
    const double asym = (G - G.transpose()).cwiseAbs().maxCoeff();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()));
    const double lam_min = es.eigenvalues().minCoeff();
    const double scale = std::max(1.0, es.eigenvalues().maxCoeff());
    c.residual = std::max({c.residual, asym / scale, std::max(0.0, -lam_min) / scale});
  }
  return c;
}

Check check_straight_line() {
  Check c{0.0, 1e-10};
  LandmarkState s;
  s.q = {make_point({0.2, -0.1})};
  s.p = {make_point({0.7, 0.4})};
  const Trajectory traj = integrate_geodesic(KernelSpec::full(1.0), s, 1.0, 1000);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double t = traj.times[k];
    const Eigen::VectorXd& z = traj.states[k];
    const Point q = z.segment(0, 2);
    const Point p = z.segment(2, 2);
    c.residual = std::max({c.residual, (q - (s.q[0] + t * s.p[0])).norm(), (p - s.p[0]).norm()});
  }
  return c;
}

Check check_taylor_slope() {
  const FrameField h = make_frame("heisenberg");
  const TaylorFit fit = taylor_order_check(h, BracketWord{1, 2}, {1.0, 1.0}, make_point({0.3, -0.2, 0.1}),
                                           {1e-1, 3e-2, 1e-2, 3e-3, 1e-3});
  return Check{std::abs(fit.slope - 2.0), 0.1};
}

Check check_sub_laplacian_symmetry(DeterministicRng& rng) {
  const FrameField f = make_frame("torus_sine");
  const int N = 16;
  GridField dens(N, 2, 1), u(N, 2, 1), v(N, 2, 1);
  for (std::size_t k = 0; k < dens.nodes(); ++k) {
    dens.values[k] = rng.uniform(0.5, 1.5);
    u.values[k] = rng.uniform(-1.0, 1.0);
    v.values[k] = rng.uniform(-1.0, 1.0);
  }
  const GridField Lu = sub_laplacian_apply(f, dens, u);
  const GridField Lv = sub_laplacian_apply(f, dens, v);
  double a = 0.0, b = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < dens.nodes(); ++k) {
    a += Lu.values[k] * v.values[k] * dens.values[k];
    b += u.values[k] * Lv.values[k] * dens.values[k];
    scale += std::abs(Lu.values[k] * v.values[k] * dens.values[k]);
  }
  return Check{std::abs(a - b) / std::max(scale, 1.0), 1e-12};
}

RunResult run_verify(const ExperimentConfig& cfg, Outputs& out, std::ostream& log) {
  const int instances = cfg.raw.value("instances", 10);
  if (instances < 1) throw InvalidInput("instances must be >= 1");
  DeterministicRng rng(cfg.seed);
  std::vector<std::pair<std::string, Check>> checks;
  checks.emplace_back("symplectic_gradient_fd", check_symplectic(rng, instances));
  checks.emplace_back("shoot_gradient_fd", check_shoot_gradient(rng, instances));
  checks.emplace_back("gram_symmetry_psd", check_gram(rng, instances));
  checks.emplace_back("single_landmark_line", check_straight_line());
  checks.emplace_back("heisenberg_commutator_slope", check_taylor_slope());
  checks.emplace_back("sub_laplacian_weighted_symmetry", check_sub_laplacian_symmetry(rng));

  RunResult res;
  Json j{{"seed", cfg.seed}, {"instances", instances}};
  for (const auto& [name, c] : checks) {
    j["checks"][name] = {{"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass()}};
    res.residuals[name] = c.residual;
    if (!c.pass()) res.status = kNotConverged;
    log << (c.pass() ? "PASS " : "FAIL ") << name << " residual " << c.residual << " (tol " << c.tolerance
        << ")\n";
  }
  out.write_json("verify.json", j);
  if (res.status != kOk) res.message = "some verification checks failed";
  return res;
}

}  // namespace

ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"].get<int>() != 1)
    throw ConfigurationError("config needs \"schema\": 1");
  if (!j.contains("command") || !j["command"].is_string()) throw InvalidInput("config needs a \"command\" string");
  ExperimentConfig cfg;
  const std::string cmd = j["command"].get<std::string>();
  if (cmd == "shoot")
    cfg.command = Command::Shoot;
  else if (cmd == "match")
    cfg.command = Command::Match;
  else if (cmd == "steer")
    cfg.command = Command::Steer;
  else if (cmd == "moser")
    cfg.command = Command::Moser;
  else if (cmd == "verify")
    cfg.command = Command::Verify;
  else
    throw ConfigurationError("unknown command '" + cmd + "'");
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw InvalidInput("seed must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  cfg.raw = j;
  return cfg;
}

RunResult run(const ExperimentConfig& config, std::ostream& log) {
  Outputs out(config.output_dir);
  RunResult res;
  switch (config.command) {
    case Command::Shoot: res = run_shoot(config, out, log); break;
    case Command::Match: res = run_match(config, out, log); break;
    case Command::Steer: res = run_steer(config, out, log); break;
    case Command::Moser: res = run_moser(config, out, log); break;
    case Command::Verify: res = run_verify(config, out, log); break;
  }

  Json hashed = config.raw;
  hashed.erase("output_dir");
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a64(hashed.dump()));
  Json files = out.files();
  files.push_back("manifest.json");
  Json residuals = Json::object();
  for (const auto& [k, v] : res.residuals) residuals[k] = v;
  Json manifest{{"schema", 1},
                {"command", command_name(config.command)},
                {"version", kVersion},
                {"config_hash", std::string("fnv1a64:") + hash},
                {"seed", config.seed},
                {"status", res.status == kOk ? "ok" : "not_converged"},
                {"residuals", residuals},
                {"files", files}};
  if (!res.message.empty()) manifest["message"] = res.message;
  out.write_json("manifest.json", manifest);
  res.files = out.files();
  return res;
}

int run_invocation(const Invocation& inv, std::ostream& out, std::ostream& err) {
  std::ostringstream sink;
  std::ostream& log = inv.quiet ? static_cast<std::ostream&>(sink) : out;
  try {
    Json j = read_json_file(inv.config_path);
    if (!j.is_object()) throw InvalidInput("config must be a JSON object");
    if (inv.seed) j["seed"] = *inv.seed;
    if (inv.output_dir) j["output_dir"] = *inv.output_dir;
    const ExperimentConfig cfg = parse_config(j);
    const RunResult res = run(cfg, log);
    if (res.status != kOk) err << "warning: " << res.message << "\n";
    log << "wrote " << res.files.size() << " files to " << cfg.output_dir << "\n";
    return res.status;
  } catch (const NotConverged& e) {
    err << "error: " << e.what() << "\n";
    return kNotConverged;
  } catch (const Json::exception& e) {
    err << "error: bad config value: " << e.what() << "\n";
    return kPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kPrecondition;
  }
}

}  // namespace srd::cli
