#include "srd/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace srd {

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < upto; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw InvalidInput(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json point_to_json(const Point& x) {
  Json a = Json::array();
  for (Eigen::Index k = 0; k < x.size(); ++k) a.push_back(x[k]);
  return a;
}

Point point_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxDim))
    throw InvalidInput("a point must be an array of 1.." + std::to_string(kMaxDim) + " numbers");
  Point x(static_cast<int>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw InvalidInput("point coordinates must be numbers");
    x[static_cast<int>(k)] = j[k].get<double>();
  }
  return x;
}

Json points_to_json(const Points& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(point_to_json(x));
  return a;
}

Points points_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("expected an array of points");
  Points xs;
  for (const auto& e : j) xs.push_back(point_from_json(e));
  return xs;
}

Json kernel_to_json(const KernelSpec& spec) {
  Json j;
  j["sigma"] = spec.sigma;
  if (spec.mode == KernelMode::Full)
    j["mode"] = "full";
  else
    j["mode"] = {{"frame", spec.frame->id}};
  return j;
}

KernelSpec kernel_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("sigma") || !j["sigma"].is_number())
    throw InvalidInput("kernel needs a numeric \"sigma\"");
  const double sigma = j["sigma"].get<double>();
  KernelSpec spec = KernelSpec::full(sigma);
  if (j.contains("mode")) {
    const Json& m = j["mode"];
    if (m.is_string()) {
      if (m.get<std::string>() != "full") throw ConfigurationError("kernel mode must be \"full\" or {\"frame\": id}");
    } else if (m.is_object() && m.contains("frame") && m["frame"].is_string()) {
      const int dim = m.value("dim", 0);
      spec = KernelSpec::constrained(sigma, m["frame"].get<std::string>(), dim);
    } else {
      throw ConfigurationError("kernel mode must be \"full\" or {\"frame\": id}");
    }
  }
  spec.validate();
  return spec;
}

Json state_to_json(const LandmarkState& s) {
  return Json{{"t", s.time}, {"q", points_to_json(s.q)}, {"p", points_to_json(s.p)}};
}

LandmarkState state_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("q") || !j.contains("p")) throw InvalidInput("state needs \"q\" and \"p\"");
  LandmarkState s;
  s.q = points_from_json(j["q"]);
  s.p = points_from_json(j["p"]);
  s.time = j.value("t", 0.0);
  s.validate();
  return s;
}

void write_trajectory_csv(std::ostream& os, const KernelSpec& spec, const Trajectory& traj, int n, int d) {
  os << "t";
  for (const char* block : {"q", "p"})
    for (int i = 1; i <= n; ++i)
      for (int a = 1; a <= d; ++a) os << ',' << block << i << '_' << a;
  os << ",h\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Eigen::VectorXd& z = traj.states[k];
    os << format_number(traj.times[k]);
    for (Eigen::Index c = 0; c < z.size(); ++c) os << ',' << format_number(z[c]);
    os << ',' << format_number(hamiltonian(spec, LandmarkState::unflatten(z, n, d, traj.times[k]))) << '\n';
  }
}

Json trajectory_to_json(const KernelSpec& spec, const Trajectory& traj, int n, int d) {
  Json states = Json::array();
  Json h = Json::array();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const LandmarkState s = LandmarkState::unflatten(traj.states[k], n, d, traj.times[k]);
    states.push_back(state_to_json(s));
    h.push_back(hamiltonian(spec, s));
  }
  Json j{{"kernel", kernel_to_json(spec)}, {"states", states}, {"hamiltonian", h}};
  for (std::size_t m = 0; m < traj.monitor_names.size(); ++m) {
    Json col = Json::array();
    for (const auto& row : traj.monitors) col.push_back(row[m]);
    j["monitors"][traj.monitor_names[m]] = col;
  }
  return j;
}

void write_flow_csv(std::ostream& os, const FlowRecord& rec) {
  os << "t,particle";
  for (int a = 1; a <= rec.d; ++a) os << ",x" << a;
  os << '\n';
  for (std::size_t k = 0; k < rec.times.size(); ++k)
    for (std::size_t s = 0; s < rec.particles.size(); ++s) {
      os << format_number(rec.times[k]) << ',' << s;
      for (int a = 0; a < rec.d; ++a) os << ',' << format_number(rec.particles[s][k][a]);
      os << '\n';
    }
}

Json flow_summary_json(const FlowRecord& rec) {
  Json j{{"landmarks", rec.n},
         {"dim", rec.d},
         {"particles", rec.particles.size()},
         {"samples", rec.times.size()},
         {"min_det", rec.min_det},
         {"max_det", rec.max_det},
         {"kernel", kernel_to_json(rec.spec)}};
  try {
    j["pushforward_residual"] = pushforward_residual(rec);
  } catch (const ConfigurationError&) {
    j["pushforward_residual"] = nullptr;
  }
  return j;
}

MatchProblem match_problem_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("match problem must be an object");
  for (const char* key : {"q0", "q_target", "kernel"})
    if (!j.contains(key)) throw InvalidInput(std::string("match problem needs \"") + key + "\"");
  MatchProblem m;
  m.q0 = points_from_json(j["q0"]);
  m.q_target = points_from_json(j["q_target"]);
  m.spec = kernel_from_json(j["kernel"]);
  m.lambda = j.value("lambda", m.lambda);
  m.steps = j.value("steps", m.steps);
  if (j.contains("optimizer")) {
    const Json& o = j["optimizer"];
    m.optimizer.max_iters = o.value("max_iters", m.optimizer.max_iters);
    m.optimizer.grad_tol = o.value("grad_tol", m.optimizer.grad_tol);
    m.optimizer.shrink = o.value("shrink", m.optimizer.shrink);
    m.optimizer.armijo = o.value("armijo", m.optimizer.armijo);
  }
  m.validate();
  return m;
}

Json match_problem_to_json(const MatchProblem& prob) {
  return Json{{"q0", points_to_json(prob.q0)},
              {"q_target", points_to_json(prob.q_target)},
              {"kernel", kernel_to_json(prob.spec)},
              {"lambda", prob.lambda},
              {"steps", prob.steps},
              {"optimizer",
               {{"max_iters", prob.optimizer.max_iters},
                {"grad_tol", prob.optimizer.grad_tol},
                {"shrink", prob.optimizer.shrink},
                {"armijo", prob.optimizer.armijo}}}};
}

Json match_report_json(const MatchResult& res) {
  const auto& r = res.report;
  Json log = Json::array();
  for (const auto& it : r.log)
    log.push_back({{"iter", it.iter}, {"objective", it.objective}, {"grad_norm", it.grad_norm}, {"step", it.step}});
  const int n = static_cast<int>(res.p0.size());
  const int d = n ? static_cast<int>(res.p0.front().size()) : 0;
  const LandmarkState fin = LandmarkState::unflatten(res.trajectory.final_state(), n, d, 1.0);
  return Json{{"converged", r.converged},
              {"iterations", r.iterations},
              {"objective", r.objective},
              {"grad_norm", r.grad_norm},
              {"transversality", r.transversality},
              {"mismatch", r.mismatch},
              {"p0", points_to_json(res.p0)},
              {"q1", points_to_json(fin.q)},
              {"p1", points_to_json(fin.p)},
              {"log", log}};
}

Json profile_to_json(const ControlProfile& p) {
  Json j{{"field", p.field}, {"amplitude", p.amplitude}, {"duration", p.duration}};
  if (p.linear.size() != 0) j["linear"] = point_to_json(p.linear);
  if (p.quadratic.size() != 0) {
    Json rows = Json::array();
    for (int a = 0; a < p.quadratic.rows(); ++a) rows.push_back(point_to_json(p.quadratic.row(a).transpose()));
    j["quadratic"] = rows;
  }
  return j;
}

ControlProfile profile_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("field")) throw InvalidInput("control profile needs \"field\"");
  ControlProfile p;
  p.field = j["field"].get<int>();
  p.amplitude = j.value("amplitude", 0.0);
  p.duration = j.value("duration", 1.0);
  if (j.contains("linear")) p.linear = point_from_json(j["linear"]);
  if (j.contains("quadratic")) {
    const Points rows = points_from_json(j["quadratic"]);
    const int m = static_cast<int>(rows.size());
    p.quadratic = SmallMat(m, m);
    for (int a = 0; a < m; ++a) {
      if (rows[a].size() != m) throw InvalidInput("quadratic profile must be square");
      p.quadratic.row(a) = rows[a].transpose();
    }
  }
  if (!(p.duration >= 0.0)) throw InvalidInput("control duration must be >= 0");
  return p;
}

Json plan_to_json(const SteeringPlan& plan) {
  Json profiles = Json::array();
  for (const auto& p : plan.profiles) profiles.push_back(profile_to_json(p));
  Json families = Json::array();
  for (const auto& w : plan.families) families.push_back(w.letters);
  return Json{{"profiles", profiles},
              {"families", families},
              {"chart_coordinates", plan.chart_coordinates},
              {"total_length_bound", plan.total_length_bound},
              {"path_length", plan.path_length}};
}

SteeringPlan plan_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("profiles")) throw InvalidInput("plan needs \"profiles\"");
  SteeringPlan plan;
  for (const auto& p : j["profiles"]) plan.profiles.push_back(profile_from_json(p));
  if (j.contains("families"))
    for (const auto& w : j["families"]) plan.families.emplace_back(w.get<std::vector<int>>());
  plan.chart_coordinates = j.value("chart_coordinates", std::vector<double>{});
  plan.total_length_bound = j.value("total_length_bound", 0.0);
  plan.path_length = j.value("path_length", 0.0);
  return plan;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "delta,length_bound,path_length,residual,iterations,converged\n";
  for (const auto& r : rows)
    os << format_number(r.delta) << ',' << format_number(r.length_bound) << ',' << format_number(r.path_length)
       << ',' << format_number(r.residual) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
}

Json moser_report_json(const MoserReport& rep) {
  Json steps = Json::array();
  for (const auto& s : rep.steps)
    steps.push_back({{"t_mid", s.t_mid},
                     {"cg_iterations", s.cg_iterations},
                     {"cg_residual", s.cg_residual},
                     {"mass_drift", s.mass_drift},
                     {"volume_drift", s.volume_drift},
                     {"min_det", s.min_det}});
  return Json{{"error", rep.error},
              {"mass_drift", rep.mass_drift},
              {"volume_drift", rep.volume_drift},
              {"min_det", rep.min_det},
              {"max_det", rep.max_det},
              {"total_cg_iterations", rep.total_cg_iterations},
              {"steps", steps}};
}

}  // namespace srd
