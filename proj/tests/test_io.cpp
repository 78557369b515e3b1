#include "support.hpp"

#include "srd/io.hpp"

#include <doctest.h>

#include <sstream>

using namespace srd;
using namespace srd::test;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("parse errors carry line and column") {
  const std::string text = "{\n  \"a\": 1,\n  \"b\": ]\n}";
  try {
    parse_json(text, "cfg.json");
    FAIL("expected a parse error");
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    CHECK(msg.rfind("cfg.json:3:8:", 0) == 0);
  }
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), InvalidInput);
  CHECK(parse_json("{\"x\": [1, 2]}")["x"][1] == 2);
}

TEST_CASE("numbers round-trip through their text form") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(1.0) == "1");
}

TEST_CASE("kernel JSON") {
  const auto full = kernel_from_json(parse_json(R"({"sigma": 0.5, "mode": "full"})"));
  CHECK(full.mode == KernelMode::Full);
  CHECK(full.sigma == 0.5);
  const auto heis = kernel_from_json(parse_json(R"({"sigma": 0.3, "mode": {"frame": "heisenberg"}})"));
  CHECK(heis.mode == KernelMode::FrameConstrained);
  CHECK(heis.frame->id == "heisenberg");
  const auto tr = kernel_from_json(parse_json(R"({"sigma": 1, "mode": {"frame": "translation", "dim": 3}})"));
  CHECK(tr.frame_dim() == 3);
  CHECK(kernel_from_json(kernel_to_json(heis)).frame->id == "heisenberg");
  CHECK(kernel_to_json(full) == parse_json(R"({"sigma": 0.5, "mode": "full"})"));
  CHECK(kernel_to_json(heis) == parse_json(R"({"sigma": 0.3, "mode": {"frame": "heisenberg"}})"));

  CHECK_THROWS_AS(kernel_from_json(parse_json(R"({"mode": "full"})")), InvalidInput);
  CHECK_THROWS_AS(kernel_from_json(parse_json(R"({"sigma": -1})")), InvalidInput);
  CHECK_THROWS_AS(kernel_from_json(parse_json(R"({"sigma": 1, "mode": "weird"})")), ConfigurationError);
  CHECK_THROWS_AS(kernel_from_json(parse_json(R"({"sigma": 1, "mode": {"frame": "nope"}})")), ConfigurationError);
}

TEST_CASE("state JSON") {
  LandmarkState s{{make_point({0.1, 0.2}), make_point({-0.3, 0.4})}, {make_point({1, 0}), make_point({0, 1})}, 0.5};
  const Json j = state_to_json(s);
  CHECK(j["t"] == 0.5);
  CHECK(j["q"][1][0] == -0.3);
  const auto back = state_from_json(j);
  CHECK(max_abs_diff(back.q, s.q) == 0.0);
  CHECK(max_abs_diff(back.p, s.p) == 0.0);
  CHECK(back.time == 0.5);
  CHECK_THROWS_AS(state_from_json(parse_json(R"({"q": [[0, 0]]})")), InvalidInput);
  CHECK_THROWS_AS(state_from_json(parse_json(R"({"q": [[0, 0], [0, 0]], "p": [[1, 0], [0, 1]]})")), DegenerateConfiguration);
  CHECK_THROWS_AS(point_from_json(parse_json(R"([1, 2, 3, 4, 5])")), InvalidInput);
  CHECK_THROWS_AS(point_from_json(parse_json(R"(["a"])")), InvalidInput);
}

TEST_CASE("trajectory CSV layout") {
  const auto spec = KernelSpec::full(1.0);
  LandmarkState s{{make_point({0.0, 0.0})}, {make_point({1.0, 0.5})}};
  const auto traj = integrate_geodesic(spec, s, 1.0, 4);
  std::ostringstream os;
  write_trajectory_csv(os, spec, traj, 1, 2);
  const auto ls = lines(os.str());
  REQUIRE(ls.size() == 6);
  CHECK(ls[0] == "t,q1_1,q1_2,p1_1,p1_2,h");
  CHECK(ls[5].rfind("1,1,0.5,1,0.5,0.625", 0) == 0);
  const Json j = trajectory_to_json(spec, traj, 1, 2);
  CHECK(j["states"].size() == 5);
  CHECK(j["monitors"]["hamiltonian"].size() == 5);
}

TEST_CASE("flow CSV and summary") {
  const auto ex = bundled_example("pair_full");
  const auto rec = advect(ex.spec, ex.state, ex.state.q, 0.1, 2);
  std::ostringstream os;
  write_flow_csv(os, rec);
  const auto ls = lines(os.str());
  CHECK(ls[0] == "t,particle,x1,x2");
  CHECK(ls.size() == 1 + 3 * 2);
  CHECK(ls[2].rfind("0,1,", 0) == 0);
  const Json j = flow_summary_json(rec);
  CHECK(j["pushforward_residual"].is_number());
  const auto bare = advect(ex.spec, ex.state, {}, 0.1, 2);
  CHECK(flow_summary_json(bare)["pushforward_residual"].is_null());
}

TEST_CASE("match problem JSON round trip") {
  const auto prob = bundled_match("crossing_pair").problem;
  const auto back = match_problem_from_json(match_problem_to_json(prob));
  CHECK(max_abs_diff(back.q0, prob.q0) == 0.0);
  CHECK(max_abs_diff(back.q_target, prob.q_target) == 0.0);
  CHECK(back.lambda == prob.lambda);
  CHECK(back.steps == prob.steps);
  CHECK(back.optimizer.grad_tol == prob.optimizer.grad_tol);

  const auto minimal = match_problem_from_json(parse_json(R"({"q0": [[0]], "q_target": [[1]], "kernel": {"sigma": 1}})"));
  CHECK(minimal.lambda == 1.0);
  CHECK(minimal.optimizer.max_iters == OptimizerOptions{}.max_iters);
  CHECK_THROWS_AS(match_problem_from_json(parse_json(R"({"q0": [[0]], "kernel": {"sigma": 1}})")), InvalidInput);
  CHECK_THROWS_AS(match_problem_from_json(parse_json(R"({"q0": [[0]], "q_target": [[1]], "kernel": {"sigma": 1}, "lambda": 0})")),
                  InvalidInput);
}

TEST_CASE("match report JSON") {
  MatchProblem prob;
  prob.q0 = {make_point({0.0})};
  prob.q_target = {make_point({1.0})};
  prob.spec = KernelSpec::full(1.0);
  const auto res = match(prob);
  const Json j = match_report_json(res);
  CHECK(j["converged"] == true);
  CHECK(std::abs(j["p0"][0][0].get<double>() - 0.5) <= 1e-6);
  CHECK(j["log"].size() == res.report.log.size());
  CHECK(j.contains("transversality"));
}

TEST_CASE("steering plan JSON replays identically") {
  const auto h = make_frame("heisenberg");
  const auto res = steer_point(h, make_point({0, 0, 0}), make_point({0.01, 0.0, 0.02}), {{1}, {2}, {1, 2}});
  const SteeringPlan back = plan_from_json(parse_json(plan_to_json(res.plan).dump()));
  REQUIRE(back.profiles.size() == res.plan.profiles.size());
  CHECK(back.families == res.plan.families);
  CHECK(back.total_length_bound == res.plan.total_length_bound);
  CHECK(max_abs_diff(replay(h, back.profiles, {make_point({0, 0, 0})})[0], res.achieved) == 0.0);

  ControlProfile p;
  p.field = 2;
  p.amplitude = 0.3;
  p.linear = make_point({1, 2, 3});
  p.quadratic = SmallMat::Identity(3, 3);
  const auto q = profile_from_json(profile_to_json(p));
  CHECK(q.linear == p.linear);
  CHECK(q.quadratic == p.quadratic);
  CHECK_THROWS_AS(profile_from_json(parse_json(R"({"field": 1, "duration": -1})")), InvalidInput);
  CHECK_THROWS_AS(profile_from_json(parse_json(R"({"amplitude": 1})")), InvalidInput);
}

TEST_CASE("sweep CSV") {
  std::vector<SweepRow> rows = {{1e-2, 0.1, 0.2, 1e-12, 3, true}, {1e-3, 0.03, 0.06, 2e-12, 4, false}};
  std::ostringstream os;
  write_sweep_csv(os, rows);
  const auto ls = lines(os.str());
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "delta,length_bound,path_length,residual,iterations,converged");
  CHECK(ls[1] == "0.01,0.10000000000000001,0.20000000000000001,9.9999999999999998e-13,3,1");
  CHECK(ls[2].substr(ls[2].size() - 4) == ",4,0");
}

TEST_CASE("moser report JSON") {
  MoserReport rep;
  rep.error = 1e-3;
  rep.steps.push_back({0.5, 10, 1e-11, 0.0, 1e-6, 0.9});
  const Json j = moser_report_json(rep);
  CHECK(j["error"] == 1e-3);
  CHECK(j["steps"][0]["cg_iterations"] == 10);
}
