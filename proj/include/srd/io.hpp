#pragma once

// JSON and CSV serialization of the library types. Numbers in CSV use %.17g so files
// round-trip and are byte-identical across runs.

#include "srd/flow.hpp"
#include "srd/hamiltonian.hpp"
#include "srd/integrator.hpp"
#include "srd/kernel.hpp"
#include "srd/matching.hpp"
#include "srd/moser.hpp"
#include "srd/steering.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace srd {

using Json = nlohmann::json;

/// Parses text; syntax errors become InvalidInput("<source>:<line>:<column>: ...").
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);

std::string format_number(double v);

Json point_to_json(const Point& x);
Point point_from_json(const Json& j);
Json points_to_json(const Points& xs);
Points points_from_json(const Json& j);

/// {"sigma": s, "mode": "full"} or {"sigma": s, "mode": {"frame": id}}.
Json kernel_to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const Json& j);

/// {"t": t, "q": [[...]], "p": [[...]]}.
Json state_to_json(const LandmarkState& s);
LandmarkState state_from_json(const Json& j);

/// Header t,q1_1,..,qn_d,p1_1,..,pn_d,h; one row per recorded sample.
void write_trajectory_csv(std::ostream& os, const KernelSpec& spec, const Trajectory& traj, int n, int d);
Json trajectory_to_json(const KernelSpec& spec, const Trajectory& traj, int n, int d);

/// Header t,particle,x1..xd; rows ordered by time then particle.
void write_flow_csv(std::ostream& os, const FlowRecord& rec);
Json flow_summary_json(const FlowRecord& rec);

/// Accepts {"q0", "q_target", "kernel", "lambda", "steps", "optimizer": {"max_iters",
/// "grad_tol", "shrink", "armijo"}}; missing optional keys keep their defaults.
MatchProblem match_problem_from_json(const Json& j);
Json match_problem_to_json(const MatchProblem& prob);
Json match_report_json(const MatchResult& res);

Json profile_to_json(const ControlProfile& p);
ControlProfile profile_from_json(const Json& j);
Json plan_to_json(const SteeringPlan& plan);
SteeringPlan plan_from_json(const Json& j);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

Json moser_report_json(const MoserReport& rep);

}  // namespace srd
