#pragma once

// Batch front end: one JSON config in, result files plus manifest.json out.

#include "srd/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace srd::cli {

enum class Command { Shoot, Match, Steer, Moser, Verify };

struct ExperimentConfig {
  Command command = Command::Shoot;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  Json raw;  // whole config, used for the command payload and the manifest hash
};

/// Requires {"schema": 1, "command": ...}. Throws InvalidInput / ConfigurationError.
ExperimentConfig parse_config(const Json& j);

enum ExitStatus { kOk = 0, kPrecondition = 1, kNotConverged = 2 };

struct RunResult {
  int status = kOk;
  std::vector<std::string> files;  // relative to output_dir, manifest.json last
  std::map<std::string, double> residuals;
  std::string message;
};

/// Writes the command's outputs and manifest.json into config.output_dir.
/// Library errors propagate; `main` maps them to exit status 1.
RunResult run(const ExperimentConfig& config, std::ostream& log);

/// Flag-level entry: reads the config file, applies overrides, never throws.
struct Invocation {
  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};
int run_invocation(const Invocation& inv, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a of the bytes.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace srd::cli
