#include "srd/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Sub-Riemannian landmark geometry experiments"};
  srd::cli::Invocation inv;
  std::string output;
  std::uint64_t seed = 0;
  app.add_option("--config", inv.config_path, "experiment config (JSON)")->required();
  auto* out_opt = app.add_option("--output", output, "output directory (overrides the config)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_flag("--quiet", inv.quiet, "suppress progress output");
  app.set_version_flag("--version", std::string(srd::kVersion));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : srd::cli::kPrecondition;
  }
  if (*out_opt) inv.output_dir = output;
  if (*seed_opt) inv.seed = seed;
  return srd::cli::run_invocation(inv, std::cout, std::cerr);
}
