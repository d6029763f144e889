#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace ksector::tools;
  CLI::App app{"Distance k-sectors by monotone fixed-point iteration"};
  app.require_subcommand(1);

  Options opts;
  std::string out_dir, state, scene;
  unsigned threads = 1;
  const auto common = [&](CLI::App* cmd, bool needs_out) {
    cmd->add_option("--scene", scene, "Scene JSON file")->required()->check(CLI::ExistingFile);
    auto* out = cmd->add_option("--out-dir", out_dir, "Directory for artifacts");
    if (needs_out) out->required();
    cmd->add_option("--threads", threads, "Worker threads (0: all cores)")->capture_default_str();
  };
  const auto iteration = [&](CLI::App* cmd) {
    cmd->add_option_function<std::string>("--direction", [&](const std::string& d) { opts.direction = d; },
                                           "asc, desc or both")
        ->check(CLI::IsMember({"asc", "desc", "both"}));
    cmd->add_option_function<int>("--max-iters", [&](int n) { opts.max_iters = n; }, "Iteration limit")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option_function<double>("--tol", [&](double t) { opts.tol = t; }, "Sector residual tolerance")
        ->check(CLI::NonNegativeNumber);
    cmd->add_flag("-v,--verbose", opts.verbose, "Log changed-cell counts per iteration");
  };

  CLI::App* compute_cmd = app.add_subcommand("compute", "Iterate a scene and write masks, SVG and report");
  common(compute_cmd, true);
  iteration(compute_cmd);

  CLI::App* verify_cmd = app.add_subcommand("verify", "Check a saved state or freshly computed fixed points");
  common(verify_cmd, false);
  iteration(verify_cmd);
  verify_cmd->add_option("--state", state, "State JSON written by compute")->check(CLI::ExistingFile);

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Enumerate every k-sector of a finite scene");
  common(oracle_cmd, false);

  CLI::App* render_cmd = app.add_subcommand("render", "Draw the sectors of a saved state");
  common(render_cmd, true);
  render_cmd->add_option("--state", state, "State JSON written by compute")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  opts.scene = scene;
  opts.out_dir = out_dir;
  if (!state.empty()) opts.state = state;
  opts.threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;

  Outcome out;
  if (compute_cmd->parsed())
    out = compute(opts, std::cerr);
  else if (verify_cmd->parsed())
    out = verify(opts, std::cerr);
  else if (oracle_cmd->parsed())
    out = oracle(opts, std::cout);
  else
    out = render(opts, std::cerr);
  return out.exit_code;
}
