#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "ksector/io.hpp"

namespace ksector::tools {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,  // usage, parse, validation and I/O errors
  kExitCheckFailed = 2,
  kExitNotConverged = 3,
};

struct Options {
  std::filesystem::path scene;
  std::filesystem::path out_dir;  // empty: verify and oracle write nothing
  std::optional<std::filesystem::path> state;
  std::optional<std::string> direction;  // "asc" | "desc" | "both"
  std::optional<int> max_iters;
  std::optional<double> tol;
  unsigned threads = 1;
  bool verbose = false;
};

struct Outcome {
  int exit_code = kExitOk;
  RunReport report;
};

/// Iterates the scene, checks the fixed points and writes masks, states, SVGs,
/// report.json and timings.json.
Outcome compute(const Options& opts, std::ostream& log);

/// Checks a saved state (--state) or freshly computed fixed points. On finite spaces
/// the oracle cross-check decides; a confirmed nonexistence is a finding.
Outcome verify(const Options& opts, std::ostream& log);

/// Enumerates every k-sector of a finite scene; writes oracle.json.
Outcome oracle(const Options& opts, std::ostream& log);

/// Redraws a saved state: per-slot PGM masks and sectors.svg.
Outcome render(const Options& opts, std::ostream& log);

}  // namespace ksector::tools
