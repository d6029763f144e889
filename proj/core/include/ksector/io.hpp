#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ksector/lattice.hpp"
#include "ksector/scene.hpp"
#include "ksector/sectors.hpp"
#include "ksector/verify.hpp"

namespace ksector {

struct RunSummary {
  std::string direction;  // "ascending" | "descending"
  int iterations = 0;
  bool converged = false;
  std::vector<std::vector<std::size_t>> changed;

  bool operator==(const RunSummary&) const = default;
};

RunSummary summarize(const FixpointResult& result, Direction direction);

/// Everything a run produced except wall-clock timings, which vary between runs
/// and are written separately.
struct RunReport {
  int report_version = 1;
  std::string scene_digest;
  std::string metric;
  int k = 0;
  std::vector<RunSummary> runs;
  std::vector<CheckReport> checks;
  std::optional<GapReport> gap;
  std::vector<std::string> findings;

  bool operator==(const RunReport&) const = default;
};

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

/// Masks are stored as flat [start, length, ...] run lists.
std::string state_to_json(const GradationState& state);
GradationState state_from_json(const std::string& text, SpacePtr space);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

/// Binary PGM (P5): 255 inside, 0 outside. Finite spaces are written as n x 1.
std::string mask_to_pgm(const RegionMask& mask, int width, int height);
/// Nonzero pixels become members. Throws ParseError.
RegionMask mask_from_pgm(const std::string& bytes, int* width = nullptr, int* height = nullptr);

/// SVG 1.1 document whose viewBox is the grid's world rectangle: one <g> per C_i,
/// then the site primitives.
std::string sectors_to_svg(const GridGeometry& grid, const SectorSet& sectors, const SceneSpec& scene);

}  // namespace ksector
