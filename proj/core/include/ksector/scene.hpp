#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ksector/geometry.hpp"
#include "ksector/lattice.hpp"

namespace ksector {

/// A site primitive in world units, or explicit point indices on a finite space.
struct SitePrimitive {
  enum class Kind { Point, Segment, Polygon, Disc, Indices };
  Kind kind = Kind::Point;
  std::vector<Point2> points;  // point: 1, segment: 2, polygon: >= 3, disc: center
  double radius = 0.0;
  std::vector<std::size_t> indices;
};

/// Cells whose center lies in the primitive, boundary inclusive. Points take their
/// nearest cell; segments take every cell whose center is within half a cell of them.
RegionMask rasterize(const GridGeometry& grid, const std::vector<SitePrimitive>& sites);

struct IterationConfig {
  bool ascending = true;
  bool descending = false;
  std::optional<int> max_iters;
};

struct OutputConfig {
  bool masks = true;
  bool svg = true;
  bool states = true;
};

/// A validated scene: space, metric, rasterized sites, k and run settings.
struct SceneSpec {
  SpacePtr space;
  std::vector<SitePrimitive> p_sites;
  std::vector<SitePrimitive> q_sites;
  RegionMask P;
  RegionMask Q;
  int k = 2;
  IterationConfig iteration;
  std::optional<double> tol;
  OutputConfig output;
  std::string digest;  // FNV-1a 64 of the canonical scene JSON, hex

  int max_iters() const { return iteration.max_iters.value_or(default_max_iters(*space, k)); }
  double tolerance() const;
};

/// Throws ParseError (malformed JSON), ValidationError (every schema violation,
/// joined), SitesOverlapAfterRasterization. Relative paths resolve against `base_dir`.
SceneSpec parse_scene(const std::string& json_text, const std::filesystem::path& base_dir = {});
SceneSpec load_scene(const std::filesystem::path& path);

}  // namespace ksector
