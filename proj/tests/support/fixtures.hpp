#pragma once

#include <algorithm>
#include <filesystem>
#include <json.hpp>
#include <memory>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "ksector/lattice.hpp"
#include "ksector/metric.hpp"
#include "ksector/scene.hpp"

namespace ksector::testing {

inline Exec all_cores() { return Exec{std::max(1u, std::thread::hardware_concurrency())}; }

inline SpacePtr grid_space(int w, int h, MetricKind metric = L2Metric{}) {
  return std::make_shared<const Space>(Space::grid(GridGeometry{w, h, 1.0, {}}, std::move(metric)));
}

inline SpacePtr line_space(const std::vector<double>& coords) {
  return std::make_shared<const Space>(Space::finite(FiniteMetricSpace::on_line(coords)));
}

inline RegionMask cells(const Space& space, const std::vector<std::pair<int, int>>& xy) {
  RegionMask m(space.size());
  for (const auto& [x, y] : xy) m.set(space.geometry().index(x, y));
  return m;
}

inline RegionMask points(const Space& space, const std::vector<std::size_t>& idx) {
  return RegionMask::from_indices(space.size(), idx);
}

struct Extremes {
  FixpointResult lower;
  FixpointResult upper;
};

inline FixpointResult least(const SpacePtr& space, const RegionMask& p, const RegionMask& q, int k,
                            const Exec& exec = {}) {
  return iterate(bottom(space, p, q, k), Direction::Ascending, default_max_iters(*space, k), exec);
}

inline FixpointResult greatest(const SpacePtr& space, const RegionMask& p, const RegionMask& q, int k,
                               const Exec& exec = {}) {
  return iterate(top(space, p, q, k), Direction::Descending, default_max_iters(*space, k), exec);
}

inline Extremes extremes(const SpacePtr& space, const RegionMask& p, const RegionMask& q, int k,
                         const Exec& exec = {}) {
  return {least(space, p, q, k, exec), greatest(space, p, q, k, exec)};
}

// Scene documents built in code, in the same schema as scenes/*.json.
inline nlohmann::json point_site(double x, double y) { return {{"type", "point"}, {"at", {x, y}}}; }

inline nlohmann::json segment_site(double x0, double y0, double x1, double y1) {
  return {{"type", "segment"}, {"from", {x0, y0}}, {"to", {x1, y1}}};
}

inline nlohmann::json polygon_site(const std::vector<std::pair<double, double>>& v) {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& [x, y] : v) verts.push_back({x, y});
  return {{"type", "polygon"}, {"vertices", verts}};
}

inline nlohmann::json grid_scene(int w, int h, const std::string& metric, int k, nlohmann::json p,
                                 nlohmann::json q, const std::string& direction = "both") {
  return {{"scene_version", 1},
          {"k", k},
          {"space", {{"type", "grid"}, {"width", w}, {"height", h}}},
          {"metric", {{"kind", metric}}},
          {"sites", {{"P", nlohmann::json::array({p})}, {"Q", nlohmann::json::array({q})}}},
          {"iteration", {{"direction", direction}}}};
}

inline std::filesystem::path scenes_dir() { return KSECTOR_SCENES_DIR; }

/// Fresh empty directory under the build tree's temp area.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ksector_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

inline RegionMask random_mask(std::size_t n, double density, std::mt19937& rng) {
  std::bernoulli_distribution coin(density);
  RegionMask m(n);
  for (std::size_t i = 0; i < n; ++i)
    if (coin(rng)) m.set(i);
  if (m.empty()) m.set(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
  return m;
}

}  // namespace ksector::testing
