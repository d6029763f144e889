#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ksector/finite_metric.hpp"
#include "ksector/geometry.hpp"
#include "ksector/parallel.hpp"
#include "ksector/region_mask.hpp"

namespace ksector {

struct L2Metric {
  bool operator==(const L2Metric&) const = default;
};
struct L1Metric {
  bool operator==(const L1Metric&) const = default;
};
struct LinfMetric {
  bool operator==(const LinfMetric&) const = default;
};
struct GeodesicGridMetric {
  RegionMask obstacles;
  int connectivity = 8;  // 4 or 8
  bool operator==(const GeodesicGridMetric&) const = default;
};
struct ExplicitMetric {
  FiniteMetricSpace space;
  bool operator==(const ExplicitMetric&) const = default;
};

using MetricKind = std::variant<L2Metric, L1Metric, LinfMetric, GeodesicGridMetric, ExplicitMetric>;

std::string metric_name(const MetricKind& m);

/// How the integers of a DistanceField map to world lengths.
enum class DistanceEncoding {
  SquaredCells,  // L2: exact squared distance in cell units
  Cells,         // L1 / Linf: exact distance in cell units
  FixedPoint,    // geodesic and explicit: distance * scale, rounded
};

/// Fixed-point denominators. Geodesic steps are 1 and sqrt(2) cells;
/// explicit matrix entries are world lengths.
inline constexpr std::int64_t kGeodesicScale = std::int64_t{1} << 16;
inline constexpr std::int64_t kExplicitScale = std::int64_t{1} << 20;
inline constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max() / 4;

/// Per-point distance to a source set. Raw values compare exactly within one
/// space; `world(i)` converts to an unsquared world length.
struct DistanceField {
  std::vector<std::int64_t> values;
  DistanceEncoding encoding = DistanceEncoding::SquaredCells;
  double scale = 1.0;  // world length per unit after un-squaring / de-scaling

  std::size_t size() const noexcept { return values.size(); }
  double world(std::size_t i) const;
  double to_world(std::int64_t raw) const;
};

/// Connected components of the free cells of a grid. Obstacle cells get label -1.
struct ComponentLabels {
  std::vector<std::int32_t> label;
  std::int32_t count = 0;
};

ComponentLabels geodesic_reachability(const GridGeometry& grid, const RegionMask& obstacles,
                                      int connectivity = 8);

/// A discrete metric space: either a raster with a grid metric or an explicit
/// finite space. `domain()` is the set of points that belong to the space;
/// for geodesic grids it excludes obstacles (and cells unreachable from the sites
/// once restrict_domain has been applied). Every other mask operation is relative
/// to that domain.
class Space {
 public:
  /// Throws InvalidGeometry / InvalidMetric / DimensionMismatch.
  static Space grid(const GridGeometry& geometry, MetricKind metric);
  static Space finite(const FiniteMetricSpace& space);

  std::size_t size() const noexcept { return size_; }
  bool is_grid() const noexcept { return grid_.has_value(); }
  const GridGeometry& geometry() const;
  const MetricKind& metric() const noexcept { return metric_; }
  const RegionMask& domain() const noexcept { return domain_; }
  RegionMask full() const { return domain_; }
  RegionMask complement(const RegionMask& m) const;
  bool is_geodesic() const noexcept;
  bool is_explicit() const noexcept;

  /// Restricts the domain further (e.g. to one connected free component).
  Space restrict_domain(const RegionMask& keep) const;

  /// Exact distance from every point to `source`. Points outside the domain get
  /// kUnreachable. Throws EmptySource / DimensionMismatch.
  DistanceField distance_field(const RegionMask& source, const Exec& exec = {}) const;

  /// World length of a single-cell step (grid spacing; 0 for explicit spaces).
  double step() const noexcept;

  bool operator==(const Space& other) const;

 private:
  Space() = default;
  std::size_t size_ = 0;
  std::optional<GridGeometry> grid_;
  MetricKind metric_;
  RegionMask domain_;
  std::vector<std::int64_t> explicit_matrix_;  // quantized, row-major
};

using SpacePtr = std::shared_ptr<const Space>;

// Raw distance transforms on a full raster; exposed for tests and benchmarks.
// Sources are cells with source.test(i); result uses the given encoding.
std::vector<std::int64_t> squared_edt(const GridGeometry& g, const RegionMask& source, const Exec& exec = {});
std::vector<std::int64_t> l1_distance(const GridGeometry& g, const RegionMask& source);
std::vector<std::int64_t> linf_distance(const GridGeometry& g, const RegionMask& source);
std::vector<std::int64_t> geodesic_distance(const GridGeometry& g, const RegionMask& free_cells,
                                            const RegionMask& source, int connectivity);

}  // namespace ksector
