#include <algorithm>
#include <cmath>
#include <string>

#include "ksector/error.hpp"
#include "ksector/metric.hpp"

namespace ksector {

std::string metric_name(const MetricKind& m) {
  struct {
    std::string operator()(const L2Metric&) const { return "L2"; }
    std::string operator()(const L1Metric&) const { return "L1"; }
    std::string operator()(const LinfMetric&) const { return "Linf"; }
    std::string operator()(const GeodesicGridMetric&) const { return "geodesic"; }
    std::string operator()(const ExplicitMetric&) const { return "explicit"; }
  } visitor;
  return std::visit(visitor, m);
}

double DistanceField::to_world(std::int64_t raw) const {
  if (raw >= kUnreachable) return std::numeric_limits<double>::infinity();
  switch (encoding) {
    case DistanceEncoding::SquaredCells: return std::sqrt(static_cast<double>(raw)) * scale;
    case DistanceEncoding::Cells:
    case DistanceEncoding::FixedPoint: return static_cast<double>(raw) * scale;
  }
  return 0.0;
}

double DistanceField::world(std::size_t i) const { return to_world(values[i]); }

Space Space::grid(const GridGeometry& geometry, MetricKind metric) {
  geometry.validate();
  Space s;
  s.size_ = geometry.cell_count();
  s.grid_ = geometry;
  s.domain_ = RegionMask(s.size_, true);
  if (std::holds_alternative<ExplicitMetric>(metric))
    throw Error(ErrorCode::InvalidMetric, "explicit metric requires a finite space, not a grid");
  if (const auto* geo = std::get_if<GeodesicGridMetric>(&metric)) {
    if (geo->connectivity != 4 && geo->connectivity != 8)
      throw Error(ErrorCode::InvalidMetric, "connectivity must be 4 or 8");
    if (geo->obstacles.size() != s.size_) throw Error(ErrorCode::DimensionMismatch, "obstacle mask does not match grid");
    s.domain_.subtract(geo->obstacles);
    if (s.domain_.empty()) throw Error(ErrorCode::InvalidMetric, "obstacles cover the whole grid");
  }
  s.metric_ = std::move(metric);
  return s;
}

Space Space::finite(const FiniteMetricSpace& space) {
  if (space.size() == 0) throw Error(ErrorCode::InvalidMetric, "finite space has no points");
  const auto violations = validate_metric(space);
  if (!violations.empty()) {
    std::string msg = "matrix is not a metric:";
    for (std::size_t v = 0; v < violations.size() && v < 8; ++v) msg += " " + describe(violations[v]);
    if (violations.size() > 8) msg += " ...";
    throw Error(ErrorCode::InvalidMetric, msg);
  }
  Space s;
  s.size_ = space.size();
  s.domain_ = RegionMask(s.size_, true);
  s.explicit_matrix_.resize(space.matrix().size());
  std::transform(space.matrix().begin(), space.matrix().end(), s.explicit_matrix_.begin(),
                 [](double d) { return std::llround(d * static_cast<double>(kExplicitScale)); });
  s.metric_ = ExplicitMetric{space};
  return s;
}

const GridGeometry& Space::geometry() const {
  if (!grid_) throw Error(ErrorCode::NotApplicable, "space is not a grid");
  return *grid_;
}

bool Space::is_geodesic() const noexcept { return std::holds_alternative<GeodesicGridMetric>(metric_); }
bool Space::is_explicit() const noexcept { return std::holds_alternative<ExplicitMetric>(metric_); }

RegionMask Space::complement(const RegionMask& m) const {
  RegionMask out = domain_;
  out.subtract(m);
  return out;
}

Space Space::restrict_domain(const RegionMask& keep) const {
  Space s = *this;
  s.domain_ &= keep;
  if (s.domain_.empty()) throw Error(ErrorCode::InvalidMetric, "restricted domain is empty");
  return s;
}

double Space::step() const noexcept { return grid_ ? grid_->spacing : 0.0; }

bool Space::operator==(const Space& other) const {
  return size_ == other.size_ && grid_ == other.grid_ && metric_ == other.metric_ && domain_ == other.domain_;
}

DistanceField Space::distance_field(const RegionMask& source, const Exec& exec) const {
  if (source.size() != size_)
    throw Error(ErrorCode::DimensionMismatch,
                "source has " + std::to_string(source.size()) + " points, space has " + std::to_string(size_));
  const RegionMask effective = source & domain_;
  if (effective.empty()) throw Error(ErrorCode::EmptySource, "distance to an empty set is undefined");

  DistanceField field;
  if (const auto* ex = std::get_if<ExplicitMetric>(&metric_)) {
    (void)ex;
    field.encoding = DistanceEncoding::FixedPoint;
    field.scale = 1.0 / static_cast<double>(kExplicitScale);
    field.values.assign(size_, kUnreachable);
    const std::vector<std::size_t> src = effective.indices();
    parallel_for(0, size_, exec, [&](std::size_t j) {
      std::int64_t best = kUnreachable;
      for (std::size_t i : src) best = std::min(best, explicit_matrix_[i * size_ + j]);
      field.values[j] = best;
    });
  } else {
    const GridGeometry& g = *grid_;
    struct {
      const Space& self;
      const GridGeometry& g;
      const RegionMask& src;
      const Exec& exec;
      DistanceField& f;
      void operator()(const L2Metric&) const {
        f.encoding = DistanceEncoding::SquaredCells;
        f.scale = g.spacing;
        f.values = squared_edt(g, src, exec);
      }
      void operator()(const L1Metric&) const {
        f.encoding = DistanceEncoding::Cells;
        f.scale = g.spacing;
        f.values = l1_distance(g, src);
      }
      void operator()(const LinfMetric&) const {
        f.encoding = DistanceEncoding::Cells;
        f.scale = g.spacing;
        f.values = linf_distance(g, src);
      }
      void operator()(const GeodesicGridMetric& geo) const {
        f.encoding = DistanceEncoding::FixedPoint;
        f.scale = g.spacing / static_cast<double>(kGeodesicScale);
        f.values = geodesic_distance(g, self.domain_, src, geo.connectivity);
      }
      void operator()(const ExplicitMetric&) const {}
    } fill{*this, g, effective, exec, field};
    std::visit(fill, metric_);
  }
  if (domain_.count() != size_) {
    for (std::size_t i = 0; i < size_; ++i)
      if (!domain_.test(i)) field.values[i] = kUnreachable;
  }
  return field;
}

}  // namespace ksector
