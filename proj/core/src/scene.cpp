#include "ksector/scene.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ksector/error.hpp"
#include "ksector/io.hpp"

namespace ksector {
namespace {

using nlohmann::json;

constexpr double kBoundarySlack = 1e-9;

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Collects every schema violation before failing.
class Validator {
 public:
  void error(const std::string& where, const std::string& what) { errors_.push_back(where + ": " + what); }
  bool ok() const { return errors_.empty(); }
  void throw_if_failed() const {
    if (errors_.empty()) return;
    std::string msg;
    for (const std::string& e : errors_) msg += (msg.empty() ? "" : "; ") + e;
    throw Error(ErrorCode::ValidationError, msg);
  }

  const json* member(const json& obj, const std::string& key, const std::string& where, bool required = true) {
    if (!obj.is_object()) {
      error(where, "expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) error(where, "missing \"" + key + "\"");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json* v, const std::string& where) {
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      error(where, "expected a number");
      return std::nullopt;
    }
    const double d = v->get<double>();
    if (!std::isfinite(d)) {
      error(where, "expected a finite number");
      return std::nullopt;
    }
    return d;
  }

  std::optional<int> integer(const json* v, const std::string& where) {
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      error(where, "expected an integer");
      return std::nullopt;
    }
    return v->get<int>();
  }

  std::optional<Point2> point(const json* v, const std::string& where) {
    if (!v) return std::nullopt;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
      error(where, "expected [x, y]");
      return std::nullopt;
    }
    return Point2{(*v)[0].get<double>(), (*v)[1].get<double>()};
  }

 private:
  std::vector<std::string> errors_;
};

bool point_in_polygon(Point2 p, const std::vector<Point2>& poly, double slack) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    if (distance_to_segment(p, poly[j], poly[i]) <= slack) return true;
    const Point2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

std::vector<SitePrimitive> parse_sites(Validator& v, const json* list, const std::string& where, bool finite) {
  std::vector<SitePrimitive> out;
  if (!list) return out;
  if (!list->is_array() || list->empty()) {
    v.error(where, "expected a nonempty array of site primitives");
    return out;
  }
  for (std::size_t n = 0; n < list->size(); ++n) {
    const json& item = (*list)[n];
    const std::string at = where + "[" + std::to_string(n) + "]";
    const json* type = v.member(item, "type", at);
    if (!type) continue;
    if (!type->is_string()) {
      v.error(at + ".type", "expected a string");
      continue;
    }
    const std::string t = type->get<std::string>();
    SitePrimitive s;
    if (finite != (t == "indices")) {
      v.error(at + ".type", finite ? "finite spaces take \"indices\" sites" : "grids take geometric sites, not indices");
      continue;
    }
    if (t == "point") {
      s.kind = SitePrimitive::Kind::Point;
      if (auto p = v.point(v.member(item, "at", at), at + ".at")) s.points = {*p};
    } else if (t == "segment") {
      s.kind = SitePrimitive::Kind::Segment;
      auto a = v.point(v.member(item, "from", at), at + ".from");
      auto b = v.point(v.member(item, "to", at), at + ".to");
      if (a && b) s.points = {*a, *b};
    } else if (t == "polygon") {
      s.kind = SitePrimitive::Kind::Polygon;
      const json* verts = v.member(item, "vertices", at);
      if (verts && (!verts->is_array() || verts->size() < 3)) {
        v.error(at + ".vertices", "expected at least three [x, y] vertices");
      } else if (verts) {
        for (std::size_t i = 0; i < verts->size(); ++i)
          if (auto p = v.point(&(*verts)[i], at + ".vertices[" + std::to_string(i) + "]")) s.points.push_back(*p);
      }
    } else if (t == "disc") {
      s.kind = SitePrimitive::Kind::Disc;
      auto c = v.point(v.member(item, "center", at), at + ".center");
      auto r = v.number(v.member(item, "radius", at), at + ".radius");
      if (r && *r < 0) v.error(at + ".radius", "must be nonnegative");
      if (c) s.points = {*c};
      s.radius = r.value_or(0.0);
    } else if (t == "indices") {
      s.kind = SitePrimitive::Kind::Indices;
      const json* idx = v.member(item, "indices", at);
      if (idx && (!idx->is_array() || idx->empty())) {
        v.error(at + ".indices", "expected a nonempty array of point indices");
      } else if (idx) {
        for (const json& i : *idx) {
          if (!i.is_number_unsigned() && !(i.is_number_integer() && i.get<long long>() >= 0))
            v.error(at + ".indices", "expected nonnegative integers");
          else
            s.indices.push_back(i.get<std::size_t>());
        }
      }
    } else {
      v.error(at + ".type", "unknown primitive \"" + t + "\"");
      continue;
    }
    out.push_back(std::move(s));
  }
  return out;
}

FiniteMetricSpace parse_finite(Validator& v, const json& space, const std::filesystem::path& base_dir) {
  const std::string at = "space";
  std::optional<FiniteMetricSpace> fm;
  if (auto it = space.find("points"); it != space.end()) {
    if (!it->is_array() || it->empty()) {
      v.error(at + ".points", "expected a nonempty array of coordinates");
    } else {
      std::vector<double> xs;
      for (const json& x : *it) {
        if (!x.is_number())
          v.error(at + ".points", "expected numbers");
        else
          xs.push_back(x.get<double>());
      }
      if (xs.size() == it->size()) fm = FiniteMetricSpace::on_line(xs);
    }
  } else {
    json matrix;
    if (auto m = space.find("matrix"); m != space.end()) {
      matrix = *m;
    } else if (auto f = space.find("matrix_file"); f != space.end() && f->is_string()) {
      try {
        matrix = json::parse(read_file(base_dir / f->get<std::string>()));
        if (matrix.is_object() && matrix.contains("matrix")) matrix = matrix["matrix"];
      } catch (const json::exception& e) {
        v.error(at + ".matrix_file", std::string("cannot parse: ") + e.what());
      } catch (const Error& e) {
        v.error(at + ".matrix_file", e.what());
      }
    } else {
      v.error(at, "finite space needs \"points\", \"matrix\" or \"matrix_file\"");
    }
    if (!matrix.is_null()) {
      const std::size_t n = matrix.is_array() ? matrix.size() : 0;
      std::vector<double> flat;
      bool good = n > 0;
      for (std::size_t i = 0; good && i < n; ++i) {
        if (!matrix[i].is_array() || matrix[i].size() != n) {
          good = false;
          break;
        }
        for (const json& d : matrix[i]) {
          if (!d.is_number()) {
            good = false;
            break;
          }
          flat.push_back(d.get<double>());
        }
      }
      if (!good)
        v.error(at + ".matrix", "expected a square array of numbers");
      else
        fm = FiniteMetricSpace(n, std::move(flat));
    }
  }
  if (!fm) return {};
  if (auto l = space.find("labels"); l != space.end()) {
    if (!l->is_array() || l->size() != fm->size())
      v.error(at + ".labels", "expected one label per point");
    else
      fm->set_labels(l->get<std::vector<std::string>>());
  }
  for (const MetricViolation& viol : validate_metric(*fm)) v.error(at + ".matrix", "not a metric: " + describe(viol));
  return *fm;
}

}  // namespace

double SceneSpec::tolerance() const { return tol.value_or(default_tolerance(*space)); }

RegionMask rasterize(const GridGeometry& grid, const std::vector<SitePrimitive>& sites) {
  RegionMask mask(grid.cell_count());
  const double h = grid.spacing;
  auto nearest = [&](Point2 p) -> std::optional<std::size_t> {
    const int x = static_cast<int>(std::floor((p.x - grid.origin.x) / h + 0.5));
    const int y = static_cast<int>(std::floor((p.y - grid.origin.y) / h + 0.5));
    if (!grid.contains(x, y)) return std::nullopt;
    return grid.index(x, y);
  };
  for (const SitePrimitive& s : sites) {
    switch (s.kind) {
      case SitePrimitive::Kind::Point:
        if (auto i = nearest(s.points.at(0))) mask.set(*i);
        break;
      case SitePrimitive::Kind::Segment: {
        const Point2 a = s.points.at(0), b = s.points.at(1);
        for (std::size_t i = 0; i < mask.size(); ++i)
          if (distance_to_segment(grid.center(i), a, b) <= 0.5 * h + kBoundarySlack * h) mask.set(i);
        if (auto i = nearest(a)) mask.set(*i);
        if (auto i = nearest(b)) mask.set(*i);
        break;
      }
      case SitePrimitive::Kind::Polygon:
        for (std::size_t i = 0; i < mask.size(); ++i)
          if (point_in_polygon(grid.center(i), s.points, kBoundarySlack * h)) mask.set(i);
        break;
      case SitePrimitive::Kind::Disc:
        for (std::size_t i = 0; i < mask.size(); ++i)
          if (norm(grid.center(i) - s.points.at(0)) <= s.radius + kBoundarySlack * h) mask.set(i);
        break;
      case SitePrimitive::Kind::Indices:
        throw Error(ErrorCode::ValidationError, "index sites cannot be rasterized on a grid");
    }
  }
  return mask;
}

SceneSpec parse_scene(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  Validator v;
  SceneSpec scene;
  scene.digest = fnv1a64(doc.dump());
  if (!doc.is_object()) throw Error(ErrorCode::ValidationError, "scene: expected a JSON object");

  if (auto ver = v.integer(v.member(doc, "scene_version", "scene"), "scene_version"); ver && *ver != 1)
    v.error("scene_version", "unsupported version " + std::to_string(*ver));

  if (auto k = v.integer(v.member(doc, "k", "scene"), "k")) {
    if (*k < 2) v.error("k", "must be at least 2");
    scene.k = *k;
  }

  // Space and metric.
  const json* space = v.member(doc, "space", "scene");
  const json* metric = v.member(doc, "metric", "scene", false);
  bool finite = false;
  std::optional<GridGeometry> grid;
  std::optional<FiniteMetricSpace> fm;
  std::string kind = "L2";
  int connectivity = 8;
  if (metric) {
    if (const json* kd = v.member(*metric, "kind", "metric")) {
      if (kd->is_string())
        kind = kd->get<std::string>();
      else
        v.error("metric.kind", "expected a string");
    }
    if (auto c = v.integer(v.member(*metric, "connectivity", "metric", false), "metric.connectivity")) {
      if (*c != 4 && *c != 8) v.error("metric.connectivity", "must be 4 or 8");
      connectivity = *c;
    }
  }
  if (space) {
    const json* type = v.member(*space, "type", "space");
    const std::string t = type && type->is_string() ? type->get<std::string>() : "";
    if (t == "grid") {
      GridGeometry g;
      auto w = v.integer(v.member(*space, "width", "space"), "space.width");
      auto h = v.integer(v.member(*space, "height", "space"), "space.height");
      auto sp = v.number(v.member(*space, "spacing", "space", false), "space.spacing");
      auto o = v.point(v.member(*space, "origin", "space", false), "space.origin");
      if (w && *w < 1) v.error("space.width", "must be at least 1");
      if (h && *h < 1) v.error("space.height", "must be at least 1");
      if (sp && !(*sp > 0)) v.error("space.spacing", "must be positive");
      g.width = w.value_or(1);
      g.height = h.value_or(1);
      g.spacing = sp.value_or(1.0);
      g.origin = o.value_or(Point2{});
      grid = g;
      if (kind != "L2" && kind != "L1" && kind != "Linf" && kind != "geodesic")
        v.error("metric.kind", "grid metrics are L2, L1, Linf or geodesic, got \"" + kind + "\"");
    } else if (t == "finite") {
      finite = true;
      if (metric && kind != "explicit") v.error("metric.kind", "finite spaces use the explicit metric");
      fm = parse_finite(v, *space, base_dir);
    } else if (type) {
      v.error("space.type", "expected \"grid\" or \"finite\"");
    }
  }

  // Sites.
  if (const json* sites = v.member(doc, "sites", "scene")) {
    scene.p_sites = parse_sites(v, v.member(*sites, "P", "sites"), "sites.P", finite);
    scene.q_sites = parse_sites(v, v.member(*sites, "Q", "sites"), "sites.Q", finite);
  }

  if (const json* it = v.member(doc, "iteration", "scene", false)) {
    if (const json* d = v.member(*it, "direction", "iteration", false)) {
      const std::string dir = d->is_string() ? d->get<std::string>() : "";
      if (dir == "asc") {
        scene.iteration = {true, false, {}};
      } else if (dir == "desc") {
        scene.iteration = {false, true, {}};
      } else if (dir == "both") {
        scene.iteration = {true, true, {}};
      } else {
        v.error("iteration.direction", "expected asc, desc or both");
      }
    }
    if (auto m = v.integer(v.member(*it, "max_iters", "iteration", false), "iteration.max_iters")) {
      if (*m < 1) v.error("iteration.max_iters", "must be positive");
      scene.iteration.max_iters = *m;
    }
  }
  if (const json* ver = v.member(doc, "verify", "scene", false)) {
    if (auto t = v.number(v.member(*ver, "tol", "verify", false), "verify.tol")) {
      if (*t < 0) v.error("verify.tol", "must be nonnegative");
      scene.tol = *t;
    }
  }
  if (const json* out = v.member(doc, "output", "scene", false)) {
    auto flag = [&](const char* key, bool& dst) {
      if (const json* f = v.member(*out, key, "output", false)) {
        if (f->is_boolean())
          dst = f->get<bool>();
        else
          v.error(std::string("output.") + key, "expected a boolean");
      }
    };
    flag("masks", scene.output.masks);
    flag("svg", scene.output.svg);
    flag("states", scene.output.states);
  }

  // Obstacles for geodesic grids.
  RegionMask obstacles;
  if (grid && kind == "geodesic") {
    obstacles = RegionMask(grid->cell_count());
    if (const json* obs = v.member(*metric, "obstacles", "metric", false)) {
      const auto prims = parse_sites(v, obs, "metric.obstacles", false);
      if (v.ok()) obstacles |= rasterize(*grid, prims);
    }
    if (const json* pgm = v.member(*metric, "obstacle_pgm", "metric", false)) {
      try {
        int w = 0, h = 0;
        RegionMask m = mask_from_pgm(read_file(base_dir / pgm->get<std::string>()), &w, &h);
        if (w != grid->width || h != grid->height)
          v.error("metric.obstacle_pgm", "image size does not match the grid");
        else
          obstacles |= m;
      } catch (const std::exception& e) {
        v.error("metric.obstacle_pgm", e.what());
      }
    }
  }
  v.throw_if_failed();

  // Build the space and rasterize.
  Space built = finite ? Space::finite(*fm) : [&] {
    MetricKind mk = L2Metric{};
    if (kind == "L1") mk = L1Metric{};
    if (kind == "Linf") mk = LinfMetric{};
    if (kind == "geodesic") mk = GeodesicGridMetric{obstacles, connectivity};
    try {
      return Space::grid(*grid, std::move(mk));
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationError, std::string("metric: ") + e.what());
    }
  }();

  if (finite) {
    auto collect = [&](const std::vector<SitePrimitive>& prims, const std::string& at) {
      RegionMask m(built.size());
      for (const SitePrimitive& s : prims)
        for (std::size_t i : s.indices) {
          if (i >= built.size())
            v.error(at, "index " + std::to_string(i) + " out of range");
          else
            m.set(i);
        }
      return m;
    };
    scene.P = collect(scene.p_sites, "sites.P");
    scene.Q = collect(scene.q_sites, "sites.Q");
  } else {
    scene.P = rasterize(*grid, scene.p_sites);
    scene.Q = rasterize(*grid, scene.q_sites);
    if (built.is_geodesic()) {
      if (scene.P.intersects(~built.domain())) v.error("sites.P", "covers obstacle cells");
      if (scene.Q.intersects(~built.domain())) v.error("sites.Q", "covers obstacle cells");
    }
  }
  if (scene.P.empty()) v.error("sites.P", "empty after rasterization");
  if (scene.Q.empty()) v.error("sites.Q", "empty after rasterization");
  v.throw_if_failed();
  if (scene.P.intersects(scene.Q))
    throw Error(ErrorCode::SitesOverlapAfterRasterization,
                std::to_string((scene.P & scene.Q).count()) + " cells belong to both sites");

  if (built.is_geodesic()) {
    const auto& geo = std::get<GeodesicGridMetric>(built.metric());
    const ComponentLabels labels = geodesic_reachability(*grid, geo.obstacles, geo.connectivity);
    const std::int32_t component = labels.label[scene.P.indices().front()];
    bool connected = true;
    (scene.P | scene.Q).for_each([&](std::size_t i) { connected = connected && labels.label[i] == component; });
    if (!connected) throw Error(ErrorCode::ValidationError, "sites: P and Q must lie in one free region");
    RegionMask keep(built.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
      if (labels.label[i] == component) keep.set(i);
    built = built.restrict_domain(keep);
  }
  scene.space = std::make_shared<const Space>(std::move(built));
  return scene;
}

SceneSpec load_scene(const std::filesystem::path& path) {
  return parse_scene(read_file(path), path.parent_path());
}

}  // namespace ksector
