#include "ksector/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "ksector/error.hpp"

namespace ksector {
namespace {

using nlohmann::json;

json runs_of(const RegionMask& m) {
  json out = json::array();
  std::size_t i = 0;
  const std::size_t n = m.size();
  while (i < n) {
    if (!m.test(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && m.test(j)) ++j;
    out.push_back(i);
    out.push_back(j - i);
    i = j;
  }
  return out;
}

RegionMask mask_of(const json& runs, std::size_t n) {
  if (!runs.is_array() || runs.size() % 2 != 0) throw Error(ErrorCode::ParseError, "mask runs must be an even-length array");
  RegionMask m(n);
  for (std::size_t r = 0; r < runs.size(); r += 2) {
    const auto start = runs[r].get<std::size_t>();
    const auto len = runs[r + 1].get<std::size_t>();
    if (start + len > n) throw Error(ErrorCode::ParseError, "mask run exceeds space size");
    for (std::size_t i = start; i < start + len; ++i) m.set(i);
  }
  return m;
}

// Infinite doubles are stored as null.
json number(double d) { return std::isfinite(d) ? json(d) : json(nullptr); }
double number_of(const json& j) { return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>(); }

json to_json(const CheckReport& r) {
  json w = json::array();
  for (const Witness& x : r.witnesses) w.push_back({{"index", x.index}, {"what", x.what}, {"value", number(x.value)}});
  json summary = json::object();
  for (const auto& [key, value] : r.summary) summary[key] = number(value);
  return {{"name", r.name}, {"passed", r.passed}, {"witnesses", w}, {"summary", summary}, {"notes", r.notes}};
}

CheckReport check_of(const json& j) {
  CheckReport r;
  r.name = j.at("name").get<std::string>();
  r.passed = j.at("passed").get<bool>();
  for (const json& x : j.at("witnesses"))
    r.witnesses.push_back({x.at("index").get<std::size_t>(), x.at("what").get<std::string>(), number_of(x.at("value"))});
  for (const auto& [key, value] : j.at("summary").items()) r.summary[key] = number_of(value);
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

json to_json(const GapReport& g) {
  json slots = json::array();
  for (const SlotGap& s : g.slots)
    slots.push_back({{"hausdorff", number(s.hausdorff)},
                     {"directed_lower_upper", number(s.directed_lower_upper)},
                     {"directed_upper_lower", number(s.directed_upper_lower)},
                     {"symdiff_R", s.symdiff_R},
                     {"symdiff_S", s.symdiff_S},
                     {"symdiff_C", s.symdiff_C}});
  return {{"slots", slots}, {"max_hausdorff", number(g.max_hausdorff)}, {"max_symdiff_R", g.max_symdiff_R}};
}

GapReport gap_of(const json& j) {
  GapReport g;
  for (const json& s : j.at("slots"))
    g.slots.push_back({number_of(s.at("hausdorff")), number_of(s.at("directed_lower_upper")),
                       number_of(s.at("directed_upper_lower")), s.at("symdiff_R").get<std::size_t>(),
                       s.at("symdiff_S").get<std::size_t>(), s.at("symdiff_C").get<std::size_t>()});
  g.max_hausdorff = number_of(j.at("max_hausdorff"));
  g.max_symdiff_R = j.at("max_symdiff_R").get<std::size_t>();
  return g;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

RunSummary summarize(const FixpointResult& result, Direction direction) {
  return {direction == Direction::Ascending ? "ascending" : "descending", result.iterations, result.converged,
          result.changed};
}

std::string report_to_json(const RunReport& report) {
  json runs = json::array();
  for (const RunSummary& r : report.runs)
    runs.push_back({{"direction", r.direction},
                    {"iterations", r.iterations},
                    {"converged", r.converged},
                    {"changed", r.changed}});
  json checks = json::array();
  for (const CheckReport& c : report.checks) checks.push_back(to_json(c));
  json doc = {{"report_version", report.report_version},
              {"scene_digest", report.scene_digest},
              {"metric", report.metric},
              {"k", report.k},
              {"runs", runs},
              {"checks", checks},
              {"gap", report.gap ? to_json(*report.gap) : json(nullptr)},
              {"findings", report.findings}};
  return doc.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    RunReport r;
    r.report_version = doc.at("report_version").get<int>();
    r.scene_digest = doc.at("scene_digest").get<std::string>();
    r.metric = doc.at("metric").get<std::string>();
    r.k = doc.at("k").get<int>();
    for (const json& run : doc.at("runs"))
      r.runs.push_back({run.at("direction").get<std::string>(), run.at("iterations").get<int>(),
                        run.at("converged").get<bool>(),
                        run.at("changed").get<std::vector<std::vector<std::size_t>>>()});
    for (const json& c : doc.at("checks")) r.checks.push_back(check_of(c));
    if (!doc.at("gap").is_null()) r.gap = gap_of(doc.at("gap"));
    r.findings = doc.at("findings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report: ") + e.what());
  }
}

std::string state_to_json(const GradationState& state) {
  json r = json::array(), s = json::array();
  for (int i = 1; i < state.k(); ++i) {
    r.push_back(runs_of(state.R(i)));
    s.push_back(runs_of(state.S(i)));
  }
  const json doc = {{"state_version", 1},
                    {"k", state.k()},
                    {"size", state.space().size()},
                    {"P", runs_of(state.P())},
                    {"Q", runs_of(state.Q())},
                    {"R", r},
                    {"S", s}};
  return doc.dump() + "\n";
}

GradationState state_from_json(const std::string& text, SpacePtr space) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("state: ") + e.what());
  }
  try {
    if (doc.at("state_version").get<int>() != 1) throw Error(ErrorCode::ParseError, "unsupported state_version");
    const auto n = doc.at("size").get<std::size_t>();
    if (n != space->size())
      throw Error(ErrorCode::DimensionMismatch, "state has " + std::to_string(n) + " points, space has " +
                                                    std::to_string(space->size()));
    std::vector<RegionMask> r, s;
    for (const json& m : doc.at("R")) r.push_back(mask_of(m, n));
    for (const json& m : doc.at("S")) s.push_back(mask_of(m, n));
    return GradationState(std::move(space), mask_of(doc.at("P"), n), mask_of(doc.at("Q"), n), doc.at("k").get<int>(),
                          std::move(r), std::move(s));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("state: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

std::string mask_to_pgm(const RegionMask& mask, int width, int height) {
  if (static_cast<std::size_t>(width) * static_cast<std::size_t>(height) != mask.size())
    throw Error(ErrorCode::DimensionMismatch, "PGM size does not match mask");
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) out[header + i] = static_cast<char>(mask.test(i) ? 255 : 0);
  return out;
}

RegionMask mask_from_pgm(const std::string& bytes, int* width, int* height) {
  std::istringstream in(bytes);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic;
  auto skip_comments = [&] {
    in >> std::ws;
    while (in.peek() == '#') {
      std::string line;
      std::getline(in, line);
      in >> std::ws;
    }
  };
  skip_comments();
  in >> w;
  skip_comments();
  in >> h;
  skip_comments();
  in >> maxval;
  if (magic != "P5" || !in || w < 1 || h < 1 || maxval < 1 || maxval > 255)
    throw Error(ErrorCode::ParseError, "not an 8-bit binary PGM");
  in.get();  // single whitespace after maxval
  const auto offset = static_cast<std::size_t>(in.tellg());
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() < offset + n) throw Error(ErrorCode::ParseError, "truncated PGM");
  RegionMask m(n);
  for (std::size_t i = 0; i < n; ++i)
    if (static_cast<unsigned char>(bytes[offset + i]) != 0) m.set(i);
  if (width) *width = w;
  if (height) *height = h;
  return m;
}

std::string sectors_to_svg(const GridGeometry& grid, const SectorSet& sectors, const SceneSpec& scene) {
  static constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                             "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  const double h = grid.spacing;
  const double x0 = grid.origin.x - 0.5 * h, y0 = grid.origin.y - 0.5 * h;
  const double w = grid.width * h, ht = grid.height * h;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << fmt(x0) << ' ' << fmt(y0) << ' '
      << fmt(w) << ' ' << fmt(ht) << "\" width=\"" << grid.width << "\" height=\"" << grid.height << "\">\n"
      << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(ht)
      << "\" fill=\"white\"/>\n";
  for (int i = 1; i < sectors.k; ++i) {
    out << "<g id=\"C" << i << "\" class=\"sector\" fill=\"none\" stroke=\"" << kPalette[(i - 1) % 10]
        << "\" stroke-width=\"" << fmt(h) << "\">\n";
    for (const Polyline& line : sectors.curves.at(static_cast<std::size_t>(i - 1))) {
      out << "<polyline points=\"";
      for (std::size_t p = 0; p < line.size(); ++p) out << (p ? " " : "") << fmt(line[p].x) << ',' << fmt(line[p].y);
      out << "\"/>\n";
    }
    out << "</g>\n";
  }
  auto sites = [&](const std::vector<SitePrimitive>& prims, const char* id, const char* color) {
    out << "<g id=\"" << id << "\" class=\"site\" fill=\"" << color << "\" stroke=\"" << color << "\" stroke-width=\""
        << fmt(h) << "\">\n";
    for (const SitePrimitive& s : prims) {
      switch (s.kind) {
        case SitePrimitive::Kind::Point:
          out << "<circle cx=\"" << fmt(s.points[0].x) << "\" cy=\"" << fmt(s.points[0].y) << "\" r=\"" << fmt(2 * h)
              << "\"/>\n";
          break;
        case SitePrimitive::Kind::Segment:
          out << "<line x1=\"" << fmt(s.points[0].x) << "\" y1=\"" << fmt(s.points[0].y) << "\" x2=\""
              << fmt(s.points[1].x) << "\" y2=\"" << fmt(s.points[1].y) << "\"/>\n";
          break;
        case SitePrimitive::Kind::Polygon:
          out << "<polygon points=\"";
          for (std::size_t p = 0; p < s.points.size(); ++p)
            out << (p ? " " : "") << fmt(s.points[p].x) << ',' << fmt(s.points[p].y);
          out << "\"/>\n";
          break;
        case SitePrimitive::Kind::Disc:
          out << "<circle cx=\"" << fmt(s.points[0].x) << "\" cy=\"" << fmt(s.points[0].y) << "\" r=\""
              << fmt(s.radius) << "\"/>\n";
          break;
        case SitePrimitive::Kind::Indices: break;
      }
    }
    out << "</g>\n";
  };
  sites(scene.p_sites, "P", "#000000");
  sites(scene.q_sites, "Q", "#555555");
  out << "</svg>\n";
  return out.str();
}

}  // namespace ksector
