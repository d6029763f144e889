// Marching-squares tracing of a sampled field on the lattice of cell centers.

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <set>
#include <utility>

#include "ksector/sectors.hpp"

namespace ksector {
namespace {

struct Crossing {
  std::int64_t key;
  Point2 at;
};

struct Segment {
  Crossing a;
  Crossing b;
};

class Tracer {
 public:
  Tracer(const GridGeometry& g, const std::vector<double>& v, bool strict) : g_(g), v_(v), strict_(strict) {}

  bool inside(double value) const { return strict_ ? value < 0.0 : value <= 0.0; }

  // Crossing on the edge between lattice points i and j (one inside, one outside).
  Crossing crossing(std::size_t i, std::size_t j, std::int64_t edge_key) const {
    const double gi = v_[i], gj = v_[j];
    double t = gi / (gi - gj);
    const Point2 pi = g_.center(i), pj = g_.center(j);
    const auto vertex_key = [&](std::size_t idx) {
      return static_cast<std::int64_t>(2 * g_.cell_count() + idx);
    };
    if (gi == 0.0) return {vertex_key(i), pi};
    if (gj == 0.0) return {vertex_key(j), pj};
    t = std::clamp(t, 0.0, 1.0);
    return {edge_key, pi + t * (pj - pi)};
  }

  std::int64_t h_edge(int x, int y) const { return static_cast<std::int64_t>(2 * g_.index(x, y)); }
  std::int64_t v_edge(int x, int y) const { return static_cast<std::int64_t>(2 * g_.index(x, y) + 1); }

  void square(int x, int y, std::vector<Segment>& out) const {
    // c0 (x,y), c1 (x+1,y), c2 (x+1,y+1), c3 (x,y+1)
    const std::size_t c[4] = {g_.index(x, y), g_.index(x + 1, y), g_.index(x + 1, y + 1), g_.index(x, y + 1)};
    int code = 0;
    for (int b = 0; b < 4; ++b)
      if (inside(v_[c[b]])) code |= 1 << b;
    if (code == 0 || code == 15) return;

    // Edge e connects corners e and e+1 (mod 4).
    const std::int64_t keys[4] = {h_edge(x, y), v_edge(x + 1, y), h_edge(x, y + 1), v_edge(x, y)};
    auto edge = [&](int e) { return crossing(c[e], c[(e + 1) & 3], keys[e]); };
    auto emit = [&](int e0, int e1) { out.push_back({edge(e0), edge(e1)}); };

    if (code == 5 || code == 10) {
      const double center = 0.25 * (v_[c[0]] + v_[c[1]] + v_[c[2]] + v_[c[3]]);
      const bool joined = inside(center);
      // code 5: c0, c2 inside. code 10: c1, c3 inside.
      if ((code == 5) == joined) {
        emit(0, 1);  // isolates c1
        emit(2, 3);  // isolates c3
      } else {
        emit(3, 0);  // isolates c0
        emit(1, 2);  // isolates c2
      }
      return;
    }
    int found[2];
    int n = 0;
    for (int e = 0; e < 4; ++e)
      if (((code >> e) & 1) != ((code >> ((e + 1) & 3)) & 1)) found[n++] = e;
    if (n == 2) emit(found[0], found[1]);
  }

 private:
  const GridGeometry& g_;
  const std::vector<double>& v_;
  bool strict_;
};

std::vector<Polyline> link(const std::vector<Segment>& segs) {
  std::unordered_map<std::int64_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    incident[segs[s].a.key].push_back(s);
    incident[segs[s].b.key].push_back(s);
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<Polyline> lines;

  auto walk = [&](std::size_t first, std::int64_t from_key) {
    Polyline line;
    std::size_t s = first;
    std::int64_t key = from_key;
    line.push_back(segs[s].a.key == key ? segs[s].a.at : segs[s].b.at);
    for (;;) {
      used[s] = true;
      const Crossing& next = segs[s].a.key == key ? segs[s].b : segs[s].a;
      line.push_back(next.at);
      key = next.key;
      const auto& inc = incident[key];
      if (inc.size() != 2) break;
      const std::size_t cand = inc[0] == s ? inc[1] : inc[0];
      if (used[cand]) break;
      s = cand;
    }
    lines.push_back(std::move(line));
  };

  // Open chains start at keys whose degree is not 2; what remains are loops.
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    for (const Crossing* end : {&segs[s].a, &segs[s].b}) {
      if (used[s]) break;
      if (incident[end->key].size() != 2) walk(s, end->key);
    }
  }
  for (std::size_t s = 0; s < segs.size(); ++s)
    if (!used[s]) walk(s, segs[s].a.key);
  return lines;
}

}  // namespace

std::vector<Polyline> trace_zero_level(const GridGeometry& g, const std::vector<double>& values,
                                       const RegionMask& valid, bool inside_strict) {
  Tracer tracer(g, values, inside_strict);
  std::vector<Segment> segs;
  for (int y = 0; y + 1 < g.height; ++y)
    for (int x = 0; x + 1 < g.width; ++x) {
      if (!valid.test(g.index(x, y)) || !valid.test(g.index(x + 1, y)) || !valid.test(g.index(x, y + 1)) ||
          !valid.test(g.index(x + 1, y + 1)))
        continue;
      tracer.square(x, y, segs);
    }

  std::vector<Segment> unique;
  unique.reserve(segs.size());
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (const Segment& s : segs) {
    if (s.a.key == s.b.key) continue;
    if (!seen.emplace(std::min(s.a.key, s.b.key), std::max(s.a.key, s.b.key)).second) continue;
    unique.push_back(s);
  }
  return link(unique);
}

}  // namespace ksector
