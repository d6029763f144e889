// Exact grid distance transforms. All arithmetic is integral so that
// downstream dominance comparisons never depend on floating-point ties.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <utility>
#include <vector>

#include "ksector/error.hpp"
#include "ksector/metric.hpp"

namespace ksector {
namespace {

// Breakpoint between two parabolas of the lower envelope, kept as an exact
// fraction num / den with den > 0.
struct Breakpoint {
  std::int64_t num;
  std::int64_t den;
  bool neg_inf = false;
};

bool leq(const Breakpoint& a, const Breakpoint& b) {
  if (a.neg_inf) return true;
  if (b.neg_inf) return false;
  return static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den;
}

bool less_than(const Breakpoint& a, std::int64_t q) {
  if (a.neg_inf) return true;
  return a.num < q * a.den;
}

// 1D squared distance transform d[q] = min_p (q - p)^2 + f[p] over finite f
// (lower envelope of parabolas). Entries equal to kUnreachable are absent.
void edt_1d(const std::int64_t* f, std::int64_t* d, std::int64_t n, std::vector<std::int64_t>& v,
            std::vector<Breakpoint>& z) {
  v.clear();
  z.clear();
  for (std::int64_t q = 0; q < n; ++q) {
    if (f[q] >= kUnreachable) continue;
    if (v.empty()) {
      v.push_back(q);
      z.push_back({0, 1, true});
      continue;
    }
    for (;;) {
      const std::int64_t p = v.back();
      Breakpoint s{(f[q] + q * q) - (f[p] + p * p), 2 * (q - p)};
      if (leq(s, z.back())) {
        v.pop_back();
        z.pop_back();
        continue;
      }
      v.push_back(q);
      z.push_back(s);
      break;
    }
  }
  if (v.empty()) {
    std::fill(d, d + n, kUnreachable);
    return;
  }
  std::size_t j = 0;
  for (std::int64_t q = 0; q < n; ++q) {
    while (j + 1 < v.size() && less_than(z[j + 1], q)) ++j;
    const std::int64_t p = v[j];
    d[q] = (q - p) * (q - p) + f[p];
  }
}

}  // namespace

std::vector<std::int64_t> squared_edt(const GridGeometry& g, const RegionMask& source, const Exec& exec) {
  const std::int64_t w = g.width;
  const std::int64_t h = g.height;
  std::vector<std::int64_t> cols(static_cast<std::size_t>(w * h));
  std::vector<std::int64_t> out(static_cast<std::size_t>(w * h));

  // Columns: f is 0 on sources, absent elsewhere.
  parallel_for(0, static_cast<std::size_t>(w), exec, [&](std::size_t x) {
    std::vector<std::int64_t> f(static_cast<std::size_t>(h)), d(static_cast<std::size_t>(h)), v;
    std::vector<Breakpoint> z;
    for (std::int64_t y = 0; y < h; ++y)
      f[static_cast<std::size_t>(y)] = source.test(static_cast<std::size_t>(y * w) + x) ? 0 : kUnreachable;
    edt_1d(f.data(), d.data(), h, v, z);
    for (std::int64_t y = 0; y < h; ++y) cols[static_cast<std::size_t>(y * w) + x] = d[static_cast<std::size_t>(y)];
  });
  parallel_for(0, static_cast<std::size_t>(h), exec, [&](std::size_t y) {
    std::vector<std::int64_t> v;
    std::vector<Breakpoint> z;
    const std::size_t row = y * static_cast<std::size_t>(w);
    edt_1d(cols.data() + row, out.data() + row, w, v, z);
  });
  return out;
}

std::vector<std::int64_t> l1_distance(const GridGeometry& g, const RegionMask& source) {
  const int w = g.width, h = g.height;
  std::vector<std::int64_t> d(g.cell_count());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = source.test(i) ? 0 : kUnreachable;
  auto relax = [&](std::size_t i, int x, int y) {
    if (g.contains(x, y)) d[i] = std::min(d[i], d[g.index(x, y)] + 1);
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = g.index(x, y);
      relax(i, x - 1, y);
      relax(i, x, y - 1);
    }
  for (int y = h - 1; y >= 0; --y)
    for (int x = w - 1; x >= 0; --x) {
      const std::size_t i = g.index(x, y);
      relax(i, x + 1, y);
      relax(i, x, y + 1);
    }
  for (std::int64_t& v : d) v = std::min(v, kUnreachable);
  return d;
}

std::vector<std::int64_t> linf_distance(const GridGeometry& g, const RegionMask& source) {
  const int w = g.width, h = g.height;
  std::vector<std::int64_t> d(g.cell_count());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = source.test(i) ? 0 : kUnreachable;
  auto relax = [&](std::size_t i, int x, int y) {
    if (g.contains(x, y)) d[i] = std::min(d[i], d[g.index(x, y)] + 1);
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = g.index(x, y);
      relax(i, x - 1, y);
      relax(i, x - 1, y - 1);
      relax(i, x, y - 1);
      relax(i, x + 1, y - 1);
    }
  for (int y = h - 1; y >= 0; --y)
    for (int x = w - 1; x >= 0; --x) {
      const std::size_t i = g.index(x, y);
      relax(i, x + 1, y);
      relax(i, x + 1, y + 1);
      relax(i, x, y + 1);
      relax(i, x - 1, y + 1);
    }
  for (std::int64_t& v : d) v = std::min(v, kUnreachable);
  return d;
}

std::vector<std::int64_t> geodesic_distance(const GridGeometry& g, const RegionMask& free_cells,
                                            const RegionMask& source, int connectivity) {
  // round(sqrt(2) * 2^16)
  constexpr std::int64_t kDiagonal = 92682;
  static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int moves = connectivity == 4 ? 4 : 8;

  std::vector<std::int64_t> d(g.cell_count(), kUnreachable);
  using Entry = std::pair<std::int64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  source.for_each([&](std::size_t i) {
    if (!free_cells.test(i)) return;
    d[i] = 0;
    heap.emplace(0, i);
  });
  while (!heap.empty()) {
    const auto [di, i] = heap.top();
    heap.pop();
    if (di != d[i]) continue;
    const int x = g.col(i), y = g.row(i);
    for (int m = 0; m < moves; ++m) {
      const int nx = x + kDx[m], ny = y + kDy[m];
      if (!g.contains(nx, ny)) continue;
      const std::size_t j = g.index(nx, ny);
      if (!free_cells.test(j)) continue;
      const std::int64_t nd = di + (m < 4 ? kGeodesicScale : kDiagonal);
      if (nd < d[j]) {
        d[j] = nd;
        heap.emplace(nd, j);
      }
    }
  }
  return d;
}

ComponentLabels geodesic_reachability(const GridGeometry& g, const RegionMask& obstacles, int connectivity) {
  if (obstacles.size() != g.cell_count())
    throw Error(ErrorCode::DimensionMismatch, "obstacle mask does not match grid");
  static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int moves = connectivity == 4 ? 4 : 8;
  ComponentLabels out;
  out.label.assign(g.cell_count(), -1);
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < g.cell_count(); ++seed) {
    if (obstacles.test(seed) || out.label[seed] >= 0) continue;
    const std::int32_t id = out.count++;
    out.label[seed] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const int x = g.col(i), y = g.row(i);
      for (int m = 0; m < moves; ++m) {
        const int nx = x + kDx[m], ny = y + kDy[m];
        if (!g.contains(nx, ny)) continue;
        const std::size_t j = g.index(nx, ny);
        if (obstacles.test(j) || out.label[j] >= 0) continue;
        out.label[j] = id;
        stack.push_back(j);
      }
    }
  }
  return out;
}

}  // namespace ksector
