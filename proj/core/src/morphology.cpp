#include "ksector/morphology.hpp"

namespace ksector {

RegionMask inner_boundary(const GridGeometry& g, const RegionMask& mask, const RegionMask& domain, int connectivity) {
  static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const int moves = connectivity == 8 ? 8 : 4;
  RegionMask out(mask.size());
  mask.for_each([&](std::size_t i) {
    const int x = g.col(i), y = g.row(i);
    for (int d = 0; d < moves; ++d) {
      const int nx = x + kDx[d], ny = y + kDy[d];
      if (!g.contains(nx, ny)) continue;
      const std::size_t j = g.index(nx, ny);
      if (domain.test(j) && !mask.test(j)) {
        out.set(i);
        return;
      }
    }
  });
  return out;
}

RegionMask dilate(const GridGeometry& g, const RegionMask& mask, const RegionMask& domain) {
  RegionMask out = mask;
  mask.for_each([&](std::size_t i) {
    const int x = g.col(i), y = g.row(i);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (g.contains(x + dx, y + dy)) out.set(g.index(x + dx, y + dy));
  });
  return out & domain;
}

}  // namespace ksector
