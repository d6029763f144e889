#include "ksector/sectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ksector/error.hpp"

namespace ksector {

std::vector<RegionMask> tie_masks(const GradationState& s) {
  std::vector<RegionMask> out;
  for (int i = 1; i < s.k(); ++i) out.push_back(s.R(i) & s.S(i));
  return out;
}

namespace {

constexpr int kRefinePasses = 16;

std::vector<double> slot_level(const GradationState& s, int slot, const Exec& exec) {
  const Space& space = s.space();
  const DistanceField near_side = space.distance_field(s.R(slot - 1), exec);
  const DistanceField far_side = space.distance_field(s.S(slot + 1), exec);
  std::vector<double> values(space.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (space.domain().test(i)) values[i] = near_side.world(i) - far_side.world(i);
  return values;
}

// Across every neighbouring pair with one cell strictly inside R_i and the other
// strictly inside S_i, keep the cell whose `level` value is nearer zero, the R_i side
// on a tie.
RegionMask interface_cells(const GradationState& s, int slot, const std::vector<double>& level) {
  const Space& space = s.space();
  const GridGeometry& g = space.geometry();
  RegionMask lower = s.R(slot);
  lower.subtract(s.S(slot));
  RegionMask upper = s.S(slot);
  upper.subtract(s.R(slot));
  RegionMask out(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!space.domain().test(i)) continue;
    const int x = g.col(i), y = g.row(i);
    for (const auto& [nx, ny] : {std::pair{x + 1, y}, std::pair{x, y + 1}}) {
      if (!g.contains(nx, ny)) continue;
      const std::size_t j = g.index(nx, ny);
      if (!space.domain().test(j)) continue;
      if (!((lower.test(i) && upper.test(j)) || (upper.test(i) && lower.test(j)))) continue;
      const double ai = std::abs(level[i]), aj = std::abs(level[j]);
      if (ai < aj || (ai == aj && lower.test(i)))
        out.set(i);
      else
        out.set(j);
    }
  }
  return out;
}

std::vector<double> difference(const DistanceField& a, const DistanceField& b, const RegionMask& domain) {
  std::vector<double> values(a.values.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (domain.test(i)) values[i] = a.world(i) - b.world(i);
  return values;
}

}  // namespace

// Grid slots are rasterized by refinement. The first pass picks interface cells by
// the level of the state itself. Later passes sweep the slots in order and re-pick
// slot i by dist(C_{i-1}) - dist(C_{i+1}) over the current masks, so each slot sees
// its neighbours' latest cells. Stops after a sweep that changes nothing.
std::vector<RegionMask> sector_masks(const GradationState& s, const Exec& exec) {
  std::vector<RegionMask> ties = tie_masks(s);
  const Space& space = s.space();
  if (!space.is_grid()) return ties;
  const std::size_t slots = ties.size();
  std::vector<RegionMask> masks = ties;
  parallel_for(1, slots + 1, exec, [&](std::size_t i) {
    masks[i - 1] |= interface_cells(s, static_cast<int>(i), slot_level(s, static_cast<int>(i), Exec{}));
  });
  // fields[j] = dist(C_j) with C_0 = P and C_k = Q
  std::vector<DistanceField> fields(slots + 2);
  parallel_for(0, slots + 2, exec, [&](std::size_t j) {
    const RegionMask& c = j == 0 ? s.P() : j == slots + 1 ? s.Q() : masks[j - 1];
    fields[j] = space.distance_field(c);
  });
  for (int pass = 0; pass < kRefinePasses; ++pass) {
    bool changed = false;
    for (std::size_t i = 1; i <= slots; ++i) {
      RegionMask next = ties[i - 1] | interface_cells(s, static_cast<int>(i),
                                                       difference(fields[i - 1], fields[i + 1], space.domain()));
      if (next == masks[i - 1]) continue;
      changed = true;
      masks[i - 1] = std::move(next);
      fields[i] = space.distance_field(masks[i - 1], exec);
    }
    if (!changed) break;
  }
  return masks;
}

SectorSet extract_sectors(const GradationState& s, bool trace, const Exec& exec) {
  const GradationCheck check = is_gradation(s, exec);
  if (!check.ok) throw Error(ErrorCode::NotAGradation, "state is not a fixed point");
  SectorSet out;
  out.k = s.k();
  out.masks = sector_masks(s, exec);
  out.ties = tie_masks(s);
  for (int i = 1; i < s.k(); ++i)
    if (out.C(i).empty()) throw Error(ErrorCode::EmptySectorSlot, "C_" + std::to_string(i) + " is empty");
  out.curves.resize(out.masks.size());
  if (trace && s.space().is_grid())
    parallel_for(1, static_cast<std::size_t>(s.k()), exec, [&](std::size_t i) {
      out.curves[i - 1] = trace_boundary(s, static_cast<int>(i));
    });
  return out;
}

bool has_interior_cell(const GridGeometry& g, const RegionMask& mask) {
  bool found = false;
  mask.for_each([&](std::size_t i) {
    if (found) return;
    const int x = g.col(i), y = g.row(i);
    if (x == 0 || y == 0 || x == g.width - 1 || y == g.height - 1) return;
    if (mask.test(g.index(x - 1, y)) && mask.test(g.index(x + 1, y)) && mask.test(g.index(x, y - 1)) &&
        mask.test(g.index(x, y + 1)))
      found = true;
  });
  return found;
}

std::vector<Polyline> trace_boundary(const GradationState& s, int slot, const Exec& exec) {
  if (slot < 1 || slot >= s.k()) throw Error(ErrorCode::InvalidState, "slot out of range: " + std::to_string(slot));
  const Space& space = s.space();
  if (!space.is_grid()) return {};
  const GridGeometry& g = space.geometry();
  const std::vector<double> values = slot_level(s, slot, exec);

  std::vector<Polyline> lines = trace_zero_level(g, values, space.domain(), false);
  if (has_interior_cell(g, s.R(slot) & s.S(slot))) {
    std::vector<Polyline> other = trace_zero_level(g, values, space.domain(), true);
    lines.insert(lines.end(), std::make_move_iterator(other.begin()), std::make_move_iterator(other.end()));
  }
  return lines;
}

double directed_hausdorff(const std::vector<Polyline>& a, const std::vector<Polyline>& b, double step) {
  bool a_empty = true, b_empty = true;
  for (const Polyline& l : a) a_empty = a_empty && l.empty();
  for (const Polyline& l : b) b_empty = b_empty && l.empty();
  if (a_empty) return 0.0;
  if (b_empty) return std::numeric_limits<double>::infinity();

  auto nearest = [&](Point2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (const Polyline& l : b) {
      if (l.size() == 1) best = std::min(best, norm(p - l[0]));
      for (std::size_t j = 1; j < l.size(); ++j) best = std::min(best, distance_to_segment(p, l[j - 1], l[j]));
    }
    return best;
  };
  double worst = 0.0;
  for (const Polyline& l : a) {
    if (l.size() == 1) worst = std::max(worst, nearest(l[0]));
    for (std::size_t j = 1; j < l.size(); ++j) {
      const Point2 p0 = l[j - 1], p1 = l[j];
      const int pieces = std::max(1, static_cast<int>(std::ceil(norm(p1 - p0) / step)));
      for (int t = 0; t <= pieces; ++t) worst = std::max(worst, nearest(p0 + (static_cast<double>(t) / pieces) * (p1 - p0)));
    }
  }
  return worst;
}

GapReport gap_metrics(const GradationState& lower, const SectorSet& lower_sectors, const GradationState& upper,
                      const SectorSet& upper_sectors) {
  if (!lower.compatible_with(upper) || lower_sectors.k != lower.k() || upper_sectors.k != upper.k())
    throw Error(ErrorCode::IncompatibleScenes, "gap metrics need two results of the same scene");
  const double step = lower.space().is_grid() ? 0.5 * lower.space().step() : 1.0;
  GapReport report;
  for (int i = 1; i < lower.k(); ++i) {
    SlotGap gap;
    const auto& lc = lower_sectors.curves.at(static_cast<std::size_t>(i - 1));
    const auto& uc = upper_sectors.curves.at(static_cast<std::size_t>(i - 1));
    gap.directed_lower_upper = directed_hausdorff(lc, uc, step);
    gap.directed_upper_lower = directed_hausdorff(uc, lc, step);
    gap.hausdorff = std::max(gap.directed_lower_upper, gap.directed_upper_lower);
    gap.symdiff_R = (lower.R(i) ^ upper.R(i)).count();
    gap.symdiff_S = (lower.S(i) ^ upper.S(i)).count();
    gap.symdiff_C = (lower_sectors.C(i) ^ upper_sectors.C(i)).count();
    report.max_hausdorff = std::max(report.max_hausdorff, gap.hausdorff);
    report.max_symdiff_R = std::max(report.max_symdiff_R, gap.symdiff_R);
    report.slots.push_back(gap);
  }
  return report;
}

}  // namespace ksector
