#pragma once

#include <cstddef>
#include <vector>

#include "ksector/geometry.hpp"
#include "ksector/lattice.hpp"

namespace ksector {

/// The sector tuple of a gradation, with traced curves.
///
/// On explicit spaces masks[i - 1] = R_i & S_i. On grids exact distance ties are
/// sparse, so masks[i - 1] is a discrete curve: the ties plus one cell of every
/// 4-neighbour pair split between R_i - S_i and S_i - R_i, namely the cell where
/// dist(C_{i-1}) - dist(C_{i+1}) is nearer zero (the R_i side on equality). The
/// choice is refined slot by slot until stable. `ties` keeps R_i & S_i in both cases.
struct SectorSet {
  int k = 0;
  std::vector<RegionMask> masks;               // masks[i - 1] = C_i
  std::vector<RegionMask> ties;                // ties[i - 1] = R_i & S_i
  std::vector<std::vector<Polyline>> curves;   // curves[i - 1]: world-coordinate polylines of C_i

  const RegionMask& C(int i) const { return masks.at(static_cast<std::size_t>(i - 1)); }
};

/// R_i & S_i for every slot, without any precondition; slots may be empty.
std::vector<RegionMask> tie_masks(const GradationState& s);
/// Sector masks as described for SectorSet, without any precondition.
std::vector<RegionMask> sector_masks(const GradationState& s, const Exec& exec = {});

/// Requires is_gradation(s) (NotAGradation) and every slot nonempty
/// (EmptySectorSlot, message names the slot). Curves are traced on grids.
SectorSet extract_sectors(const GradationState& s, bool trace = true, const Exec& exec = {});

/// True if some cell of `mask` has all four grid neighbours in `mask`.
bool has_interior_cell(const GridGeometry& g, const RegionMask& mask);

/// Zero-level polylines of g(z) = dist(z, R_{i-1}) - dist(z, S_{i+1}) on the lattice
/// of cell centers, by linear interpolation along cell edges. Ambiguous squares are
/// resolved by the average of their four corner values. When C_i has positive area
/// both sides of the tie region are traced. Empty on non-grid spaces.
std::vector<Polyline> trace_boundary(const GradationState& s, int slot, const Exec& exec = {});

/// Zero-level contour of a sampled field. `inside_strict` selects g < 0 (else g <= 0)
/// as the inside classification. Squares touching a point outside `valid` are skipped.
std::vector<Polyline> trace_zero_level(const GridGeometry& g, const std::vector<double>& values,
                                       const RegionMask& valid, bool inside_strict);

struct SlotGap {
  double hausdorff = 0.0;           // world units; +inf if only one side has curves
  double directed_lower_upper = 0.0;
  double directed_upper_lower = 0.0;
  std::size_t symdiff_R = 0;
  std::size_t symdiff_S = 0;
  std::size_t symdiff_C = 0;

  bool operator==(const SlotGap&) const = default;
};

struct GapReport {
  std::vector<SlotGap> slots;  // slots[i - 1]
  double max_hausdorff = 0.0;
  std::size_t max_symdiff_R = 0;

  bool operator==(const GapReport&) const = default;
};

/// Directed Hausdorff distance from curves `a` (sampled every <= `step` length) to the
/// segments of curves `b`. 0 if `a` is empty, +inf if only `b` is empty.
double directed_hausdorff(const std::vector<Polyline>& a, const std::vector<Polyline>& b, double step);

/// Compares two converged gradations of the same scene. Throws IncompatibleScenes.
GapReport gap_metrics(const GradationState& lower, const SectorSet& lower_sectors, const GradationState& upper,
                      const SectorSet& upper_sectors);

}  // namespace ksector
