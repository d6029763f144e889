#pragma once

#include "ksector/geometry.hpp"
#include "ksector/region_mask.hpp"

namespace ksector {

/// Cells of `mask` with a neighbour in `domain` outside `mask`.
/// `connectivity` is 4 or 8.
RegionMask inner_boundary(const GridGeometry& g, const RegionMask& mask, const RegionMask& domain,
                          int connectivity = 4);

/// `mask` grown by one 8-neighbour step, clipped to `domain`.
RegionMask dilate(const GridGeometry& g, const RegionMask& mask, const RegionMask& domain);

}  // namespace ksector
