#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "ksector/error.hpp"
#include "ksector/metric.hpp"
#include "oracles.hpp"

namespace ksector {
namespace {

using testing::grid_space;
using testing::line_space;

TEST(DistanceField, CornerOfFiveByFiveIsEightSquaredCells) {
  const SpacePtr space = grid_space(5, 5);
  const DistanceField f = space->distance_field(testing::cells(*space, {{2, 2}}));
  EXPECT_EQ(f.encoding, DistanceEncoding::SquaredCells);
  EXPECT_EQ(f.values[space->geometry().index(0, 0)], 8);
  EXPECT_EQ(f.values[space->geometry().index(4, 4)], 8);
  EXPECT_DOUBLE_EQ(f.world(0), std::sqrt(8.0));
}

TEST(DistanceField, FullSourceGivesZeroEverywhere) {
  for (MetricKind m : {MetricKind{L2Metric{}}, MetricKind{L1Metric{}}, MetricKind{LinfMetric{}}}) {
    const SpacePtr space = grid_space(7, 4, m);
    const DistanceField f = space->distance_field(space->full());
    for (auto v : f.values) EXPECT_EQ(v, 0);
  }
}

TEST(DistanceField, ExplicitThreePointsRowMinimum) {
  const SpacePtr space = line_space({-1, 0, 1});
  const DistanceField f = space->distance_field(testing::points(*space, {2}));
  ASSERT_EQ(f.size(), 3u);
  EXPECT_DOUBLE_EQ(f.world(0), 2.0);
  EXPECT_DOUBLE_EQ(f.world(1), 1.0);
  EXPECT_DOUBLE_EQ(f.world(2), 0.0);
}

TEST(DistanceField, EmptySourceAndSizeMismatchAreErrors) {
  const SpacePtr space = grid_space(4, 4);
  try {
    space->distance_field(RegionMask(space->size()));
    FAIL() << "expected EmptySource";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySource);
  }
  try {
    space->distance_field(RegionMask(3, true));
    FAIL() << "expected DimensionMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(DistanceField, SampledCellsMatchBruteForceOnNonSquareGrid) {
  std::mt19937 rng(7);
  const GridGeometry g{200, 150, 1.0, {}};
  const RegionMask src = testing::random_mask(g.cell_count(), 0.002, rng);
  const auto l2 = squared_edt(g, src);
  const auto l1 = l1_distance(g, src);
  const auto linf = linf_distance(g, src);
  std::uniform_int_distribution<std::size_t> pick(0, g.cell_count() - 1);
  const std::vector<std::size_t> sources = src.indices();
  for (int t = 0; t < 1000; ++t) {
    const std::size_t c = pick(rng);
    std::int64_t b2 = INT64_MAX, b1 = INT64_MAX, binf = INT64_MAX;
    for (std::size_t s : sources) {
      const std::int64_t dx = std::abs(g.col(c) - g.col(s)), dy = std::abs(g.row(c) - g.row(s));
      b2 = std::min(b2, dx * dx + dy * dy);
      b1 = std::min(b1, dx + dy);
      binf = std::min(binf, std::max(dx, dy));
    }
    ASSERT_EQ(l2[c], b2) << "cell " << c;
    ASSERT_EQ(l1[c], b1) << "cell " << c;
    ASSERT_EQ(linf[c], binf) << "cell " << c;
  }
}

TEST(DistanceField, LargerSourceNeverIncreasesDistance) {
  std::mt19937 rng(11);
  for (MetricKind m : {MetricKind{L2Metric{}}, MetricKind{L1Metric{}}, MetricKind{LinfMetric{}}}) {
    const SpacePtr space = grid_space(48, 40, m);
    for (int t = 0; t < 10; ++t) {
      const RegionMask a = testing::random_mask(space->size(), 0.01, rng);
      const RegionMask b = a | testing::random_mask(space->size(), 0.01, rng);
      const DistanceField fa = space->distance_field(a), fb = space->distance_field(b);
      for (std::size_t i = 0; i < space->size(); ++i) ASSERT_LE(fb.values[i], fa.values[i]);
    }
  }
}

TEST(DistanceField, SinglePointFieldHasTheGridSymmetries) {
  for (MetricKind m : {MetricKind{L2Metric{}}, MetricKind{L1Metric{}}, MetricKind{LinfMetric{}}}) {
    const SpacePtr space = grid_space(33, 33, m);
    const GridGeometry& g = space->geometry();
    const DistanceField f = space->distance_field(testing::cells(*space, {{16, 16}}));
    for (int y = 0; y < 33; ++y)
      for (int x = 0; x < 33; ++x) {
        const auto v = f.values[g.index(x, y)];
        ASSERT_EQ(v, f.values[g.index(32 - x, y)]);
        ASSERT_EQ(v, f.values[g.index(x, 32 - y)]);
        ASSERT_EQ(v, f.values[g.index(y, x)]);
      }
  }
}

TEST(DistanceField, AdjacentCellsDifferByAtMostOneStep) {
  std::mt19937 rng(3);
  RegionMask wall(60 * 50);
  for (int y = 5; y < 45; ++y) wall.set(static_cast<std::size_t>(y * 60 + 30));
  const std::vector<std::pair<MetricKind, double>> cases = {
      {L2Metric{}, 1.0}, {L1Metric{}, 1.0}, {LinfMetric{}, 1.0}, {GeodesicGridMetric{wall, 8}, 1.0}};
  for (const auto& [m, bound] : cases) {
    const SpacePtr space = grid_space(60, 50, m);
    const GridGeometry& g = space->geometry();
    const RegionMask src = testing::random_mask(space->size(), 0.003, rng) & space->domain();
    if (src.empty()) continue;
    const DistanceField f = space->distance_field(src);
    for (std::size_t i = 0; i < space->size(); ++i) {
      if (!space->domain().test(i) || g.col(i) + 1 >= g.width) continue;
      const std::size_t j = i + 1;
      if (!space->domain().test(j)) continue;
      ASSERT_LE(std::abs(f.world(i) - f.world(j)), bound + 1e-9) << metric_name(m) << " cell " << i;
    }
  }
}

TEST(GeodesicDistance, MatchesDoublePrecisionDijkstra) {
  const GridGeometry g{40, 30, 1.0, {}};
  RegionMask obstacles(g.cell_count());
  for (int y = 0; y < 24; ++y) obstacles.set(g.index(20, y));
  for (int conn : {4, 8}) {
    const SpacePtr space = grid_space(40, 30, GeodesicGridMetric{obstacles, conn});
    const RegionMask src = testing::cells(*space, {{3, 3}, {35, 5}});
    const DistanceField f = space->distance_field(src);
    const auto ref = oracle::brute_geodesic(g, space->domain(), src, conn);
    for (std::size_t i = 0; i < g.cell_count(); ++i) {
      if (!space->domain().test(i)) continue;
      ASSERT_NEAR(f.world(i), ref[i], 1e-3) << "conn " << conn << " cell " << i;
    }
  }
}

TEST(ValidateMetric, RealLineRestrictionIsAMetric) {
  EXPECT_TRUE(validate_metric(FiniteMetricSpace::on_line({-1, 0, 1})).empty());
}

TEST(ValidateMetric, ReportsTheBrokenTriangle) {
  const FiniteMetricSpace m(3, {0, 1, 3, 1, 0, 1, 3, 1, 0});
  const auto v = validate_metric(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, MetricViolation::Kind::Triangle);
  EXPECT_EQ(v[0].i, 0u);
  EXPECT_EQ(v[0].j, 2u);
  EXPECT_EQ(v[0].via, 1u);
}

TEST(ValidateMetric, ReportsAsymmetryDiagonalAndPositivity) {
  const FiniteMetricSpace m(3, {1, 2, 2, 1, 0, 0, 2, 0, 0});
  bool asym = false, diag = false, pos = false;
  for (const auto& v : validate_metric(m)) {
    asym |= v.kind == MetricViolation::Kind::Asymmetric;
    diag |= v.kind == MetricViolation::Kind::NonzeroDiagonal;
    pos |= v.kind == MetricViolation::Kind::NonPositive;
    EXPECT_FALSE(describe(v).empty());
  }
  EXPECT_TRUE(asym && diag && pos);
}

TEST(ValidateMetric, PiecewiseProfileOnTheEightPointSetIsAMetric) {
  const auto f = [](double r) { return r <= 1 ? r : r <= 2 ? 1.0 : r / 2; };
  const FiniteMetricSpace m = FiniteMetricSpace::on_line({-2, -1, 0, 0.5, 1, 1.5, 2, 3}, f);
  EXPECT_TRUE(validate_metric(m).empty());
}

TEST(ExplicitSpace, RejectsANonMetric) {
  try {
    Space::finite(FiniteMetricSpace(3, {0, 1, 3, 1, 0, 1, 3, 1, 0}));
    FAIL() << "expected InvalidMetric";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidMetric);
  }
}

TEST(Reachability, NoObstaclesIsOneComponent) {
  const GridGeometry g{12, 9, 1.0, {}};
  const ComponentLabels c = geodesic_reachability(g, RegionMask(g.cell_count()));
  EXPECT_EQ(c.count, 1);
}

TEST(Reachability, FullWallSplitsTheGrid) {
  const GridGeometry g{12, 9, 1.0, {}};
  RegionMask wall(g.cell_count());
  for (int y = 0; y < 9; ++y) wall.set(g.index(5, y));
  for (int conn : {4, 8}) {
    const ComponentLabels c = geodesic_reachability(g, wall, conn);
    EXPECT_EQ(c.count, 2);
    EXPECT_EQ(c.label[g.index(5, 3)], -1);
    EXPECT_NE(c.label[g.index(0, 0)], c.label[g.index(11, 0)]);
  }
}

TEST(Reachability, CorridorWithAGapIsOneComponent) {
  const GridGeometry g{12, 9, 1.0, {}};
  RegionMask wall(g.cell_count());
  for (int y = 0; y < 9; ++y)
    if (y != 4) wall.set(g.index(5, y));
  const ComponentLabels c = geodesic_reachability(g, wall, 4);
  EXPECT_EQ(c.count, 1);
  EXPECT_EQ(c.label[g.index(0, 0)], c.label[g.index(11, 8)]);
}

TEST(Reachability, DiagonalGapConnectsOnlyUnderEightNeighbours) {
  const GridGeometry g{2, 2, 1.0, {}};
  const RegionMask blocked = RegionMask::from_indices(4, {g.index(1, 0), g.index(0, 1)});
  EXPECT_EQ(geodesic_reachability(g, blocked, 4).count, 2);
  EXPECT_EQ(geodesic_reachability(g, blocked, 8).count, 1);
}

}  // namespace
}  // namespace ksector
