#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace ksector {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  bool operator==(const Point2&) const = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }

/// Euclidean distance from `p` to the closed segment [a, b].
double distance_to_segment(Point2 p, Point2 a, Point2 b);

using Polyline = std::vector<Point2>;

/// Cell-centered raster. Cell (x, y) has its center at origin + spacing * (x, y);
/// linear index is y * width + x.
struct GridGeometry {
  int width = 1;
  int height = 1;
  double spacing = 1.0;
  Point2 origin{};

  std::size_t cell_count() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
  }
  int col(std::size_t i) const noexcept { return static_cast<int>(i % static_cast<std::size_t>(width)); }
  int row(std::size_t i) const noexcept { return static_cast<int>(i / static_cast<std::size_t>(width)); }
  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width && y < height; }
  Point2 center(int x, int y) const noexcept { return {origin.x + spacing * x, origin.y + spacing * y}; }
  Point2 center(std::size_t i) const noexcept { return center(col(i), row(i)); }

  /// Throws InvalidGeometry unless width, height >= 1 and spacing > 0.
  void validate() const;
  bool operator==(const GridGeometry&) const = default;
};

}  // namespace ksector
