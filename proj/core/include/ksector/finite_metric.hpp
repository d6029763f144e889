#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ksector/geometry.hpp"

namespace ksector {

/// An explicit metric on n labelled points, given by its full distance matrix.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  /// `matrix` is row-major n x n. Invariants are not enforced here; see validate_metric.
  FiniteMetricSpace(std::size_t n, std::vector<double> matrix);

  /// Points on the real line with dist(x, y) = |x - y|.
  static FiniteMetricSpace on_line(const std::vector<double>& coords);
  /// Points on the real line with dist(x, y) = profile(|x - y|).
  template <typename Profile>
  static FiniteMetricSpace on_line(const std::vector<double>& coords, Profile&& profile) {
    const std::size_t n = coords.size();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m[i * n + j] = i == j ? 0.0 : profile(coords[i] > coords[j] ? coords[i] - coords[j] : coords[j] - coords[i]);
    FiniteMetricSpace s(n, std::move(m));
    s.set_coords_1d(coords);
    return s;
  }

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return matrix_[i * n_ + j]; }
  const std::vector<double>& matrix() const noexcept { return matrix_; }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  void set_labels(std::vector<std::string> labels);
  const std::optional<std::vector<Point2>>& coords() const noexcept { return coords_; }
  void set_coords(std::vector<Point2> coords);
  void set_coords_1d(const std::vector<double>& xs);

  /// Same metric with points reordered: new point j is old point perm[j].
  FiniteMetricSpace permuted(const std::vector<std::size_t>& perm) const;

  bool operator==(const FiniteMetricSpace&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> matrix_;
  std::vector<std::string> labels_;
  std::optional<std::vector<Point2>> coords_;
};

struct MetricViolation {
  enum class Kind { Asymmetric, NonzeroDiagonal, NonPositive, Triangle };
  Kind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t via = 0;  // middle point of a triangle violation d(i,j) > d(i,via) + d(via,j)

  bool operator==(const MetricViolation&) const = default;
};

std::string describe(const MetricViolation& v);

/// Empty iff the matrix is a metric. Comparisons use a relative slack of 1e-12
/// of the largest entry so that decimal inputs are not rejected by rounding.
std::vector<MetricViolation> validate_metric(const FiniteMetricSpace& m);

}  // namespace ksector
