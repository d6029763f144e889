#include "ksector/finite_metric.hpp"

#include <algorithm>
#include <cmath>

#include "ksector/error.hpp"

namespace ksector {

FiniteMetricSpace::FiniteMetricSpace(std::size_t n, std::vector<double> matrix)
    : n_(n), matrix_(std::move(matrix)) {
  if (matrix_.size() != n * n)
    throw Error(ErrorCode::DimensionMismatch, "distance matrix must have " + std::to_string(n * n) +
                                                  " entries, got " + std::to_string(matrix_.size()));
}

FiniteMetricSpace FiniteMetricSpace::on_line(const std::vector<double>& coords) {
  return on_line(coords, [](double r) { return r; });
}

void FiniteMetricSpace::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != n_)
    throw Error(ErrorCode::DimensionMismatch, "label count does not match point count");
  labels_ = std::move(labels);
}

void FiniteMetricSpace::set_coords(std::vector<Point2> coords) {
  if (coords.size() != n_) throw Error(ErrorCode::DimensionMismatch, "coordinate count does not match point count");
  coords_ = std::move(coords);
}

void FiniteMetricSpace::set_coords_1d(const std::vector<double>& xs) {
  std::vector<Point2> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back({x, 0.0});
  set_coords(std::move(pts));
}

FiniteMetricSpace FiniteMetricSpace::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != n_) throw Error(ErrorCode::DimensionMismatch, "permutation size does not match point count");
  std::vector<double> m(n_ * n_);
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b) m[a * n_ + b] = (*this)(perm[a], perm[b]);
  FiniteMetricSpace out(n_, std::move(m));
  if (!labels_.empty()) {
    std::vector<std::string> l(n_);
    for (std::size_t a = 0; a < n_; ++a) l[a] = labels_[perm[a]];
    out.labels_ = std::move(l);
  }
  if (coords_) {
    std::vector<Point2> c(n_);
    for (std::size_t a = 0; a < n_; ++a) c[a] = (*coords_)[perm[a]];
    out.coords_ = std::move(c);
  }
  return out;
}

std::string describe(const MetricViolation& v) {
  switch (v.kind) {
    case MetricViolation::Kind::Asymmetric:
      return "asymmetric(" + std::to_string(v.i) + "," + std::to_string(v.j) + ")";
    case MetricViolation::Kind::NonzeroDiagonal:
      return "nonzero_diagonal(" + std::to_string(v.i) + ")";
    case MetricViolation::Kind::NonPositive:
      return "non_positive(" + std::to_string(v.i) + "," + std::to_string(v.j) + ")";
    case MetricViolation::Kind::Triangle:
      return "triangle(" + std::to_string(v.i) + "," + std::to_string(v.via) + "," + std::to_string(v.j) + ")";
  }
  return "unknown";
}

std::vector<MetricViolation> validate_metric(const FiniteMetricSpace& m) {
  using Kind = MetricViolation::Kind;
  const std::size_t n = m.size();
  double largest = 0.0;
  for (double d : m.matrix())
    if (std::isfinite(d)) largest = std::max(largest, std::abs(d));
  const double slack = 1e-12 * largest;

  std::vector<MetricViolation> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (m(i, i) != 0.0) out.push_back({Kind::NonzeroDiagonal, i, i, 0});
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(std::abs(m(i, j) - m(j, i)) <= slack)) out.push_back({Kind::Asymmetric, i, j, 0});
      if (!(m(i, j) > 0.0) || !(m(j, i) > 0.0) || !std::isfinite(m(i, j)))
        out.push_back({Kind::NonPositive, i, j, 0});
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t via = 0; via < n; ++via) {
        if (via == i || via == j) continue;
        if (m(i, j) > m(i, via) + m(via, j) + slack) out.push_back({Kind::Triangle, i, j, via});
      }
  return out;
}

}  // namespace ksector
