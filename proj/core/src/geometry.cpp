#include "ksector/geometry.hpp"

#include <algorithm>
#include <string>

#include "ksector/error.hpp"

namespace ksector {

double distance_to_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm(p - a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

void GridGeometry::validate() const {
  if (width < 1 || height < 1)
    throw Error(ErrorCode::InvalidGeometry,
                "grid must be at least 1x1, got " + std::to_string(width) + "x" + std::to_string(height));
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw Error(ErrorCode::InvalidGeometry, "spacing must be positive, got " + std::to_string(spacing));
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySource: return "EmptySource";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::InvalidMetric: return "InvalidMetric";
    case ErrorCode::EmptySite: return "EmptySite";
    case ErrorCode::SitesOverlap: return "SitesOverlap";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::IncompatibleStates: return "IncompatibleStates";
    case ErrorCode::NotPreFixpoint: return "NotPreFixpoint";
    case ErrorCode::NotAGradation: return "NotAGradation";
    case ErrorCode::EmptySectorSlot: return "EmptySectorSlot";
    case ErrorCode::IncompatibleScenes: return "IncompatibleScenes";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::SitesOverlapAfterRasterization: return "SitesOverlapAfterRasterization";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace ksector
