#pragma once

#include <span>
#include <vector>

#include "mcov/geometry.hpp"

namespace mcov::geometry {

inline constexpr SensorId kNoVertex = static_cast<SensorId>(-1);

struct DelaunayEdge {
  Edge edge;
  /// Apexes of the (up to two) triangles on either side. kNoVertex marks an
  /// apex outside the input set (the triangulation is bounded by a far
  /// enclosing triangle).
  std::array<SensorId, 2> opposite{kNoVertex, kNoVertex};
};

struct DelaunayTriangulation {
  std::vector<Triangle> triangles;   // sorted, canonical
  std::vector<DelaunayEdge> edges;   // sorted by edge
};

/// Bowyer-Watson triangulation. Points must lie within a few units of the
/// origin. Edges whose diametral disk, and triangles whose circumdisk, stay
/// well inside the enclosing triangle are exactly those of the true Delaunay
/// triangulation of `points`.
///
/// Throws DegenerateConfiguration with the offending ids when four input
/// points are cocircular or three collinear within kDegeneracyTolerance.
DelaunayTriangulation delaunay(std::span<const Point2> points);

}  // namespace mcov::geometry
