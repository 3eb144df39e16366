#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mcov/errors.hpp"

namespace mcov {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
constexpr double norm2(Point2 a) { return dot(a, a); }
inline double norm(Point2 a) { return std::sqrt(norm2(a)); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

namespace geometry {

/// Sensor positions indexed by SensorId. Ids are dense: 0 .. size()-1.
using Positions = std::vector<Point2>;

using Edge = std::array<SensorId, 2>;
using Triangle = std::array<SensorId, 3>;

Edge make_edge(SensorId a, SensorId b);
Triangle make_triangle(SensorId a, SensorId b, SensorId c);

struct Disk {
  Point2 center;
  double radius = 0.0;
};

/// Relative tolerance below which three points count as collinear (and four
/// as cocircular).
inline constexpr double kDegeneracyTolerance = 1e-12;

/// Diametral disk of a segment.
Disk circumdisk(Point2 a, Point2 b);
/// Circumscribed disk of a triangle. Throws DegenerateSimplex when the points
/// are collinear within kDegeneracyTolerance.
Disk circumdisk(Point2 a, Point2 b, Point2 c);

/// Combinatorial snapshot of the covered region. All simplex lists are sorted
/// and hold canonical (ascending) vertex tuples.
struct AlphaComplex {
  std::vector<SensorId> vertices;
  std::vector<Edge> edges;
  std::vector<Triangle> triangles;
  double radius = 0.0;

  bool has_edge(SensorId a, SensorId b) const;
  bool has_triangle(SensorId a, SensorId b, SensorId c) const;

  /// Simplex-set equality; the radius is not compared.
  bool same_simplices(const AlphaComplex& other) const {
    return vertices == other.vertices && edges == other.edges && triangles == other.triangles;
  }
};

/// Alpha complex of `positions` at radius r: the short-and-Gabriel simplices
/// and their faces. A point inside the circumdisk of a short simplex is within
/// 2r of its vertices, so only nearby sensors are examined. Near-cocircular
/// inputs are perturbed by at most 1e-9 r, deterministically from
/// `jitter_seed`, and the construction is retried.
AlphaComplex alpha_complex(std::span<const Point2> positions, double r,
                           std::uint64_t jitter_seed = 0);

/// The same complex read off a full Delaunay triangulation.
AlphaComplex alpha_complex_delaunay(std::span<const Point2> positions, double r,
                                    std::uint64_t jitter_seed = 0);

/// Pairwise distances known only between sensors whose r-balls overlap.
class LocalDistanceTable {
 public:
  explicit LocalDistanceTable(std::size_t n_sensors) : near_(n_sensors) {}

  static LocalDistanceTable from_positions(std::span<const Point2> positions, double r);

  std::size_t size() const { return near_.size(); }

  /// Records Near(a, b) = d. Overwrites an existing entry.
  void set_near(SensorId a, SensorId b, double d);

  /// Distance if the pair is Near, nullopt when Far.
  std::optional<double> near(SensorId a, SensorId b) const;

  /// Near neighbours of `a`, ascending by id.
  const std::vector<std::pair<SensorId, double>>& neighbours(SensorId a) const { return near_.at(a); }

 private:
  std::vector<std::vector<std::pair<SensorId, double>>> near_;
};

/// Builds the alpha complex using only Near distances: each candidate
/// simplex is re-embedded from its edge lengths, and the Gabriel test only
/// looks at sensors within 2r of every vertex.
AlphaComplex alpha_complex_from_local_distances(const LocalDistanceTable& table, double r);

/// Per vertex, the neighbours in counter-clockwise angular order. Indexed by
/// SensorId; an isolated vertex has an empty sequence.
using RotationData = std::vector<std::vector<SensorId>>;

RotationData rotation_data(std::span<const Point2> positions, const AlphaComplex& complex);

/// True if `a` and `b` are the same cyclic sequence up to rotation.
bool same_cyclic_order(std::span<const SensorId> a, std::span<const SensorId> b);

}  // namespace geometry
}  // namespace mcov
