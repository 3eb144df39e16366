#pragma once

#include <compare>
#include <span>
#include <vector>

#include "mcov/geometry.hpp"

namespace mcov::topology {

/// Oriented half-edge tail -> head.
struct Dart {
  SensorId tail = 0;
  SensorId head = 0;

  friend constexpr auto operator<=>(const Dart&, const Dart&) = default;
};

/// A graph with a cyclic order of the darts leaving each vertex.
///
/// Darts are stored sorted by (tail, head); alpha reverses a dart and sigma
/// returns the next dart counter-clockwise about its tail.
class FatGraph {
 public:
  FatGraph() = default;

  const std::vector<Dart>& darts() const { return darts_; }
  std::size_t alpha(std::size_t dart) const { return alpha_[dart]; }
  std::size_t sigma(std::size_t dart) const { return sigma_[dart]; }
  /// phi = sigma . alpha, whose orbits are the boundary cycles.
  std::size_t phi(std::size_t dart) const { return sigma_[alpha_[dart]]; }

  /// Index of `d`, or darts().size() if absent.
  std::size_t index_of(Dart d) const;
  Dart alpha(Dart d) const { return darts_[alpha(index_of(d))]; }
  Dart sigma(Dart d) const { return darts_[sigma(index_of(d))]; }

  /// Vertices that carry a rotation entry but no darts.
  const std::vector<SensorId>& isolated_vertices() const { return isolated_; }

 private:
  friend FatGraph build_fat_graph(std::span<const geometry::Edge>, const geometry::RotationData&);

  std::vector<Dart> darts_;
  std::vector<std::size_t> alpha_;
  std::vector<std::size_t> sigma_;
  std::vector<SensorId> isolated_;
};

/// Builds the fat graph of `edges`, with sigma taken from the counter-clockwise
/// neighbour order in `rotation`. The vertex set is every index of `rotation`.
/// Throws RotationMismatch when rotation adjacency and edge adjacency differ.
FatGraph build_fat_graph(std::span<const geometry::Edge> edges, const geometry::RotationData& rotation);

/// An orbit of phi, rotated so that its smallest dart comes first.
///
/// An isolated vertex v has one degenerate boundary cycle, stored as the
/// single loop dart (v, v); this keeps |cycles| = E - V + 2 for every
/// connected graph, including a lone vertex.
struct BoundaryCycle {
  std::vector<Dart> darts;

  friend auto operator<=>(const BoundaryCycle&, const BoundaryCycle&) = default;
  friend bool operator==(const BoundaryCycle&, const BoundaryCycle&) = default;

  bool is_vertex_cycle() const { return darts.size() == 1 && darts[0].tail == darts[0].head; }
  /// Distinct vertices visited, ascending.
  std::vector<SensorId> vertices() const;
};

BoundaryCycle canonicalize(std::vector<Dart> raw);

/// Every boundary cycle of `fat`, canonical and sorted ascending.
std::vector<BoundaryCycle> boundary_cycles(const FatGraph& fat);

/// Shoelace area of the polygon traced by the cycle. With sigma
/// counter-clockwise, bounded faces come out negative and the face at
/// infinity positive.
double signed_area(const BoundaryCycle& cycle, std::span<const Point2> positions);

}  // namespace mcov::topology
