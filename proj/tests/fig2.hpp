#pragma once

// The example fat graph with vertices A..I (ids 0..8) and half-edges 1..22.
// Half-edge 2k-1 and 2k are the two orientations of one edge.

#include <algorithm>
#include <array>
#include <initializer_list>
#include <vector>

#include "mcov/geometry.hpp"
#include "mcov/topology.hpp"

namespace fig2 {

enum : mcov::SensorId { A, B, C, D, E, F, G, H, I };

inline std::vector<mcov::Point2> positions() {
  return {{0.0, 1.0},   {-0.62, 0.78}, {-0.97, -0.22}, {-0.43, -0.9}, {0.43, -0.9},
          {0.97, -0.22}, {0.78, 0.62},  {0.0, 0.1},     {0.0, -0.3}};
}

inline mcov::topology::Dart dart(int label) {
  static constexpr std::array<std::array<mcov::SensorId, 2>, 11> kOdd{{{A, B},
                                                                        {B, C},
                                                                        {C, D},
                                                                        {D, E},
                                                                        {E, F},
                                                                        {F, G},
                                                                        {G, A},
                                                                        {E, C},
                                                                        {F, H},
                                                                        {H, B},
                                                                        {H, I}}};
  const auto& e = kOdd.at((label - 1) / 2);
  return label % 2 == 1 ? mcov::topology::Dart{e[0], e[1]} : mcov::topology::Dart{e[1], e[0]};
}

inline mcov::topology::BoundaryCycle cycle(std::initializer_list<int> labels) {
  std::vector<mcov::topology::Dart> darts;
  for (int l : labels) darts.push_back(dart(l));
  return mcov::topology::canonicalize(darts);
}

inline mcov::geometry::AlphaComplex complex() {
  mcov::geometry::AlphaComplex c;
  for (mcov::SensorId v = A; v <= I; ++v) c.vertices.push_back(v);
  for (int label = 1; label <= 21; label += 2) {
    const auto d = dart(label);
    c.edges.push_back(mcov::geometry::make_edge(d.tail, d.head));
  }
  std::sort(c.edges.begin(), c.edges.end());
  return c;
}

}  // namespace fig2
