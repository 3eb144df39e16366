#pragma once

// Hand-made snapshots over four fence sensors at the corners of a square and
// three interior sensors.

#include <algorithm>
#include <vector>

#include "mcov/evasion.hpp"

namespace synthetic {

using mcov::SensorId;
using mcov::geometry::Edge;
using mcov::geometry::Triangle;

enum : SensorId { F0, F1, F2, F3, Sa, Sb, Sc };

inline const std::vector<mcov::Point2> kPositions{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}, {-0.5, 0}, {0.2, 0.1}, {0.0, 0.5}};
inline const std::vector<Edge> kRing{{F0, F1}, {F1, F2}, {F2, F3}, {F0, F3}};

/// The ring plus `extra` edges and `tris` triangles.
inline mcov::evasion::StateSnapshot snap(std::vector<Edge> extra, std::vector<Triangle> tris = {},
                                         mcov::evasion::Mode mode = mcov::evasion::Mode::Connected) {
  mcov::geometry::AlphaComplex c;
  for (SensorId v = 0; v < kPositions.size(); ++v) c.vertices.push_back(v);
  c.edges = kRing;
  for (const auto& e : extra) c.edges.push_back(mcov::geometry::make_edge(e[0], e[1]));
  std::sort(c.edges.begin(), c.edges.end());
  for (auto& t : tris) t = mcov::geometry::make_triangle(t[0], t[1], t[2]);
  std::sort(tris.begin(), tris.end());
  c.triangles = tris;
  c.radius = 1.0;
  return mcov::evasion::make_snapshot(0.0, kPositions, c, mcov::evasion::FenceRange{0, 4}, mode);
}

struct RowCase {
  mcov::evasion::TransitionKind kind;
  mcov::evasion::StateSnapshot prev;
  mcov::evasion::StateSnapshot next;
};

/// One snapshot pair per atomic kind, NoChange included.
inline std::vector<RowCase> row_cases() {
  using mcov::evasion::TransitionKind;
  const auto base = snap({{Sa, F0}, {Sa, F3}});
  const auto split = snap({{Sa, F0}, {Sa, F3}, {Sa, F1}});
  const auto filled = snap({{Sa, F0}, {Sa, F3}}, {{Sa, F0, F3}});
  const auto pair = snap({{Sa, F0}, {Sa, F3}, {Sa, F1}}, {{Sa, F0, F1}});
  const auto diag1 = snap({{F0, F2}}, {{F0, F1, F2}, {F0, F2, F3}});
  const auto diag2 = snap({{F1, F3}}, {{F0, F1, F3}, {F1, F2, F3}});
  const auto pendant = snap({{Sa, F0}});
  const auto loose = snap({});
  return {{TransitionKind::NoChange, base, base},
          {TransitionKind::AddEdge, base, split},
          {TransitionKind::RemoveEdge, split, base},
          {TransitionKind::Add2Simplex, base, filled},
          {TransitionKind::Remove2Simplex, filled, base},
          {TransitionKind::AddPair, base, pair},
          {TransitionKind::RemovePair, pair, base},
          {TransitionKind::DelaunayFlip, diag1, diag2},
          {TransitionKind::Disconnect, pendant, loose},
          {TransitionKind::Reconnect, loose, pendant}};
}

}  // namespace synthetic
