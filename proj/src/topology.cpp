#include "mcov/topology.hpp"

#include <algorithm>
#include <string>

namespace mcov::topology {

std::size_t FatGraph::index_of(Dart d) const {
  auto it = std::lower_bound(darts_.begin(), darts_.end(), d);
  if (it == darts_.end() || *it != d) return darts_.size();
  return static_cast<std::size_t>(it - darts_.begin());
}

FatGraph build_fat_graph(std::span<const geometry::Edge> edges, const geometry::RotationData& rotation) {
  FatGraph fat;
  fat.darts_.reserve(2 * edges.size());
  for (const auto& e : edges) {
    if (e[0] == e[1]) throw RotationMismatch("edge is a loop at " + std::to_string(e[0]));
    fat.darts_.push_back({e[0], e[1]});
    fat.darts_.push_back({e[1], e[0]});
  }
  std::sort(fat.darts_.begin(), fat.darts_.end());
  if (std::adjacent_find(fat.darts_.begin(), fat.darts_.end()) != fat.darts_.end()) {
    throw RotationMismatch("duplicate edge");
  }

  const std::size_t n = fat.darts_.size();
  fat.alpha_.resize(n);
  fat.sigma_.assign(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    fat.alpha_[i] = fat.index_of({fat.darts_[i].head, fat.darts_[i].tail});
  }

  // Darts leaving v occupy a contiguous block of the sorted dart list.
  std::size_t covered = 0;
  for (SensorId v = 0; v < rotation.size(); ++v) {
    const auto& order = rotation[v];
    const auto lo = std::lower_bound(fat.darts_.begin(), fat.darts_.end(), Dart{v, 0});
    const auto hi = std::lower_bound(fat.darts_.begin(), fat.darts_.end(), Dart{v + 1, 0});
    if (static_cast<std::size_t>(hi - lo) != order.size()) {
      throw RotationMismatch("rotation at vertex " + std::to_string(v) + " lists " +
                             std::to_string(order.size()) + " neighbours, edges give " +
                             std::to_string(hi - lo));
    }
    if (order.empty()) {
      fat.isolated_.push_back(v);
      continue;
    }
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::size_t from = fat.index_of({v, order[k]});
      const std::size_t to = fat.index_of({v, order[(k + 1) % order.size()]});
      if (from == n || to == n || fat.sigma_[from] != n) {
        throw RotationMismatch("rotation at vertex " + std::to_string(v) +
                               " does not match its incident edges");
      }
      fat.sigma_[from] = to;
    }
    covered += order.size();
  }
  if (covered != n) throw RotationMismatch("edges reference vertices without rotation data");
  return fat;
}

std::vector<SensorId> BoundaryCycle::vertices() const {
  std::vector<SensorId> vs;
  vs.reserve(darts.size());
  for (const Dart& d : darts) vs.push_back(d.tail);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

BoundaryCycle canonicalize(std::vector<Dart> raw) {
  auto smallest = std::min_element(raw.begin(), raw.end());
  std::rotate(raw.begin(), smallest, raw.end());
  return BoundaryCycle{std::move(raw)};
}

std::vector<BoundaryCycle> boundary_cycles(const FatGraph& fat) {
  const std::size_t n = fat.darts().size();
  std::vector<BoundaryCycle> cycles;
  std::vector<char> seen(n, 0);
  // Walking from the smallest unvisited dart yields canonical orbits directly.
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    BoundaryCycle cycle;
    std::size_t d = start;
    do {
      seen[d] = 1;
      cycle.darts.push_back(fat.darts()[d]);
      d = fat.phi(d);
    } while (d != start);
    cycles.push_back(std::move(cycle));
  }
  for (SensorId v : fat.isolated_vertices()) cycles.push_back(BoundaryCycle{{Dart{v, v}}});
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

double signed_area(const BoundaryCycle& cycle, std::span<const Point2> positions) {
  double twice = 0.0;
  for (const Dart& d : cycle.darts) twice += cross(positions[d.tail], positions[d.head]);
  return 0.5 * twice;
}

}  // namespace mcov::topology
