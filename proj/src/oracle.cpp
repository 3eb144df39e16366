#include <algorithm>
#include <cmath>
#include <deque>

#include "mcov/harness.hpp"

namespace mcov::harness {
namespace {

class Grid {
 public:
  Grid(double r, double pitch) : r_(r) {
    if (!(pitch > 0.0) || pitch > r / 10.0 * (1.0 + 1e-12)) {
      throw ResolutionTooCoarse("grid pitch " + std::to_string(pitch) + " exceeds r/10 = " +
                                std::to_string(r / 10.0));
    }
    m_ = static_cast<int>(std::ceil(1.0 / pitch - 1e-9));
    cell_ = 1.0 / m_;
  }

  int size() const { return m_; }
  double cell() const { return cell_; }
  Point2 center(int i, int j) const { return {-0.5 + (i + 0.5) * cell_, -0.5 + (j + 0.5) * cell_}; }
  int index(int i, int j) const { return j * m_ + i; }

  std::vector<char> uncovered(std::span<const Point2> positions, std::span<const char> active) const {
    std::vector<char> open(static_cast<std::size_t>(m_) * m_, 1);
    const double r2 = r_ * r_;
    for (std::size_t s = 0; s < positions.size(); ++s) {
      if (!active[s]) continue;
      const Point2 p = positions[s];
      const int i0 = std::max(0, static_cast<int>(std::floor((p.x - r_ + 0.5) / cell_ - 0.5)));
      const int i1 = std::min(m_ - 1, static_cast<int>(std::ceil((p.x + r_ + 0.5) / cell_ - 0.5)));
      const int j0 = std::max(0, static_cast<int>(std::floor((p.y - r_ + 0.5) / cell_ - 0.5)));
      const int j1 = std::min(m_ - 1, static_cast<int>(std::ceil((p.y + r_ + 0.5) / cell_ - 0.5)));
      for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
          if (norm2(center(i, j) - p) <= r2) open[index(i, j)] = 0;
        }
      }
    }
    return open;
  }

  // Cells reachable now: uncovered, and connected within the uncovered set to
  // a cell equal or 4-adjacent to a previously reachable cell.
  std::vector<char> advance(const std::vector<char>& reach, const std::vector<char>& open) const {
    std::vector<char> next(open.size(), 0);
    std::deque<int> queue;
    for (int j = 0; j < m_; ++j) {
      for (int i = 0; i < m_; ++i) {
        const int k = index(i, j);
        if (!open[k]) continue;
        const bool seeded = reach[k] || (i > 0 && reach[k - 1]) || (i + 1 < m_ && reach[k + 1]) ||
                            (j > 0 && reach[k - m_]) || (j + 1 < m_ && reach[k + m_]);
        if (seeded) {
          next[k] = 1;
          queue.push_back(k);
        }
      }
    }
    flood(next, open, queue);
    return next;
  }

  // 4-connected components of `mask`; returns the largest bounding-box
  // diagonal, cell extent included.
  double max_feature_diameter(const std::vector<char>& mask) const {
    std::vector<char> seen(mask.size(), 0);
    double best = 0.0;
    for (int k = 0; k < static_cast<int>(mask.size()); ++k) {
      if (!mask[k] || seen[k]) continue;
      int imin = m_, imax = -1, jmin = m_, jmax = -1;
      std::deque<int> queue{k};
      seen[k] = 1;
      while (!queue.empty()) {
        const int c = queue.front();
        queue.pop_front();
        const int i = c % m_, j = c / m_;
        imin = std::min(imin, i);
        imax = std::max(imax, i);
        jmin = std::min(jmin, j);
        jmax = std::max(jmax, j);
        for (int nb : neighbours(i, j)) {
          if (nb >= 0 && mask[nb] && !seen[nb]) {
            seen[nb] = 1;
            queue.push_back(nb);
          }
        }
      }
      best = std::max(best, std::hypot((imax - imin + 1) * cell_, (jmax - jmin + 1) * cell_));
    }
    return best;
  }

 private:
  std::array<int, 4> neighbours(int i, int j) const {
    return {i > 0 ? index(i - 1, j) : -1, i + 1 < m_ ? index(i + 1, j) : -1, j > 0 ? index(i, j - 1) : -1,
            j + 1 < m_ ? index(i, j + 1) : -1};
  }

  void flood(std::vector<char>& mark, const std::vector<char>& open, std::deque<int>& queue) const {
    while (!queue.empty()) {
      const int c = queue.front();
      queue.pop_front();
      for (int nb : neighbours(c % m_, c / m_)) {
        if (nb >= 0 && open[nb] && !mark[nb]) {
          mark[nb] = 1;
          queue.push_back(nb);
        }
      }
    }
  }

  double r_;
  int m_ = 0;
  double cell_ = 0.0;
};

bool inside(const std::vector<Point2>& poly, Point2 p) {
  bool in = false;
  for (std::size_t a = 0, b = poly.size() - 1; a < poly.size(); b = a++) {
    const Point2 u = poly[a], v = poly[b];
    if ((u.y > p.y) != (v.y > p.y) && p.x < (v.x - u.x) * (p.y - u.y) / (v.y - u.y) + u.x) in = !in;
  }
  return in;
}

std::vector<Point2> lerp(std::span<const Point2> a, std::span<const Point2> b, double s) {
  std::vector<Point2> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * (b[i] - a[i]);
  return out;
}

// Runs the reachability propagation and hands every sample's open set and
// reachable set, with the previous sample's reachable set, to `visit`.
template <class Visit>
void propagate(const Grid& grid, std::span<const evasion::AcceptedStep> steps, int substeps, Visit visit) {
  std::vector<char> reach;
  for (std::size_t n = 0; n < steps.size(); ++n) {
    if (n == 0) {
      reach = grid.uncovered(steps[0].positions, steps[0].active);
      visit(n, reach, reach, reach);
      continue;
    }
    const std::vector<char> before = reach;
    for (int k = 1; k < substeps; ++k) {
      const auto pos = lerp(steps[n - 1].positions, steps[n].positions, static_cast<double>(k) / substeps);
      reach = grid.advance(reach, grid.uncovered(pos, steps[n].active));
    }
    const auto open = grid.uncovered(steps[n].positions, steps[n].active);
    reach = grid.advance(reach, open);
    visit(n, open, reach, before);
  }
}

}  // namespace

std::vector<bool> brute_force_oracle(std::span<const evasion::AcceptedStep> steps, double r, double pitch,
                                     int substeps) {
  const Grid grid(r, pitch);
  std::vector<bool> out(steps.size());
  propagate(grid, steps, std::max(1, substeps), [&](std::size_t n, const auto&, const std::vector<char>& reach, const auto&) {
    out[n] = std::any_of(reach.begin(), reach.end(), [](char c) { return c != 0; });
  });
  return out;
}

OracleComparison compare_with_oracle(const SimulationResult& result, double r, double pitch, int substeps) {
  const Grid grid(r, pitch);
  OracleComparison cmp;
  cmp.steps = static_cast<int>(result.steps.size());
  bool in_episode = false;
  propagate(grid, result.steps, std::max(1, substeps),
            [&](std::size_t n, const std::vector<char>& open, const std::vector<char>& reach,
                const std::vector<char>& before) {
              const bool oracle = std::any_of(reach.begin(), reach.end(), [](char c) { return c != 0; });
              const auto& step = result.steps[n];
              const bool disagree = oracle != step.evasion;
              const bool onset = disagree && !in_episode;
              in_episode = disagree;
              if (!disagree) return;
              ++cmp.disagreeing_steps;
              cmp.agree = false;
              if (!cmp.first_disagreement) cmp.first_disagreement = n;
              if (!onset) return;
              ++cmp.episodes;

              double diameter = 0.0;
              if (oracle) {
                diameter = grid.max_feature_diameter(reach);
              } else if (n > 0) {
                diameter = grid.max_feature_diameter(before);
              } else {
                std::vector<char> disputed(open.size(), 0);
                for (int j = 0; j < grid.size(); ++j) {
                  for (int i = 0; i < grid.size(); ++i) {
                    const int k = grid.index(i, j);
                    if (!open[k]) continue;
                    const Point2 c = grid.center(i, j);
                    for (const auto& poly : step.open_faces) {
                      if (poly.size() >= 3 && inside(poly, c)) {
                        disputed[k] = 1;
                        break;
                      }
                    }
                  }
                }
                diameter = grid.max_feature_diameter(disputed);
              }
              cmp.feature_diameter = std::max(cmp.feature_diameter, diameter);
              if (diameter >= 3.0 * pitch) cmp.attributable = false;
            });
  return cmp;
}

}  // namespace mcov::harness
