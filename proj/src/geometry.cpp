#include "mcov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mcov/delaunay.hpp"

namespace mcov::geometry {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double unit_from_hash(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

constexpr int kMaxJitterAttempts = 16;

AlphaComplex filter_delaunay(std::span<const Point2> pts, double r) {
  const DelaunayTriangulation dt = delaunay(pts);

  AlphaComplex out;
  out.radius = r;
  out.vertices.resize(pts.size());
  std::iota(out.vertices.begin(), out.vertices.end(), SensorId{0});

  for (const Triangle& t : dt.triangles) {
    const Disk d = circumdisk(pts[t[0]], pts[t[1]], pts[t[2]]);
    if (d.radius <= r) {
      out.triangles.push_back(t);
      out.edges.push_back({t[0], t[1]});
      out.edges.push_back({t[0], t[2]});
      out.edges.push_back({t[1], t[2]});
    }
  }
  for (const DelaunayEdge& e : dt.edges) {
    const Point2 a = pts[e.edge[0]], b = pts[e.edge[1]];
    const double half = 0.5 * distance(a, b);
    if (half > r) continue;
    const Point2 mid = 0.5 * (a + b);
    bool gabriel = true;
    for (SensorId o : e.opposite) {
      if (o != kNoVertex && distance(pts[o], mid) < half) gabriel = false;
    }
    if (gabriel) out.edges.push_back(e.edge);
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

// Sensors within 2r of each sensor, ascending by id, found through a
// bucket grid with cells of side 2r.
class NearLists {
 public:
  NearLists(std::span<const Point2> pts, double r) : offset_(pts.size() + 1, 0) {
    const std::size_t n = pts.size();
    if (n == 0) return;
    double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
    for (const Point2& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    const double reach = 2.0 * r;
    double cell = reach;
    const double span = std::max(xmax - xmin, ymax - ymin);
    if (span / cell > 1024.0) cell = span / 1024.0;
    const int nx = static_cast<int>((xmax - xmin) / cell) + 1;
    const int ny = static_cast<int>((ymax - ymin) / cell) + 1;
    auto cx = [&](double x) { return std::min(nx - 1, static_cast<int>((x - xmin) / cell)); };
    auto cy = [&](double y) { return std::min(ny - 1, static_cast<int>((y - ymin) / cell)); };

    std::vector<int> home(n);
    std::vector<std::uint32_t> start(static_cast<std::size_t>(nx) * ny + 1, 0);
    for (SensorId i = 0; i < n; ++i) {
      home[i] = cy(pts[i].y) * nx + cx(pts[i].x);
      ++start[home[i] + 1];
    }
    for (std::size_t b = 1; b < start.size(); ++b) start[b] += start[b - 1];
    std::vector<SensorId> members(n);
    {
      std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
      for (SensorId i = 0; i < n; ++i) members[fill[home[i]]++] = i;
    }

    const double reach2 = reach * reach;
    ids_.reserve(n * 12);
    for (SensorId i = 0; i < n; ++i) {
      const int bx = home[i] % nx, by = home[i] / nx;
      for (int y = std::max(0, by - 1); y <= std::min(ny - 1, by + 1); ++y) {
        for (int x = std::max(0, bx - 1); x <= std::min(nx - 1, bx + 1); ++x) {
          const int b = y * nx + x;
          for (std::uint32_t k = start[b]; k < start[b + 1]; ++k) {
            const SensorId j = members[k];
            if (j != i && norm2(pts[j] - pts[i]) <= reach2) ids_.push_back(j);
          }
        }
      }
      std::sort(ids_.begin() + offset_[i], ids_.end());
      offset_[i + 1] = ids_.size();
    }
  }

  std::span<const SensorId> operator[](SensorId i) const {
    return {ids_.data() + offset_[i], ids_.data() + offset_[i + 1]};
  }

 private:
  std::vector<std::size_t> offset_;
  std::vector<SensorId> ids_;
};

constexpr double kCocircularTolerance = 1e-12;

AlphaComplex short_gabriel(std::span<const Point2> pts, double r) {
  const NearLists near(pts, r);
  AlphaComplex out;
  out.radius = r;
  out.vertices.resize(pts.size());
  std::iota(out.vertices.begin(), out.vertices.end(), SensorId{0});

  for (SensorId u = 0; u < pts.size(); ++u) {
    for (SensorId v : near[u]) {
      if (v <= u) continue;
      const double half2 = 0.25 * norm2(pts[u] - pts[v]);
      const Point2 mid = 0.5 * (pts[u] + pts[v]);
      bool gabriel = true;
      for (SensorId w : near[u]) {
        if (w == v) continue;
        const double dw2 = norm2(pts[w] - mid);
        if (std::fabs(dw2 - half2) <= 2.0 * kCocircularTolerance * half2) {
          throw DegenerateConfiguration("sensor on a diametral circle", {u, v, w});
        }
        if (dw2 < half2) {
          gabriel = false;
          break;
        }
      }
      if (gabriel) out.edges.push_back({u, v});
    }
  }

  for (SensorId u = 0; u < pts.size(); ++u) {
    const auto nu = near[u];
    for (std::size_t i = 0; i < nu.size(); ++i) {
      const SensorId v = nu[i];
      if (v <= u) continue;
      for (std::size_t j = i + 1; j < nu.size(); ++j) {
        const SensorId w = nu[j];
        if (!std::binary_search(near[v].begin(), near[v].end(), w)) continue;
        Disk disk;
        try {
          disk = circumdisk(pts[u], pts[v], pts[w]);
        } catch (const DegenerateSimplex&) {
          continue;  // flat: circumradius unbounded, never short
        }
        if (disk.radius > r) continue;
        const double radius2 = disk.radius * disk.radius;
        bool gabriel = true;
        for (SensorId x : nu) {
          if (x == v || x == w) continue;
          const double dx2 = norm2(pts[x] - disk.center);
          if (std::fabs(dx2 - radius2) <= 2.0 * kCocircularTolerance * radius2) {
            throw DegenerateConfiguration("four sensors are cocircular", {u, v, w, x});
          }
          if (dx2 < radius2) {
            gabriel = false;
            break;
          }
        }
        if (!gabriel) continue;
        out.triangles.push_back({u, v, w});
        out.edges.push_back({u, v});
        out.edges.push_back({u, w});
        out.edges.push_back({v, w});
      }
    }
  }
  std::sort(out.triangles.begin(), out.triangles.end());
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

template <class Build>
AlphaComplex with_jitter(std::span<const Point2> positions, double r, std::uint64_t jitter_seed, Build build) {
  std::vector<Point2> pts(positions.begin(), positions.end());
  auto nudge = [&](SensorId id, int attempt) {
    const std::uint64_t h = splitmix64(jitter_seed ^ splitmix64(id * 0x100000001ULL + attempt));
    const double angle = 2.0 * M_PI * unit_from_hash(h);
    const double mag = 1e-9 * r * unit_from_hash(splitmix64(h));
    pts[id] = pts[id] + Point2{mag * std::cos(angle), mag * std::sin(angle)};
  };
  for (int attempt = 0;; ++attempt) {
    try {
      return build(std::span<const Point2>(pts), r);
    } catch (const DegenerateConfiguration& e) {
      if (attempt + 1 >= kMaxJitterAttempts) throw;
      for (SensorId id : e.ids()) nudge(id, attempt);
    } catch (const DegenerateSimplex&) {
      // A zero-area Delaunay triangle means the construction itself went
      // wrong on a degenerate input; perturb everything slightly.
      if (attempt + 1 >= kMaxJitterAttempts) throw;
      for (SensorId id = 0; id < pts.size(); ++id) nudge(id, attempt);
    }
  }
}

// Position of a point at distance du from (0,0) and dv from (c,0), on the
// side y >= 0.
Point2 trilaterate(double du, double dv, double c) {
  const double x = (du * du + c * c - dv * dv) / (2.0 * c);
  const double y2 = du * du - x * x;
  return {x, y2 > 0.0 ? std::sqrt(y2) : 0.0};
}

void check_triangle_inequality(double a, double b, double c, SensorId u, SensorId v, SensorId w) {
  const double tol = 1e-9 * std::max({a, b, c});
  if (a > b + c + tol || b > a + c + tol || c > a + b + tol) {
    throw InconsistentDistances("distances among sensors " + std::to_string(u) + ", " +
                                std::to_string(v) + ", " + std::to_string(w) +
                                " violate the triangle inequality");
  }
}

}  // namespace

Edge make_edge(SensorId a, SensorId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

Triangle make_triangle(SensorId a, SensorId b, SensorId c) {
  Triangle t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

Disk circumdisk(Point2 a, Point2 b) { return {0.5 * (a + b), 0.5 * distance(a, b)}; }

Disk circumdisk(Point2 a, Point2 b, Point2 c) {
  const Point2 ab = b - a, ac = c - a;
  const double area2 = cross(ab, ac);
  if (std::fabs(area2) <= kDegeneracyTolerance * norm(ab) * norm(ac)) {
    throw DegenerateSimplex("points are collinear");
  }
  const double ab2 = norm2(ab), ac2 = norm2(ac);
  const Point2 off{(ac.y * ab2 - ab.y * ac2) / (2.0 * area2),
                   (ab.x * ac2 - ac.x * ab2) / (2.0 * area2)};
  return {a + off, norm(off)};
}

bool AlphaComplex::has_edge(SensorId a, SensorId b) const {
  return std::binary_search(edges.begin(), edges.end(), make_edge(a, b));
}

bool AlphaComplex::has_triangle(SensorId a, SensorId b, SensorId c) const {
  return std::binary_search(triangles.begin(), triangles.end(), make_triangle(a, b, c));
}

AlphaComplex alpha_complex(std::span<const Point2> positions, double r, std::uint64_t jitter_seed) {
  return with_jitter(positions, r, jitter_seed, short_gabriel);
}

AlphaComplex alpha_complex_delaunay(std::span<const Point2> positions, double r, std::uint64_t jitter_seed) {
  return with_jitter(positions, r, jitter_seed, filter_delaunay);
}

LocalDistanceTable LocalDistanceTable::from_positions(std::span<const Point2> positions, double r) {
  LocalDistanceTable table(positions.size());
  for (SensorId a = 0; a < positions.size(); ++a) {
    for (SensorId b = a + 1; b < positions.size(); ++b) {
      const double d = distance(positions[a], positions[b]);
      if (d <= 2.0 * r) table.set_near(a, b, d);
    }
  }
  return table;
}

void LocalDistanceTable::set_near(SensorId a, SensorId b, double d) {
  auto put = [this](SensorId from, SensorId to, double dist) {
    auto& row = near_.at(from);
    auto it = std::lower_bound(row.begin(), row.end(), to,
                               [](const auto& entry, SensorId id) { return entry.first < id; });
    if (it != row.end() && it->first == to) {
      it->second = dist;
    } else {
      row.insert(it, {to, dist});
    }
  };
  put(a, b, d);
  put(b, a, d);
}

std::optional<double> LocalDistanceTable::near(SensorId a, SensorId b) const {
  const auto& row = near_.at(a);
  auto it = std::lower_bound(row.begin(), row.end(), b,
                             [](const auto& entry, SensorId id) { return entry.first < id; });
  if (it != row.end() && it->first == b) return it->second;
  return std::nullopt;
}

AlphaComplex alpha_complex_from_local_distances(const LocalDistanceTable& table, double r) {
  const std::size_t n = table.size();
  AlphaComplex out;
  out.radius = r;
  out.vertices.resize(n);
  std::iota(out.vertices.begin(), out.vertices.end(), SensorId{0});

  for (SensorId u = 0; u < n; ++u) {
    for (const auto& [v, d] : table.neighbours(u)) {
      if (d < 0.0 || d > 2.0 * r) {
        throw InconsistentDistances("Near entry (" + std::to_string(u) + ", " + std::to_string(v) +
                                    ") = " + std::to_string(d) + " is outside [0, 2r]");
      }
    }
  }

  // Edges: every Near pair has diametral radius d/2 <= r. A sensor x lies in
  // the open diametral disk iff |xu|^2 + |xv|^2 < |uv|^2; such an x is Near
  // both endpoints.
  for (SensorId u = 0; u < n; ++u) {
    for (const auto& [v, d] : table.neighbours(u)) {
      if (v <= u) continue;
      bool gabriel = true;
      for (const auto& [x, du] : table.neighbours(u)) {
        if (x == v) continue;
        const auto dv = table.near(v, x);
        if (dv && du * du + *dv * *dv < d * d) {
          gabriel = false;
          break;
        }
      }
      if (gabriel) out.edges.push_back({u, v});
    }
  }

  // Triangles: all three pairs Near; embed in a local frame with u at the
  // origin and v on the positive x-axis.
  for (SensorId u = 0; u < n; ++u) {
    const auto& nu = table.neighbours(u);
    for (std::size_t i = 0; i < nu.size(); ++i) {
      const auto [v, c] = nu[i];
      if (v <= u) continue;
      for (std::size_t j = i + 1; j < nu.size(); ++j) {
        const auto [w, b] = nu[j];
        const auto a_opt = table.near(v, w);
        if (!a_opt) continue;
        const double a = *a_opt;
        check_triangle_inequality(a, b, c, u, v, w);

        const Point2 pu{0.0, 0.0}, pv{c, 0.0};
        const Point2 pw = trilaterate(b, a, c);
        Disk disk;
        try {
          disk = circumdisk(pu, pv, pw);
        } catch (const DegenerateSimplex&) {
          continue;  // flat: circumradius unbounded, never short
        }
        if (disk.radius > r) continue;

        bool gabriel = true;
        for (const auto& [x, dxu] : nu) {
          if (x == v || x == w) continue;
          const auto dxv = table.near(v, x);
          const auto dxw = table.near(w, x);
          if (!dxv || !dxw) continue;
          // Two mirror candidates; the distance to w picks the right one.
          Point2 px = trilaterate(dxu, *dxv, c);
          const Point2 mirror{px.x, -px.y};
          if (std::fabs(distance(mirror, pw) - *dxw) < std::fabs(distance(px, pw) - *dxw)) px = mirror;
          if (distance(px, disk.center) < disk.radius) {
            gabriel = false;
            break;
          }
        }
        if (!gabriel) continue;
        out.triangles.push_back({u, v, w});
        out.edges.push_back({u, v});
        out.edges.push_back({u, w});
        out.edges.push_back({v, w});
      }
    }
  }

  std::sort(out.triangles.begin(), out.triangles.end());
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

RotationData rotation_data(std::span<const Point2> positions, const AlphaComplex& complex) {
  SensorId n = 0;
  for (SensorId v : complex.vertices) n = std::max<SensorId>(n, v + 1);
  RotationData rot(n);
  for (const Edge& e : complex.edges) {
    rot.at(e[0]).push_back(e[1]);
    rot.at(e[1]).push_back(e[0]);
  }
  for (SensorId v = 0; v < n; ++v) {
    auto& nbrs = rot[v];
    if (nbrs.size() < 2) continue;
    const Point2 origin = positions[v];
    std::vector<std::pair<double, SensorId>> keyed;
    keyed.reserve(nbrs.size());
    for (SensorId w : nbrs) {
      const Point2 d = positions[w] - origin;
      keyed.emplace_back(std::atan2(d.y, d.x), w);
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t k = 0; k < keyed.size(); ++k) nbrs[k] = keyed[k].second;
  }
  return rot;
}

bool same_cyclic_order(std::span<const SensorId> a, std::span<const SensorId> b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  const auto start = std::find(b.begin(), b.end(), a[0]);
  if (start == b.end()) return false;
  const std::size_t offset = static_cast<std::size_t>(start - b.begin());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != b[(k + offset) % b.size()]) return false;
  }
  return true;
}

}  // namespace mcov::geometry
