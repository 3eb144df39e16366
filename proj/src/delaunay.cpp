#include "mcov/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcov::geometry {
namespace {

constexpr double kSuperScale = 64.0;
// Cheap circumcircle test first; only near-ties go to the determinant.
constexpr double kFilterTolerance = 1e-9;

struct Tri {
  std::array<std::size_t, 3> v;  // counter-clockwise
  Point2 center;
  double radius2;
};

long double orient(Point2 a, Point2 b, Point2 c, long double* scale) {
  const long double abx = static_cast<long double>(b.x) - a.x;
  const long double aby = static_cast<long double>(b.y) - a.y;
  const long double acx = static_cast<long double>(c.x) - a.x;
  const long double acy = static_cast<long double>(c.y) - a.y;
  if (scale) *scale = std::fabs(abx * acy) + std::fabs(aby * acx);
  return abx * acy - aby * acx;
}

// > 0 when d lies inside the circle through counter-clockwise a, b, c.
long double incircle(Point2 a, Point2 b, Point2 c, Point2 d, long double* scale) {
  const long double adx = static_cast<long double>(a.x) - d.x, ady = static_cast<long double>(a.y) - d.y;
  const long double bdx = static_cast<long double>(b.x) - d.x, bdy = static_cast<long double>(b.y) - d.y;
  const long double cdx = static_cast<long double>(c.x) - d.x, cdy = static_cast<long double>(c.y) - d.y;
  const long double alift = adx * adx + ady * ady;
  const long double blift = bdx * bdx + bdy * bdy;
  const long double clift = cdx * cdx + cdy * cdy;
  const long double bc = bdx * cdy - bdy * cdx;
  const long double ca = cdx * ady - cdy * adx;
  const long double ab = adx * bdy - ady * bdx;
  if (scale) {
    *scale = alift * (std::fabs(bdx * cdy) + std::fabs(bdy * cdx)) +
             blift * (std::fabs(cdx * ady) + std::fabs(cdy * adx)) +
             clift * (std::fabs(adx * bdy) + std::fabs(ady * bdx));
  }
  return alift * bc + blift * ca + clift * ab;
}

Tri make_tri(const std::vector<Point2>& pts, std::size_t a, std::size_t b, std::size_t c) {
  const Point2 pa = pts[a], pb = pts[b], pc = pts[c];
  const Point2 ab = pb - pa, ac = pc - pa;
  const double d = 2.0 * cross(ab, ac);
  const double ab2 = norm2(ab), ac2 = norm2(ac);
  const Point2 off{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
  return Tri{{a, b, c}, pa + off, norm2(off)};
}

}  // namespace

DelaunayTriangulation delaunay(std::span<const Point2> points) {
  const std::size_t n = points.size();
  std::vector<Point2> pts(points.begin(), points.end());
  pts.push_back({-3.0 * kSuperScale, -3.0 * kSuperScale});
  pts.push_back({3.0 * kSuperScale, -3.0 * kSuperScale});
  pts.push_back({0.0, 3.0 * kSuperScale});

  const auto real = [n](std::size_t i) { return i < n; };

  std::vector<Tri> tris;
  tris.reserve(2 * n + 8);
  tris.push_back(make_tri(pts, n, n + 1, n + 2));

  std::vector<std::size_t> bad;
  std::vector<std::array<std::size_t, 2>> boundary;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = pts[i];
    bad.clear();
    for (std::size_t t = 0; t < tris.size(); ++t) {
      const Tri& tri = tris[t];
      const double d2 = norm2(p - tri.center);
      if (d2 < tri.radius2 * (1.0 - kFilterTolerance)) {
        bad.push_back(t);
        continue;
      }
      if (d2 > tri.radius2 * (1.0 + kFilterTolerance)) continue;
      long double scale = 0;
      const long double det = incircle(pts[tri.v[0]], pts[tri.v[1]], pts[tri.v[2]], p, &scale);
      const bool all_real = real(tri.v[0]) && real(tri.v[1]) && real(tri.v[2]);
      if (all_real && std::fabs(det) <= kDegeneracyTolerance * scale) {
        throw DegenerateConfiguration(
            "cocircular points in Delaunay construction",
            {static_cast<SensorId>(tri.v[0]), static_cast<SensorId>(tri.v[1]),
             static_cast<SensorId>(tri.v[2]), static_cast<SensorId>(i)});
      }
      if (det > 0) bad.push_back(t);
    }

    // Cavity boundary: edges of bad triangles not shared with another bad one.
    boundary.clear();
    for (std::size_t t : bad) {
      for (int k = 0; k < 3; ++k) {
        const std::size_t a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
        auto twin = std::find(boundary.begin(), boundary.end(), std::array<std::size_t, 2>{b, a});
        if (twin != boundary.end()) {
          boundary.erase(twin);
        } else {
          boundary.push_back({a, b});
        }
      }
    }

    std::sort(bad.begin(), bad.end(), std::greater<>());
    for (std::size_t t : bad) {
      tris[t] = tris.back();
      tris.pop_back();
    }
    for (const auto& [a, b] : boundary) {
      long double scale = 0;
      const long double o = orient(pts[a], pts[b], p, &scale);
      if (o <= kDegeneracyTolerance * scale) {
        std::vector<SensorId> ids{static_cast<SensorId>(i)};
        if (real(a)) ids.push_back(static_cast<SensorId>(a));
        if (real(b)) ids.push_back(static_cast<SensorId>(b));
        throw DegenerateConfiguration("collinear points in Delaunay construction", std::move(ids));
      }
      tris.push_back(make_tri(pts, a, b, i));
    }
  }

  DelaunayTriangulation out;
  std::vector<std::pair<Edge, SensorId>> half;
  half.reserve(tris.size() * 3);
  for (const Tri& tri : tris) {
    const auto [a, b, c] = tri.v;
    if (real(a) && real(b) && real(c)) {
      out.triangles.push_back(make_triangle(static_cast<SensorId>(a), static_cast<SensorId>(b),
                                            static_cast<SensorId>(c)));
    }
    for (int k = 0; k < 3; ++k) {
      const std::size_t u = tri.v[k], v = tri.v[(k + 1) % 3], w = tri.v[(k + 2) % 3];
      if (!real(u) || !real(v)) continue;
      half.emplace_back(make_edge(static_cast<SensorId>(u), static_cast<SensorId>(v)),
                        real(w) ? static_cast<SensorId>(w) : kNoVertex);
    }
  }
  std::sort(out.triangles.begin(), out.triangles.end());
  std::sort(half.begin(), half.end());
  for (std::size_t k = 0; k < half.size();) {
    DelaunayEdge e{half[k].first, {half[k].second, kNoVertex}};
    std::size_t next = k + 1;
    if (next < half.size() && half[next].first == e.edge) {
      e.opposite[1] = half[next].second;
      ++next;
    }
    out.edges.push_back(e);
    k = next;
  }
  return out;
}

}  // namespace mcov::geometry
