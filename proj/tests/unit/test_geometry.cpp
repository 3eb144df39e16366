#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "mcov/delaunay.hpp"
#include "mcov/geometry.hpp"

using namespace mcov;
using namespace mcov::geometry;

namespace {

std::vector<Point2> random_points(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<Point2> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto orient = [](Point2 p, Point2 q, Point2 r) { return cross(q - p, r - p); };
  const double d1 = orient(a, b, c), d2 = orient(a, b, d), d3 = orient(c, d, a), d4 = orient(c, d, b);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

int graph_components(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int count = static_cast<int>(n);
  for (const auto& e : edges) {
    const auto a = find(e[0]), b = find(e[1]);
    if (a != b) {
      parent[a] = b;
      --count;
    }
  }
  return count;
}

// Connected components of the union of closed r-balls, by flood fill on a grid.
int union_components(const std::vector<Point2>& pts, double r, double pitch) {
  const double lo = -0.5 - r - pitch, hi = 0.5 + r + pitch;
  const int m = static_cast<int>(std::ceil((hi - lo) / pitch));
  std::vector<char> covered(static_cast<std::size_t>(m) * m, 0);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const Point2 c{lo + (i + 0.5) * pitch, lo + (j + 0.5) * pitch};
      for (const auto& p : pts) {
        if (distance(c, p) <= r) {
          covered[j * m + i] = 1;
          break;
        }
      }
    }
  }
  int count = 0;
  std::vector<char> seen(covered.size(), 0);
  for (int start = 0; start < m * m; ++start) {
    if (!covered[start] || seen[start]) continue;
    ++count;
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      const int k = q.front();
      q.pop();
      const int i = k % m, j = k / m;
      const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (const auto& [a, b] : nb) {
        if (a < 0 || b < 0 || a >= m || b >= m) continue;
        const int idx = b * m + a;
        if (covered[idx] && !seen[idx]) {
          seen[idx] = 1;
          q.push(idx);
        }
      }
    }
  }
  return count;
}

}  // namespace

TEST_CASE("circumdisk of a segment is its diametral disk") {
  const Disk d = circumdisk({0, 0}, {1, 0});
  CHECK(d.center.x == doctest::Approx(0.5));
  CHECK(d.center.y == doctest::Approx(0.0));
  CHECK(d.radius == doctest::Approx(0.5));
}

TEST_CASE("circumradius of the unit equilateral triangle is 1/sqrt(3)") {
  const Disk d = circumdisk({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2});
  CHECK(d.radius == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(d.center.x == doctest::Approx(0.5));
}

TEST_CASE("collinear triple is degenerate") {
  CHECK_THROWS_AS(circumdisk({0, 0}, {1, 0}, {2, 1e-15}), DegenerateSimplex);
}

TEST_CASE("alpha complex small examples") {
  SUBCASE("short segment") {
    const std::vector<Point2> pts{{0, 0}, {1, 0}};
    const auto a = alpha_complex(pts, 0.6);
    CHECK(a.edges == std::vector<Edge>{{0, 1}});
    CHECK(a.triangles.empty());
  }
  SUBCASE("long segment") {
    const std::vector<Point2> pts{{0, 0}, {1.3, 0}};
    const auto a = alpha_complex(pts, 0.6);
    CHECK(a.edges.empty());
    CHECK(a.vertices == std::vector<SensorId>{0, 1});
  }
  SUBCASE("equilateral triangle with r between edge and triangle circumradius") {
    const std::vector<Point2> pts{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
    const auto a = alpha_complex(pts, 0.55);
    CHECK(a.edges.size() == 3);
    CHECK(a.triangles.empty());
    const auto b = alpha_complex(pts, 0.6);
    CHECK(b.triangles == std::vector<Triangle>{{0, 1, 2}});
  }
  SUBCASE("obtuse triangle: long edge is not Gabriel") {
    const std::vector<Point2> pts{{0, 0}, {1, 0}, {0.5, 0.1}};
    const auto a = alpha_complex(pts, 0.52);
    CHECK_FALSE(a.has_edge(0, 1));
    CHECK(a.has_edge(0, 2));
    CHECK(a.has_edge(1, 2));
  }
}

TEST_CASE("cocircular square is resolved by jitter") {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto a = alpha_complex(pts, 0.8, 5);
  CHECK(a.edges.size() == 5);
  CHECK(a.triangles.size() == 2);
  CHECK(alpha_complex(pts, 0.8, 5).same_simplices(a));
}

TEST_CASE("local distances: examples") {
  const std::vector<Point2> pts{{0, 0}, {1, 0}};
  const auto table = LocalDistanceTable::from_positions(pts, 0.6);
  CHECK(table.near(0, 1).value() == doctest::Approx(1.0));
  CHECK(alpha_complex_from_local_distances(table, 0.6).same_simplices(alpha_complex(pts, 0.6)));

  LocalDistanceTable bad(2);
  bad.set_near(0, 1, 5 * 0.1);
  CHECK_THROWS_AS(alpha_complex_from_local_distances(bad, 0.1), InconsistentDistances);
}

TEST_CASE("local distances: far pairs are not recorded") {
  const std::vector<Point2> pts{{0, 0}, {0.3, 0}, {1, 0}};
  const auto table = LocalDistanceTable::from_positions(pts, 0.2);
  CHECK(table.near(0, 1).has_value());
  CHECK_FALSE(table.near(0, 2).has_value());
  CHECK(table.neighbours(1).size() == 1);
}

TEST_CASE("property: local distances reproduce the complex") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const auto pts = random_points(rng, 5 + trial % 30);
    const double r = 0.08 + 0.17 * (trial % 7) / 6.0;
    const auto expected = alpha_complex(pts, r);
    const auto got = alpha_complex_from_local_distances(LocalDistanceTable::from_positions(pts, r), r);
    REQUIRE(got.same_simplices(expected));
  }
}

TEST_CASE("property: local search agrees with the Delaunay filter") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = random_points(rng, 3 + trial % 40);
    const double r = 0.05 + 0.3 * (trial % 11) / 10.0;
    REQUIRE(alpha_complex(pts, r).same_simplices(alpha_complex_delaunay(pts, r)));
  }
}

TEST_CASE("property: every simplex is Delaunay") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pts = random_points(rng, 25);
    const auto dt = delaunay(pts);
    std::vector<Edge> del_edges;
    for (const auto& e : dt.edges) del_edges.push_back(e.edge);
    std::sort(del_edges.begin(), del_edges.end());
    auto del_tris = dt.triangles;
    std::sort(del_tris.begin(), del_tris.end());
    const auto a = alpha_complex(pts, 0.15);
    for (const auto& e : a.edges) REQUIRE(std::binary_search(del_edges.begin(), del_edges.end(), e));
    for (const auto& t : a.triangles) REQUIRE(std::binary_search(del_tris.begin(), del_tris.end(), t));
  }
}

TEST_CASE("property: face closure and planarity") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 40; ++trial) {
    const auto pts = random_points(rng, 30);
    const auto a = alpha_complex(pts, 0.12);
    for (const auto& t : a.triangles) {
      CHECK(a.has_edge(t[0], t[1]));
      CHECK(a.has_edge(t[0], t[2]));
      CHECK(a.has_edge(t[1], t[2]));
    }
    for (const auto& e : a.edges) {
      CHECK(e[0] < e[1]);
      CHECK(e[1] < pts.size());
    }
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
      for (std::size_t j = i + 1; j < a.edges.size(); ++j) {
        const auto& e = a.edges[i];
        const auto& f = a.edges[j];
        if (e[0] == f[0] || e[0] == f[1] || e[1] == f[0] || e[1] == f[1]) continue;
        REQUIRE_FALSE(segments_cross(pts[e[0]], pts[e[1]], pts[f[0]], pts[f[1]]));
      }
    }
  }
}

TEST_CASE("property: monotone in r") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = random_points(rng, 20);
    const auto small = alpha_complex(pts, 0.1);
    const auto large = alpha_complex(pts, 0.16);
    CHECK(std::includes(large.edges.begin(), large.edges.end(), small.edges.begin(), small.edges.end()));
    CHECK(std::includes(large.triangles.begin(), large.triangles.end(), small.triangles.begin(),
                        small.triangles.end()));
  }
}

TEST_CASE("property: components match the union of balls") {
  std::mt19937_64 rng(16);
  const double r = 0.15;
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 25; ++trial) {
    const auto pts = random_points(rng, 2 + trial % 5);
    bool generic = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        if (std::fabs(distance(pts[i], pts[j]) - 2 * r) < 0.1 * r) generic = false;
      }
    }
    if (!generic) continue;
    ++checked;
    const auto a = alpha_complex(pts, r);
    CHECK(graph_components(pts.size(), a.edges) == union_components(pts, r, r / 20));
  }
  CHECK(checked >= 20);
}

TEST_CASE("rotation data") {
  SUBCASE("quadrant order") {
    const std::vector<Point2> pts{{0, 0}, {-1, 0}, {0, 1}, {1, 0}};
    AlphaComplex c;
    c.vertices = {0, 1, 2, 3};
    c.edges = {{0, 1}, {0, 2}, {0, 3}};
    const auto rot = rotation_data(pts, c);
    const std::vector<SensorId> expected{3, 2, 1};
    CHECK(same_cyclic_order(rot[0], expected));
    CHECK(rot[1] == std::vector<SensorId>{0});
  }
  SUBCASE("isolated vertex") {
    const std::vector<Point2> pts{{0, 0}, {1, 1}};
    AlphaComplex c;
    c.vertices = {0, 1};
    CHECK(rotation_data(pts, c)[0].empty());
  }
  SUBCASE("cyclic comparison ignores the starting point") {
    const std::vector<SensorId> a{1, 2, 3}, b{3, 1, 2}, c{1, 3, 2};
    CHECK(same_cyclic_order(a, b));
    CHECK_FALSE(same_cyclic_order(a, c));
  }
}
