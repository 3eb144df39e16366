#include <doctest.h>

#include <algorithm>
#include <random>

#include "fig2.hpp"
#include "mcov/geometry.hpp"
#include "mcov/topology.hpp"

using namespace mcov;
using namespace mcov::topology;

namespace {

FatGraph fat_of(const std::vector<Point2>& pts, const geometry::AlphaComplex& c) {
  return build_fat_graph(c.edges, geometry::rotation_data(pts, c));
}

geometry::AlphaComplex graph(std::size_t n, std::vector<geometry::Edge> edges) {
  geometry::AlphaComplex c;
  for (SensorId v = 0; v < n; ++v) c.vertices.push_back(v);
  for (auto& e : edges) e = geometry::make_edge(e[0], e[1]);
  std::sort(edges.begin(), edges.end());
  c.edges = std::move(edges);
  return c;
}

}  // namespace

TEST_CASE("reference fat graph: alpha and sigma") {
  const auto pts = fig2::positions();
  const auto fat = fat_of(pts, fig2::complex());
  CHECK(fat.alpha(fig2::dart(1)) == fig2::dart(2));
  CHECK(fat.alpha(fig2::dart(2)) == fig2::dart(1));
  CHECK(fat.alpha(fig2::dart(3)) == fig2::dart(4));
  CHECK(fat.sigma(fig2::dart(3)) == fig2::dart(20));
  CHECK(fat.sigma(fig2::dart(20)) == fig2::dart(2));
  CHECK(fat.sigma(fig2::dart(2)) == fig2::dart(3));
}

TEST_CASE("reference fat graph: the four boundary cycles") {
  const auto pts = fig2::positions();
  const auto cycles = boundary_cycles(fat_of(pts, fig2::complex()));
  std::vector<BoundaryCycle> expected{fig2::cycle({2, 14, 12, 17, 19}), fig2::cycle({4, 20, 21, 22, 18, 10, 15}),
                                      fig2::cycle({6, 16, 8}), fig2::cycle({1, 3, 5, 7, 9, 11, 13})};
  std::sort(expected.begin(), expected.end());
  CHECK(cycles == expected);
  CHECK(cycles.size() == 11 - 9 + 2);
}

TEST_CASE("reference fat graph: the outer cycle has positive area") {
  const auto pts = fig2::positions();
  CHECK(signed_area(fig2::cycle({1, 3, 5, 7, 9, 11, 13}), pts) > 0);
  CHECK(signed_area(fig2::cycle({6, 16, 8}), pts) < 0);
  CHECK(signed_area(fig2::cycle({2, 14, 12, 17, 19}), pts) < 0);
}

TEST_CASE("canonicalize") {
  CHECK(canonicalize(fig2::cycle({14, 12, 17, 19, 2}).darts).darts == fig2::cycle({2, 14, 12, 17, 19}).darts);
  const std::vector<Dart> raw{{14, 12}, {12, 17}, {17, 19}, {19, 2}, {2, 14}};
  CHECK(canonicalize(raw).darts.front() == Dart{2, 14});
  const std::vector<Dart> pair{{1, 0}, {0, 1}};
  CHECK(canonicalize(pair).darts == std::vector<Dart>{{0, 1}, {1, 0}});
  const auto once = canonicalize(raw);
  CHECK(canonicalize(once.darts) == once);
}

TEST_CASE("single edge") {
  const std::vector<Point2> pts{{0, 0}, {1, 0}};
  const auto fat = fat_of(pts, graph(2, {{0, 1}}));
  REQUIRE(fat.darts().size() == 2);
  CHECK(fat.sigma(Dart{0, 1}) == Dart{0, 1});
  CHECK(fat.alpha(Dart{0, 1}) == Dart{1, 0});
  const auto cycles = boundary_cycles(fat);
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].darts == std::vector<Dart>{{0, 1}, {1, 0}});
}

TEST_CASE("triangle") {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {0, 1}};
  const auto fat = fat_of(pts, graph(3, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK(fat.darts().size() == 6);
  for (std::size_t d = 0; d < 6; ++d) {
    CHECK(fat.sigma(fat.sigma(d)) == d);
    CHECK(fat.sigma(d) != d);
  }
  const auto cycles = boundary_cycles(fat);
  REQUIRE(cycles.size() == 2);
  CHECK(signed_area(cycles[0], pts) * signed_area(cycles[1], pts) < 0);
}

TEST_CASE("isolated vertex has a loop cycle") {
  const std::vector<Point2> pts{{0, 0}, {1, 0}, {5, 5}};
  const auto cycles = boundary_cycles(fat_of(pts, graph(3, {{0, 1}})));
  REQUIRE(cycles.size() == 2);
  CHECK(cycles[1].is_vertex_cycle());
  CHECK(cycles[1].darts.front().tail == 2);
}

TEST_CASE("rotation mismatch is reported") {
  geometry::RotationData rot{{1}, {}};
  const std::vector<geometry::Edge> edges{{0, 1}};
  CHECK_THROWS_AS(build_fat_graph(edges, rot), RotationMismatch);
}

TEST_CASE("property: random planar complexes") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point2> pts(10 + trial % 30);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const auto complex = geometry::alpha_complex(pts, 0.5);
    const auto fat = fat_of(pts, complex);
    const auto cycles = boundary_cycles(fat);

    // alpha is an involution, sigma permutes darts of one tail in one orbit
    for (std::size_t d = 0; d < fat.darts().size(); ++d) {
      CHECK(fat.alpha(fat.alpha(d)) == d);
      CHECK(fat.darts()[fat.sigma(d)].tail == fat.darts()[d].tail);
    }
    for (SensorId v = 0; v < pts.size(); ++v) {
      const auto lo = std::lower_bound(fat.darts().begin(), fat.darts().end(), Dart{v, 0});
      const auto hi = std::lower_bound(fat.darts().begin(), fat.darts().end(), Dart{v + 1, 0});
      const std::size_t degree = hi - lo;
      if (degree == 0) continue;
      std::size_t d = lo - fat.darts().begin(), steps = 0;
      const std::size_t start = d;
      do {
        d = fat.sigma(d);
        ++steps;
      } while (d != start);
      CHECK(steps == degree);
    }

    // every dart in exactly one cycle, each cycle a phi orbit
    std::vector<Dart> all;
    for (const auto& c : cycles) {
      if (c.is_vertex_cycle()) continue;
      for (std::size_t k = 0; k < c.darts.size(); ++k) {
        const std::size_t here = fat.index_of(c.darts[k]);
        CHECK(fat.darts()[fat.phi(here)] == c.darts[(k + 1) % c.darts.size()]);
      }
      all.insert(all.end(), c.darts.begin(), c.darts.end());
    }
    std::sort(all.begin(), all.end());
    CHECK(all == fat.darts());

    // at r = 0.5 the sample is connected
    CHECK(cycles.size() == complex.edges.size() - pts.size() + 2);

    // canonical and independent of input order
    for (const auto& c : cycles) CHECK(canonicalize(c.darts) == c);
    auto shuffled = complex.edges;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(boundary_cycles(build_fat_graph(shuffled, geometry::rotation_data(pts, complex))) == cycles);
  }
}
