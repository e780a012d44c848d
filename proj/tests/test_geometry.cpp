#include <doctest.h>

#include <algorithm>
#include <random>

#include "escat/geometry.hpp"
#include "support/oracles.hpp"

using namespace escat;

namespace {

SimplePolygon square(double half, Point2 center = {0, 0}) {
  SimplePolygon p;
  p.vertices = {{center.x1 - half, center.x2 - half},
                {center.x1 + half, center.x2 - half},
                {center.x1 + half, center.x2 + half},
                {center.x1 - half, center.x2 + half}};
  return p;
}

SimplePolygon equilateral(double side) {
  SimplePolygon p;
  double r = side / std::sqrt(3.0);
  for (int k = 0; k < 3; ++k) {
    double th = M_PI / 2 + 2 * M_PI * k / 3;
    p.vertices.push_back({r * std::cos(th), r * std::sin(th)});
  }
  return p;
}

} // namespace

TEST_CASE("nest validation") {
  auto nest = build_nest_partition({square(0.5), square(0.4)});
  CHECK(nest.layers.size() == 2);

  CHECK_THROWS_AS(build_nest_partition({square(0.5), square(0.5)}), NotStrictlyNested);

  SimplePolygon lshape;
  lshape.vertices = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  CHECK(lshape.is_simple());
  CHECK(!lshape.is_convex()); // cross-product sign oracle is the definition here
  CHECK_THROWS_AS(build_nest_partition({lshape}), NotConvex);

  SimplePolygon bowtie;
  bowtie.vertices = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(build_nest_partition({bowtie}), SelfIntersecting);

  // orientation is normalized
  SimplePolygon cw = square(0.5);
  std::reverse(cw.vertices.begin(), cw.vertices.end());
  auto nest2 = build_nest_partition({cw});
  CHECK(nest2.layers[0].signed_area() > 0);
}

TEST_CASE("cell validation") {
  SimplePolygon t1, t2;
  t1.vertices = {{0, 0}, {1, 0}, {1, 1}};
  t2.vertices = {{0, 0}, {1, 1}, {0, 1}};
  auto part = build_cell_partition({t1, t2});
  CHECK(part.cells.size() == 2);
  CHECK(part.exterior_corner.size() == 2);

  auto sq1 = square(0.5, {0, 0});
  auto sq2 = square(0.5, {0.9, 0.0});
  CHECK_THROWS_AS(build_cell_partition({sq1, sq2}), OverlappingCells);

  // 3x3 grid: the center cell owns no exterior corner
  std::vector<SimplePolygon> grid;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      grid.push_back(square(0.5, {static_cast<double>(i), static_cast<double>(j)}));
  CHECK_THROWS_AS(build_cell_partition(grid), NoExteriorCorner);
}

TEST_CASE("corner extraction: square frame and delta_W") {
  SimplePolygon sq;
  sq.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto corners = extract_corners(make_partition_nest({sq}));
  REQUIRE(corners.size() == 4);

  const CornerDescriptor &c0 = corners[0];
  CHECK(c0.vertex.x1 == doctest::Approx(0.0));
  CHECK(c0.sector.theta_m == doctest::Approx(0.0));
  CHECK(c0.sector.theta_M == doctest::Approx(M_PI / 2));
  CHECK(c0.sector.delta_W == doctest::Approx(std::cos(M_PI / 4)).epsilon(1e-12));

  // dense angular sampling oracle: max d.x_hat over sector = -delta_W
  for (const auto &c : corners) {
    double mx = test::dense_max_d_dot(c.sector);
    CHECK(mx <= -c.sector.delta_W + 1e-12);
    CHECK(mx == doctest::Approx(-c.sector.delta_W).epsilon(1e-8));
  }
}

TEST_CASE("corner extraction: equilateral triangle") {
  auto corners = extract_corners(make_partition_nest({equilateral(1.0)}));
  REQUIRE(corners.size() == 3);
  for (const auto &c : corners) {
    CHECK(c.sector.opening() == doctest::Approx(M_PI / 3).epsilon(1e-12));
    CHECK(c.sector.delta_W == doctest::Approx(std::cos(M_PI / 6)).epsilon(1e-12));
    CHECK(test::dense_max_d_dot(c.sector) <= -c.sector.delta_W + 1e-12);
  }
}

TEST_CASE("corner extraction: nest h bounded by shell clearance") {
  auto part = make_partition_nest({square(0.5), square(0.3)});
  auto corners = extract_corners(part);
  REQUIRE(corners.size() == 8);
  for (const auto &c : corners) {
    CHECK(c.sector.h > 0);
    if (c.owner == 2) CHECK(c.sector.h <= 0.5 * std::hypot(0.2, 0.2) + 1e-12);
  }
  // openings of a convex N-gon sum to (N-2) pi per polygon
  double sum1 = 0, sum2 = 0;
  for (const auto &c : corners)
    (c.owner == 1 ? sum1 : sum2) += c.sector.opening();
  CHECK(sum1 == doctest::Approx(2 * M_PI).epsilon(1e-12));
  CHECK(sum2 == doctest::Approx(2 * M_PI).epsilon(1e-12));
}

TEST_CASE("rigid motion round trip and edge mapping") {
  SimplePolygon penta;
  std::mt19937 rng(7);
  for (int k = 0; k < 5; ++k) {
    double th = 2 * M_PI * k / 5 + 0.3;
    double r = 1.0 + 0.2 * (k % 2);
    penta.vertices.push_back({r * std::cos(th) + 0.4, r * std::sin(th) - 0.2});
  }
  auto corners = extract_corners(make_partition_nest({penta}));
  std::uniform_real_distribution<double> U(-3, 3);
  for (const auto &c : corners) {
    for (int t = 0; t < 100; ++t) {
      Point2 p{U(rng), U(rng)};
      Point2 q = c.rigid_motion.apply(c.rigid_motion.inverse(p));
      CHECK(norm(q - p) < 1e-12);
    }
    // local edge rays land on the polygon boundary
    for (double rr : {1e-3, 2e-3}) {
      Point2 on_m = c.rigid_motion.apply(
          {rr * std::cos(c.sector.theta_m), rr * std::sin(c.sector.theta_m)});
      Point2 on_M = c.rigid_motion.apply(
          {rr * std::cos(c.sector.theta_M), rr * std::sin(c.sector.theta_M)});
      CHECK(penta.distance_to_boundary(on_m) < 1e-12);
      CHECK(penta.distance_to_boundary(on_M) < 1e-12);
    }
  }
}

TEST_CASE("corner extraction on cell partitions with shared vertices") {
  SimplePolygon t1, t2;
  t1.vertices = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}};
  t2.vertices = {{-0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
  auto corners = extract_corners(make_partition_cell({t1, t2}));
  REQUIRE(corners.size() == 6);
  for (const auto &c : corners) {
    CHECK(c.sector.h > 0);
    // S_h stays inside the owning cell: the graded midray point is interior
    double bis = 0.5 * (c.sector.theta_m + c.sector.theta_M);
    Point2 probe = c.rigid_motion.apply(
        {0.5 * c.sector.h * std::cos(bis), 0.5 * c.sector.h * std::sin(bis)});
    const SimplePolygon &own = c.owner == 0 ? t1 : t2;
    CHECK(SimplePolygon{own}.contains(probe));
  }
}

TEST_CASE("reflex corners of non-convex cells extract with opening > pi") {
  // L-shaped cell plus the square completing it to a rectangle
  SimplePolygon lshape, sq;
  lshape.vertices = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  sq.vertices = {{1, 1}, {2, 1}, {2, 2}, {1, 2}};
  auto part = make_partition_cell({lshape, sq});
  auto corners = extract_corners(part);
  int reflex = 0;
  for (const auto &c : corners)
    if (c.sector.opening() > M_PI) {
      ++reflex;
      CHECK(c.sector.opening() == doctest::Approx(1.5 * M_PI).epsilon(1e-12));
      CHECK(c.sector.delta_W < 0.0); // cos(opening/2) < 0: no admissible probe
      CHECK(c.sector.theta_M < M_PI);
      CHECK(c.sector.theta_m > -M_PI);
      CHECK_THROWS_AS(make_probe(c.sector, 10.0), InvalidSector);
    }
  CHECK(reflex == 1);
}

TEST_CASE("convex N-gon: N descriptors, openings sum to (N-2) pi") {
  for (int N : {3, 4, 5, 7}) {
    SimplePolygon poly;
    for (int k = 0; k < N; ++k) {
      double th = 2 * M_PI * k / N + 0.17;
      poly.vertices.push_back({1.3 * std::cos(th), 1.3 * std::sin(th)});
    }
    auto corners = extract_corners(make_partition_nest({poly}));
    REQUIRE(static_cast<int>(corners.size()) == N);
    double sum = 0;
    for (const auto &c : corners) sum += c.sector.opening();
    CHECK(sum == doctest::Approx((N - 2) * M_PI).epsilon(1e-12));
  }
}

TEST_CASE("locate vs winding oracle") {
  auto part = make_partition_nest({square(0.5), square(0.25)});
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(-0.8, 0.8);
  for (int t = 0; t < 1000; ++t) {
    Point2 p{U(rng), U(rng)};
    RegionLabel lab = locate(part, p);
    if (lab.kind == RegionLabel::OnInterface) continue;
    bool in_outer = test::winding_contains(part.nest.layers[0].vertices, p);
    bool in_inner = test::winding_contains(part.nest.layers[1].vertices, p);
    if (in_inner) CHECK(lab.index == 2);
    else if (in_outer) CHECK(lab.index == 1);
    else CHECK(lab.kind == RegionLabel::Exterior);
  }

  CHECK(locate(part, {0, 0}).index == 2);
  CHECK(locate(part, {10, 0}).kind == RegionLabel::Exterior);
  RegionLabel edge = locate(part, {0.5, 0.1});
  CHECK(edge.kind == RegionLabel::OnInterface);
  CHECK(edge.interface_id == 1);
}

TEST_CASE("cell partition: shared-edge midpoint is on-interface") {
  SimplePolygon t1, t2;
  t1.vertices = {{0, 0}, {1, 0}, {1, 1}};
  t2.vertices = {{0, 0}, {1, 1}, {0, 1}};
  auto part = make_partition_cell({t1, t2});
  RegionLabel lab = locate(part, {0.5, 0.5});
  CHECK(lab.kind == RegionLabel::OnInterface);
  CHECK(lab.interface_id == 0);
  CHECK(locate(part, {0.7, 0.2}).index == 0);
  CHECK(locate(part, {0.2, 0.7}).index == 1);
}
