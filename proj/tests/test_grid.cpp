#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "disklab/grid.hpp"
#include "doctest.h"

using namespace disklab;

TEST_CASE("node classification matches the radius rule") {
  DiskGrid g(33);
  const double h = g.spacing();
  CHECK(h == doctest::Approx(2.0 / 32.0));

  int interior = 0, boundary = 0;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      const double r = g.node(i, j).norm();
      const NodeClass c = g.node_class(i, j);
      if (c == NodeClass::Interior) {
        ++interior;
        CHECK(r < 1.0 - h / 2 + 1e-12);
      } else if (c == NodeClass::Boundary) {
        ++boundary;
        CHECK(r <= 1.0 + h / 2 + 1e-12);
        CHECK(r >= 1.0 - h / 2 - 1e-12);
      } else {
        CHECK(r > 1.0 - h / 2);
      }
    }
  CHECK(interior == g.interior_count());
  CHECK(boundary == g.boundary_count());
  CHECK(interior > 0);
  CHECK(boundary > 0);
}

TEST_CASE("every interior node has four non-exterior axis neighbours") {
  for (int n : {17, 33, 65}) {
    DiskGrid g(n);
    for (int idx : g.interior()) {
      const int i = idx / g.n(), j = idx % g.n();
      CHECK(g.in_domain(i + 1, j));
      CHECK(g.in_domain(i - 1, j));
      CHECK(g.in_domain(i, j + 1));
      CHECK(g.in_domain(i, j - 1));
    }
  }
}

TEST_CASE("quadrature weights approximate the disk area") {
  // Interior cells carry h^2, the boundary band half of that; the total
  // approaches pi with an O(h) rim error.
  for (int n : {33, 65}) {
    DiskGrid g(n);
    double area = 0.0;
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) area += g.quad_weight(i, j);
    CHECK(std::abs(area - 3.14159265358979) < 4.0 * g.spacing());
  }
}

TEST_CASE("trace points sit on the unit circle") {
  DiskGrid g(33);
  for (int idx : g.boundary()) {
    const int i = idx / g.n(), j = idx % g.n();
    CHECK(g.trace_point(i, j).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  // and interior nodes are left alone
  const int mid = g.n() / 2;
  CHECK(g.trace_point(mid, mid).norm() == doctest::Approx(0.0));
}

TEST_CASE("node lists are sorted and disjoint") {
  DiskGrid g(33);
  std::set<int> seen;
  int prev = -1;
  for (int idx : g.interior()) {
    CHECK(idx > prev);
    prev = idx;
    seen.insert(idx);
  }
  prev = -1;
  for (int idx : g.boundary()) {
    CHECK(idx > prev);
    prev = idx;
    CHECK(seen.count(idx) == 0);
  }
}

TEST_CASE("origin is a node and the lattice is centred") {
  DiskGrid g(17);
  const int mid = g.n() / 2;
  const Vec2 c = g.node(mid, mid);
  CHECK(c.x == doctest::Approx(0.0));
  CHECK(c.y == doctest::Approx(0.0));
}

TEST_CASE("even or tiny lattices are refused") {
  CHECK_THROWS(DiskGrid(32));
  CHECK_THROWS(DiskGrid(15));
}
