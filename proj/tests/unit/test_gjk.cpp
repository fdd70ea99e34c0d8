#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "pcd/gjk.hpp"

using namespace pcd;

namespace {

// The closest point v of B - A to the origin satisfies w.v >= |v|^2 for every
// vertex difference w, and v itself lies in B - A.
void expect_optimal(const ConvexPolytope& a, const ConvexPolytope& b, const GjkResult& g, double tol) {
  const Vec3 v = g.displacement;
  const double vv = norm_sq(v);
  double lowest = 1e300;
  for (const Vec3& pb : b.vertices())
    for (const Vec3& pa : a.vertices()) lowest = std::min(lowest, dot(pb - pa, v));
  EXPECT_GE(lowest, vv - tol * std::sqrt(vv));
  // v is attained: moving A by v makes the sets touch.
  const GjkResult touch = gjk_distance(a.translated(v), b);
  EXPECT_TRUE(touch.intersecting || touch.distance < tol);
}

}  // namespace

TEST(Gjk, SpheresClosedForm) {
  CounterRng rng(41, 0);
  for (int k = 0; k < 200; ++k) {
    const Sphere a{rng.next_normal3(), test::uniform(rng, 0.1, 1.0)};
    const Sphere b{rng.next_normal3() * 3.0, test::uniform(rng, 0.1, 1.0)};
    const double expect = norm(b.center - a.center) - a.radius - b.radius;
    const GjkResult g = gjk_distance(a, b);
    if (expect > 1e-6) {
      ASSERT_FALSE(g.intersecting);
      EXPECT_NEAR(g.distance, expect, 1e-6 * (1 + expect));
      EXPECT_NEAR(dot(normalized(g.displacement), normalized(b.center - a.center)), 1.0, 1e-6);
    } else if (expect < -1e-6) {
      EXPECT_TRUE(g.intersecting);
    }
  }
}

TEST(Gjk, AxisAlignedBoxesClosedForm) {
  CounterRng rng(42, 0);
  for (int k = 0; k < 200; ++k) {
    const Vec3 lo_a = rng.next_normal3(), lo_b = rng.next_normal3() * 2.0;
    const Vec3 hi_a = lo_a + Vec3{test::uniform(rng, 0.1, 1), test::uniform(rng, 0.1, 1), test::uniform(rng, 0.1, 1)};
    const Vec3 hi_b = lo_b + Vec3{test::uniform(rng, 0.1, 1), test::uniform(rng, 0.1, 1), test::uniform(rng, 0.1, 1)};
    Vec3 gap;
    for (int i = 0; i < 3; ++i) gap[i] = std::max({0.0, lo_b[i] - hi_a[i], lo_a[i] - hi_b[i]});
    const GjkResult g = gjk_distance(Box::axis_aligned(lo_a, hi_a), Box::axis_aligned(lo_b, hi_b));
    const double expect = norm(gap);
    if (expect > 1e-9) {
      ASSERT_FALSE(g.intersecting);
      EXPECT_NEAR(g.distance, expect, 1e-8);
    } else {
      EXPECT_TRUE(g.intersecting);
    }
  }
}

TEST(Gjk, RandomPolytopesSatisfyOptimality) {
  CounterRng rng(43, 0);
  int separated = 0;
  for (int k = 0; k < 300; ++k) {
    const ConvexPolytope a = test::random_polytope(rng, 10 + k % 40, 1.0);
    const ConvexPolytope b = test::random_polytope(rng, 10 + k % 30, 1.0).translated(rng.next_normal3() * 2.5);
    const GjkResult g = gjk_distance(a, b);
    if (g.intersecting) {
      // A separating axis must not exist; spot-check the vertex directions of B - A.
      for (int i = 0; i < 100; ++i) {
        const Vec3 d = test::random_unit(rng);
        EXPECT_GE(support_value(b, d) + support_value(a, -d), -1e-9);
      }
      continue;
    }
    ++separated;
    EXPECT_NEAR(g.distance, norm(g.displacement), 1e-15);
    expect_optimal(a, b, g, 1e-8);
  }
  EXPECT_GT(separated, 50);
}

TEST(Gjk, TouchingAndNested) {
  const Box a = Box::axis_aligned({0, 0, 0}, {1, 1, 1});
  const Box touching = Box::axis_aligned({1, 0, 0}, {2, 1, 1});
  EXPECT_TRUE(gjk_distance(a, touching).intersecting);
  const Box inner = Box::axis_aligned({0.25, 0.25, 0.25}, {0.5, 0.5, 0.5});
  EXPECT_TRUE(gjk_distance(a, inner).intersecting);
  EXPECT_TRUE(gjk_intersects(inner, a));
}

TEST(Gjk, PointAgainstPolytope) {
  CounterRng rng(44, 0);
  const ConvexPolytope p = test::random_polytope(rng, 30, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Vec3 q = rng.next_normal3() * 3.0;
    const GjkResult g = gjk_distance(Sphere{q, 0.0}, p);
    EXPECT_EQ(g.intersecting, test::inside(p, q, 1e-9)) << k;
  }
}

TEST(Gjk, ScaleInvariantTolerance) {
  for (double s : {1e-4, 1.0, 1e4}) {
    const Box a = Box::axis_aligned(Vec3{0, 0, 0} * s, Vec3{1, 1, 1} * s);
    const Box b = Box::axis_aligned(Vec3{1.5, 0.2, 0.1} * s, Vec3{2, 1, 1} * s);
    const GjkResult g = gjk_distance(a, b);
    ASSERT_FALSE(g.intersecting);
    EXPECT_NEAR(g.distance, 0.5 * s, 1e-9 * s);
  }
}
