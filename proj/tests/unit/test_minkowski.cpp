#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pcd/minkowski.hpp"

using namespace pcd;

namespace {

// Support of a Minkowski sum is the sum of supports.
double sum_support(const ConvexPolytope& a, const ConvexPolytope& b, const Vec3& d) {
  return support_value(a, d) + support_value(b, d);
}

Box random_box(CounterRng& rng, bool sheared) {
  if (!sheared) {
    return Box::from_axes(rng.next_normal3(), random_rotation(rng.next_u64()),
                         {test::uniform(rng, 0.1, 1), test::uniform(rng, 0.1, 1), test::uniform(rng, 0.1, 1)});
  }
  Box b;
  b.center = rng.next_normal3();
  for (Vec3& g : b.generators) g = rng.next_normal3() * 0.5;
  return b;
}

}  // namespace

TEST(Minkowski, GeneralSumSupportIsAdditive) {
  CounterRng rng(31, 0);
  for (int k = 0; k < 30; ++k) {
    const ConvexPolytope a = test::random_polytope(rng, 15, 1.0).translated(rng.next_normal3());
    const ConvexPolytope b = test::random_polytope(rng, 20, 0.5);
    const ConvexPolytope s = minkowski_sum_general(a, b);
    ASSERT_TRUE(check_polytope(s).ok());
    for (int i = 0; i < 200; ++i) {
      const Vec3 d = test::random_unit(rng);
      EXPECT_NEAR(support_value(s, d), sum_support(a, b, d), 1e-12);
    }
  }
}

TEST(Minkowski, ZonotopeMatchesHullOfSums) {
  CounterRng rng(32, 0);
  for (int k = 0; k < 60; ++k) {
    const Box a = random_box(rng, k % 2 == 1);
    const Box b = random_box(rng, k % 3 == 1);
    const ConvexPolytope z = minkowski_sum_boxes(a, b);
    const PolytopeCheck c = check_polytope(z);
    ASSERT_TRUE(c.ok()) << c.message;
    const ConvexPolytope g = minkowski_sum_general(a.to_polytope(), b.to_polytope());
    EXPECT_NEAR(z.volume(), g.volume(), 1e-10 * g.volume());
    for (int i = 0; i < 200; ++i) {
      const Vec3 d = test::random_unit(rng);
      EXPECT_NEAR(support_value(z, d), support_value(g, d), 1e-10);
    }
  }
}

TEST(Minkowski, ZonotopeWithParallelGenerators) {
  // Same orientation: generators merge pairwise, result is a box.
  const Mat3 r = random_rotation(7);
  const Box a = Box::from_axes({1, 0, 0}, r, {1, 2, 3});
  const Box b = Box::from_axes({0, 1, 0}, r, {0.5, 0.5, 0.5});
  const ConvexPolytope z = minkowski_sum_boxes(a, b);
  EXPECT_TRUE(check_polytope(z).ok());
  EXPECT_EQ(z.vertices().size(), 8u);
  EXPECT_NEAR(z.volume(), 8 * 1.5 * 2.5 * 3.5, 1e-9);
  // One shared axis only.
  const Box c = Box::from_axes({}, r * quaternion_to_matrix(std::cos(0.3), std::sin(0.3), 0, 0), {0.2, 0.4, 0.6});
  const ConvexPolytope y = minkowski_sum_boxes(a, c);
  EXPECT_TRUE(check_polytope(y).ok());
  const ConvexPolytope g = minkowski_sum_general(a.to_polytope(), c.to_polytope());
  EXPECT_NEAR(y.volume(), g.volume(), 1e-9 * g.volume());
}

TEST(Minkowski, ZonotopeAxisAlignedWithNegativeZeroAngles) {
  // Axis-aligned boxes after a whitening map with signed zeros in the generators.
  Box a = Box::axis_aligned({-1, -1, -1}, {1, 1, 1});
  Box b = Box::axis_aligned({2, -0.5, -0.5}, {3, 0.5, 0.5});
  a.generators[1] = {-0.0, 1.0, 0.0};
  b.generators[0] = {0.5, -1e-17, 0.0};
  const ConvexPolytope z = minkowski_sum_boxes(a, b);
  const PolytopeCheck c = check_polytope(z);
  ASSERT_TRUE(c.ok()) << c.message;
  EXPECT_NEAR(z.volume(), 3.0 * 3.0 * 3.0, 1e-9);
}

TEST(Minkowski, KdopSumContainsExactSumAndAgreesOnSlabs) {
  CounterRng rng(33, 0);
  for (int k = 0; k < 40; ++k) {
    std::vector<Vec3> pa, pb;
    for (int i = 0; i < 25; ++i) pa.push_back(rng.next_normal3());
    for (int i = 0; i < 25; ++i) pb.push_back(rng.next_normal3() * 0.5 + Vec3{3, 0, 0});
    const Kdop26 a = Kdop26::fit(pa), b = Kdop26::fit(pb);
    const Kdop26 s = minkowski_sum_kdop(a, b);
    const ConvexPolytope exact = minkowski_sum_general(a.to_polytope(), b.to_polytope());
    for (const Vec3& d : Kdop26::directions()) {
      EXPECT_NEAR(support_value(s, d), support_value(exact, d), 1e-9);
      EXPECT_NEAR(support_value(s, -d), support_value(exact, -d), 1e-9);
    }
    for (int i = 0; i < 200; ++i) {
      const Vec3 d = test::random_unit(rng);
      EXPECT_GE(support_value(s, d), support_value(exact, d) - 1e-9);
    }
  }
}

TEST(Minkowski, SinglePointOperand) {
  CounterRng rng(34, 0);
  const ConvexPolytope b = test::random_polytope(rng, 20, 1.0);
  const Vec3 t{0.5, -0.25, 2.0};
  const ConvexPolytope point({t}, {});
  const ConvexPolytope s = minkowski_sum_general(point, b);
  EXPECT_NEAR(s.volume(), b.volume(), 1e-12);
  for (int i = 0; i < 50; ++i) {
    const Vec3 d = test::random_unit(rng);
    EXPECT_NEAR(support_value(s, d), support_value(b, d) + dot(t, d), 1e-12);
  }
}
