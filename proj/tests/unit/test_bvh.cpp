#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "pcd/bvh.hpp"
#include "pcd/errors.hpp"

using namespace pcd;

namespace {

TriMesh sphere_mesh(int subdivisions, double stretch = 1.0) {
  const ConvexPolytope p = icosphere(subdivisions);
  TriMesh m;
  for (const Vec3& v : p.vertices()) m.vertices.push_back({v.x * stretch, v.y, v.z});
  m.triangles = p.faces();
  return m;
}

}  // namespace

TEST(Mesh, VolumeClosednessAndNormalization) {
  const TriMesh m = sphere_mesh(3, 2.0);
  EXPECT_TRUE(m.is_closed());
  EXPECT_NEAR(m.signed_volume(), icosphere(3).volume() * 2.0, 1e-12);
  TriMesh open = m;
  open.triangles.pop_back();
  EXPECT_FALSE(open.is_closed());
  const TriMesh n = normalize_mesh(m, 3.0);
  const Aabb b = n.bounds();
  EXPECT_NEAR(std::max({b.extent().x, b.extent().y, b.extent().z}), 3.0, 1e-12);
  EXPECT_NEAR(norm(b.center()), 0.0, 1e-12);
  EXPECT_THROW(normalize_mesh(TriMesh{}), Error);
  const Isometry pose(random_rotation(3), {1, 2, 3});
  EXPECT_NEAR(m.transformed(pose).signed_volume(), m.signed_volume(), 1e-12);
}

TEST(Bvh, ContainmentAndStructure) {
  const TriMesh m = sphere_mesh(4, 1.7);
  for (BvType type : kAllBvTypes) {
    for (std::uint32_t cap : {1u, 4u, 37u}) {
      const BvhTree t = build_bvh(m, type, cap);
      // Every triangle appears once.
      std::vector<std::uint32_t> order = t.triangle_order;
      std::sort(order.begin(), order.end());
      std::vector<std::uint32_t> all(m.size());
      std::iota(all.begin(), all.end(), 0u);
      ASSERT_EQ(order, all);
      std::size_t leaf_tris = 0;
      for (const BvhNode& n : t.nodes) {
        EXPECT_NEAR(n.volume, bv_volume(n.bv), 1e-15 * n.volume + 1e-300);
        if (n.is_leaf()) {
          EXPECT_LE(n.count, cap);
          leaf_tris += n.count;
        } else {
          const BvhNode& l = t.nodes[n.left];
          const BvhNode& r = t.nodes[n.right];
          EXPECT_EQ(l.first, n.first);
          EXPECT_EQ(l.count + r.count, n.count);
          EXPECT_EQ(r.first, l.first + l.count);
        }
        const double tol = 1e-9;
        for (std::uint32_t tri : t.triangles_of(n))
          for (const Vec3& v : m.triangle(tri)) EXPECT_TRUE(bv_contains(n.bv, v, tol)) << to_string(type);
      }
      EXPECT_EQ(leaf_tris, m.size());
      const double bound = 2.0 * std::log2(double(m.size())) + 4.0;
      EXPECT_LE(t.depth(), bound);
    }
  }
}

TEST(Bvh, TopologySharedAcrossTypes) {
  const TriMesh m = sphere_mesh(3, 1.3);
  const BvhTree ref = build_bvh(m, BvType::kAabb, 6);
  for (BvType type : kAllBvTypes) {
    const BvhTree t = build_bvh(m, type, 6);
    EXPECT_EQ(t.triangle_order, ref.triangle_order);
    ASSERT_EQ(t.nodes.size(), ref.nodes.size());
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      EXPECT_EQ(t.nodes[i].left, ref.nodes[i].left);
      EXPECT_EQ(t.nodes[i].count, ref.nodes[i].count);
    }
  }
}

TEST(Bvh, LeafVolumesOrderOnSmoothMesh) {
  // Per leaf, the hull is inside the k-DOP which is inside the AABB.
  const TriMesh m = sphere_mesh(3, 1.5);
  const BvhTree hull = build_bvh(m, BvType::kConvexHull, 16);
  const BvhTree kdop = build_bvh(m, BvType::kKdop26, 16);
  const BvhTree aabb = build_bvh(m, BvType::kAabb, 16);
  for (std::size_t i = 0; i < hull.nodes.size(); ++i) {
    EXPECT_LE(hull.nodes[i].volume, kdop.nodes[i].volume * (1 + 1e-9));
    EXPECT_LE(kdop.nodes[i].volume, aabb.nodes[i].volume * (1 + 1e-9));
  }
  EXPECT_LE(bve(hull), bve(kdop));
  EXPECT_LE(bve(kdop), bve(aabb));
}

TEST(Bvh, SingleLeafBveOfConvexMesh) {
  const TriMesh m = sphere_mesh(2);
  const BvhTree t = build_bvh(m, BvType::kConvexHull, 1000);
  EXPECT_EQ(t.nodes.size(), 1u);
  EXPECT_NEAR(bve(t), 1.0, 1e-6);
  const BvhTree s = build_bvh(m, BvType::kSphere, 1000);
  EXPECT_NEAR(bve(s), 4.0 / 3.0 * kPi / m.signed_volume(), 1e-3);
}

TEST(Bvh, Errors) {
  EXPECT_THROW(build_bvh(TriMesh{}, BvType::kAabb), Error);
  EXPECT_THROW(build_bvh(sphere_mesh(1), BvType::kAabb, 0), Error);
  TriMesh inside_out = sphere_mesh(1);
  for (Triangle& t : inside_out.triangles) std::swap(t[1], t[2]);
  try {
    bve(build_bvh(inside_out, BvType::kAabb));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOpenMesh);
  }
  EXPECT_THROW(parse_bv_type("cylinder"), Error);
  for (BvType t : kAllBvTypes) EXPECT_EQ(parse_bv_type(to_string(t)), t);
}

TEST(Bvh, FlatPatchesKeepPositiveVolume) {
  TriMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  m.triangles = {{0, 1, 2}, {1, 3, 2}};
  for (BvType type : kAllBvTypes) {
    const BvhTree t = build_bvh(m, type, 4);
    EXPECT_GT(t.nodes[0].volume, 0.0) << to_string(type);
    EXPECT_NO_THROW(to_convex_shape(t.nodes[0].bv));
  }
}
