#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "pcd/convex.hpp"
#include "pcd/mesh.hpp"

namespace pcd {

enum class BvType { kSphere, kAabb, kObb, kKdop26, kConvexHull };

const char* to_string(BvType type);
/// Accepts sphere, aabb, obb, kdop26, convex. Throws kInvalidArgument otherwise.
BvType parse_bv_type(std::string_view name);
inline constexpr BvType kAllBvTypes[] = {BvType::kSphere, BvType::kAabb, BvType::kObb,
                                         BvType::kKdop26, BvType::kConvexHull};

struct Obb {
  Box box;
};

using BoundingVolume = std::variant<Sphere, Aabb, Obb, Kdop26, ConvexPolytope>;

/// Fits a volume of the requested type around the points. Every variant except the
/// sphere is pushed out by 1e-7 of the point-set diameter so that flat patches keep a
/// positive volume; hulls are only thickened when the points are degenerate.
BoundingVolume fit_bv(std::span<const Vec3> points, BvType type);

double bv_volume(const BoundingVolume& bv);
bool bv_contains(const BoundingVolume& bv, const Vec3& p, double tol);
/// The volume as a convex shape for probability queries (AABB and OBB become boxes).
ConvexShape to_convex_shape(const BoundingVolume& bv);

struct BvhNode {
  BoundingVolume bv;
  double volume = 0.0;      ///< bv_volume(bv), cached for traversal ordering
  std::uint32_t first = 0;  ///< offset into BvhTree::triangle_order
  std::uint32_t count = 0;
  std::int32_t left = -1;
  std::int32_t right = -1;

  bool is_leaf() const { return left < 0; }
};

struct BvhTree {
  TriMesh mesh;
  BvType type = BvType::kAabb;
  std::uint32_t leaf_capacity = 4;
  std::vector<BvhNode> nodes;  ///< root at index 0
  std::vector<std::uint32_t> triangle_order;

  std::span<const std::uint32_t> triangles_of(const BvhNode& n) const {
    return {triangle_order.data() + n.first, n.count};
  }
  std::size_t leaf_count() const;
  int depth() const;
};

/// Top-down median split on the longest axis of the triangle-centroid bounds (ties in
/// the split coordinate broken by triangle index). The topology depends only on the
/// mesh and leaf capacity, so trees of different BV types share it.
BvhTree build_bvh(const TriMesh& mesh, BvType type, std::uint32_t leaf_capacity = 4);

/// Sum of leaf volumes over the mesh's enclosed volume. Throws kOpenMesh when the
/// signed mesh volume is not positive.
double bve(const BvhTree& tree);

}  // namespace pcd
