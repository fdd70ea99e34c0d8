#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "pcd/convex.hpp"
#include "pcd/geometry.hpp"

namespace pcd {

struct Aabb {
  Vec3 min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()};
  Vec3 max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};

  bool empty() const { return min.x > max.x; }
  void expand(const Vec3& p) {
    min = pcd::min(min, p);
    max = pcd::max(max, p);
  }
  void expand(const Aabb& b) {
    min = pcd::min(min, b.min);
    max = pcd::max(max, b.max);
  }
  Vec3 extent() const { return max - min; }
  Vec3 center() const { return (min + max) * 0.5; }
  double volume() const {
    const Vec3 e = extent();
    return e.x * e.y * e.z;
  }
  bool overlaps(const Aabb& b) const {
    return min.x <= b.max.x && b.min.x <= max.x && min.y <= b.max.y && b.min.y <= max.y &&
           min.z <= b.max.z && b.min.z <= max.z;
  }
  bool contains(const Vec3& p, double tol = 0.0) const {
    return p.x >= min.x - tol && p.x <= max.x + tol && p.y >= min.y - tol && p.y <= max.y + tol &&
           p.z >= min.z - tol && p.z <= max.z + tol;
  }
};

/// Indexed triangle mesh. Winding is counter-clockwise seen from outside for closed meshes.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;

  bool empty() const { return triangles.empty(); }
  std::size_t size() const { return triangles.size(); }

  std::array<Vec3, 3> triangle(std::size_t i) const {
    const Triangle& t = triangles[i];
    return {vertices[t[0]], vertices[t[1]], vertices[t[2]]};
  }

  Aabb bounds() const;
  /// Signed volume by the tetrahedron sum about the origin.
  double signed_volume() const;
  /// Every directed edge appears once and its reverse appears once.
  bool is_closed() const;
  TriMesh transformed(const Isometry& pose) const;
};

/// Uniformly scales the mesh so that the longest bounding-box edge equals `size` and
/// centers the box at the origin.
TriMesh normalize_mesh(const TriMesh& mesh, double size = 1.0);

}  // namespace pcd
