#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pcd/geometry.hpp"

namespace pcd {

using Triangle = std::array<std::uint32_t, 3>;

/// Closed convex polytope with a triangulated boundary and outward unit normals.
class ConvexPolytope {
 public:
  ConvexPolytope() = default;
  /// Normals are recomputed from the (counter-clockwise seen from outside) winding.
  ConvexPolytope(std::vector<Vec3> vertices, std::vector<Triangle> faces);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& faces() const { return faces_; }
  const std::vector<Vec3>& face_normals() const { return normals_; }

  bool empty() const { return vertices_.empty(); }
  double volume() const;
  double surface_area() const;
  double diameter() const;
  Vec3 centroid_of_vertices() const;

  ConvexPolytope translated(const Vec3& t) const;
  /// Point reflection x -> -x (the "-A" of a Minkowski difference).
  ConvexPolytope negated() const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Triangle> faces_;
  std::vector<Vec3> normals_;
};

/// Report of polytope invariants: 2-manifold closure, convexity, normals, Euler characteristic.
struct PolytopeCheck {
  bool closed = false;
  bool convex = false;
  bool unit_normals = false;
  int euler = 0;
  std::string message;

  bool ok() const { return closed && convex && unit_normals && euler == 2; }
};
PolytopeCheck check_polytope(const ConvexPolytope& p, double rel_tol = 1e-9);

struct Sphere {
  Vec3 center;
  double radius = 0.0;

  double volume() const { return 4.0 / 3.0 * kPi * radius * radius * radius; }
};

/// Parallelepiped center + sum_i t_i g_i, t_i in [-1, 1]. An oriented box has
/// orthogonal generators (half-edge vectors); a linear map keeps it a Box.
struct Box {
  Vec3 center;
  std::array<Vec3, 3> generators;

  static Box from_axes(const Vec3& center, const Mat3& axes, const Vec3& half_extents);
  static Box axis_aligned(const Vec3& lo, const Vec3& hi);

  double volume() const;
  std::array<Vec3, 8> corners() const;
  ConvexPolytope to_polytope() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Discrete oriented polytope over 13 fixed slab directions (26 planes):
/// the axes, the face diagonals and the cube diagonals.
struct Kdop26 {
  static constexpr int kSlabs = 13;
  std::array<Interval, kSlabs> slabs{};

  /// Unit slab directions.
  static const std::array<Vec3, kSlabs>& directions();

  /// Tight slabs around the points, each pushed out by `inflate` on both sides.
  static Kdop26 fit(std::span<const Vec3> points, double inflate = 0.0);

  Kdop26 negated() const;
  Kdop26 translated(const Vec3& t) const;
  /// Half-space intersection; throws kDegenerateShape if the slabs do not bound a solid.
  ConvexPolytope to_polytope() const;
  double volume() const { return to_polytope().volume(); }
};

using ConvexShape = std::variant<Sphere, Box, Kdop26, ConvexPolytope>;

/// A point of `shape` maximizing dot(point, direction). Throws kDegenerateShape on an
/// empty polytope and kInvalidArgument on a zero direction.
Vec3 support(const ConvexPolytope& shape, const Vec3& direction);
Vec3 support(const Sphere& shape, const Vec3& direction);
Vec3 support(const Box& shape, const Vec3& direction);
/// Exact support of the slab intersection (through its polytope form).
Vec3 support(const Kdop26& shape, const Vec3& direction);
Vec3 support(const ConvexShape& shape, const Vec3& direction);

/// Support value h(d) = max over the shape of dot(x, d).
template <class Shape>
double support_value(const Shape& shape, const Vec3& direction) {
  return dot(support(shape, direction), direction);
}

/// Linear image T * shape. Throws kSingularTransform. Boxes stay boxes (sheared),
/// k-DOPs become polytopes, spheres are rejected (not closed under linear maps).
ConvexPolytope apply_linear(const ConvexPolytope& shape, const Mat3& t);
Box apply_linear(const Box& shape, const Mat3& t);
ConvexPolytope apply_linear(const Kdop26& shape, const Mat3& t);

/// Icosahedron with vertices on the unit sphere, each face split into four
/// `subdivisions` times (20 * 4^subdivisions faces).
ConvexPolytope icosphere(int subdivisions);

/// Icosphere (two subdivisions) scaled so that every face plane lies at least
/// `radius` from the center; the result contains the sphere.
ConvexPolytope circumscribed_icosphere(const Sphere& sphere);

ConvexPolytope to_polytope(const ConvexShape& shape);

}  // namespace pcd
