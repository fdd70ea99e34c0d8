#pragma once

#include <array>

#include "pcd/geometry.hpp"

namespace pcd {

using Tri = std::array<Vec3, 3>;

/// Moller's interval-overlap test. Touching triangles count as intersecting.
bool tri_tri_intersect(const Tri& a, const Tri& b);

Vec3 closest_point_on_triangle(const Vec3& p, const Tri& t);

/// Squared distance between segments p0-p1 and q0-q1.
double segment_segment_distance_sq(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1);

/// Euclidean distance between two triangles; zero when they intersect.
double tri_tri_distance(const Tri& a, const Tri& b);

}  // namespace pcd
