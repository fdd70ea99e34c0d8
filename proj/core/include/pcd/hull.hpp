#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcd/convex.hpp"

namespace pcd {

struct HullResult {
  ConvexPolytope polytope;
  /// Input index of every output vertex; output vertices are sorted by it.
  std::vector<std::uint32_t> source_index;
};

/// Quickhull. Coplanar facets are merged and re-triangulated as a fan from their
/// lowest-input-index corner, so the triangulation does not depend on point order
/// or on rigid motions of the input. Throws kDegenerateInput for fewer than four
/// affinely independent points (thickness below 1e-10 * diameter).
HullResult convex_hull_indexed(std::span<const Vec3> points);
ConvexPolytope convex_hull(std::span<const Vec3> points);

/// As convex_hull, but degenerate (flat, collinear or coincident) inputs are first
/// thickened by `rel_eps * diameter` along their degenerate principal axes.
ConvexPolytope convex_hull_inflated(std::span<const Vec3> points, double rel_eps = 1e-7);

}  // namespace pcd
