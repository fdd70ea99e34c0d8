#pragma once

#include <functional>

#include "pcd/convex.hpp"

namespace pcd {

using SupportFn = std::function<Vec3(const Vec3&)>;

struct GjkResult {
  /// Minimum translation of `a` that brings it into contact with `b`
  /// (closest point of b - a to the origin). Unspecified when intersecting.
  Vec3 displacement;
  double distance = 0.0;
  bool intersecting = false;
  int iterations = 0;
};

struct GjkOptions {
  int max_iterations = 128;
  /// Stop once the duality gap on the distance is below rel_tolerance * (size of a + size of b).
  double rel_tolerance = 1e-9;
};

/// Gilbert-Johnson-Keerthi distance between two convex sets given by support maps.
/// Throws kNonConvergence after max_iterations.
GjkResult gjk_distance(const SupportFn& a, const SupportFn& b, const GjkOptions& options = {});

template <class A, class B>
GjkResult gjk_distance(const A& a, const B& b, const GjkOptions& options = {}) {
  return gjk_distance(SupportFn([&](const Vec3& d) { return support(a, d); }),
                      SupportFn([&](const Vec3& d) { return support(b, d); }), options);
}

/// Intersection test; a GJK non-convergence is reported as intersecting.
template <class A, class B>
bool gjk_intersects(const A& a, const B& b) {
  try {
    return gjk_distance(a, b).intersecting;
  } catch (const std::exception&) {
    return true;
  }
}

}  // namespace pcd
