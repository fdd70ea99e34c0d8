#pragma once

#include "pcd/convex.hpp"
#include "pcd/geometry.hpp"

namespace pcd {

enum class BoundMethod {
  kConvexDivergence,  ///< surface-sum bound over the whitened Minkowski sum
  kSphereMax,         ///< ball volume times the maximum density over the ball (guaranteed)
  kSphereCenter,      ///< ball volume times the density at its center (not guaranteed)
  kExact1,            ///< shapes overlap in the mean-shifted, whitened frame
  kMonteCarloRef,
};

const char* to_string(BoundMethod m);

struct CollisionBound {
  double probability_upper = 0.0;
  /// Minimum displacement between the whitened shapes (n_d * |d|); zero when they overlap.
  Vec3 displacement_whitened;
  /// Sphere methods: the point of the relative-offset ball where the density was taken.
  Vec3 density_point;
  BoundMethod method = BoundMethod::kConvexDivergence;
};

/// F(x) = (1/4pi) (1 + erf(x.n / sqrt 2)) n, whose divergence is the
/// direction-relaxed standard density (2 pi)^(-3/2) exp(-(x.n)^2 / 2).
Vec3 field_f(const Vec3& x, const Vec3& n_d);

/// Sum over boundary triangles of (max over corners of F . n_i) * area_i, clamped to
/// [0, 1]. Triangles with area below 1e-14 contribute nothing.
double surface_integral_upper(const ConvexPolytope& v_prime, const Vec3& n_d);

/// Same sum without clamping (for diagnostics and tests).
double surface_integral_upper_unclamped(const ConvexPolytope& v_prime, const Vec3& n_d);

/// Upper bound on P((A + e) meets B) with e ~ error, for convex A and B.
/// Sphere pairs use sphere_pcd_max; a sphere paired with another shape is replaced by
/// its circumscribed icosphere.
CollisionBound convex_pcd(const ConvexShape& a, const ConvexShape& b, const GaussianError& error);

CollisionBound sphere_pcd_max(const Sphere& a, const Sphere& b, const GaussianError& error);
CollisionBound sphere_pcd_center(const Sphere& a, const Sphere& b, const GaussianError& error);

}  // namespace pcd
