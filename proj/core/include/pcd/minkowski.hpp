#pragma once

#include "pcd/convex.hpp"

namespace pcd {

/// Hull of all pairwise vertex sums. Either operand may be a bare vertex set
/// (for example a single point). The caller negates A beforehand.
ConvexPolytope minkowski_sum_general(const ConvexPolytope& a_negated, const ConvexPolytope& b);

/// Slab-wise interval sum over the shared direction set, O(k). The result contains
/// the exact sum and agrees with it along the 13 slab directions.
Kdop26 minkowski_sum_kdop(const Kdop26& a, const Kdop26& b);

/// Zonotope with the six generators of both parallelepipeds; near-parallel generators
/// (angle below 1e-6 rad) are merged. Faces are zonogons split into fans.
ConvexPolytope minkowski_sum_boxes(const Box& a, const Box& b);

}  // namespace pcd
