#pragma once

#include <chrono>
#include <cstdint>
#include <functional>

#include "pcd/bvh.hpp"
#include "pcd/geometry.hpp"
#include "pcd/mesh.hpp"

namespace pcd {

/// Probabilistic query between two hierarchies built in world coordinates. The
/// positional error applies to object A.
struct PcdQuery {
  const BvhTree& tree_a;
  const BvhTree& tree_b;
  GaussianError error;
  double confidence = 0.99;  ///< traversal stops below 1 - confidence
};

struct PcdResult {
  double probability_upper = 0.0;
  double root_bound = 0.0;  ///< bound of the root pair alone
  std::uint64_t nodes_visited = 0;
  std::uint64_t leaf_pairs_evaluated = 0;
  std::chrono::nanoseconds elapsed{0};
};

/// Hierarchical upper bound: the pair bound is returned when it is below 1 - confidence
/// or both nodes are leaves; otherwise the larger node (A on ties, and always the
/// internal one of a leaf/internal pair) is split and the child bounds are summed.
/// The total is clamped to [0, 1]. Throws kInvalidArgument unless 0 < confidence < 1.
PcdResult general_pcd(const PcdQuery& query);

/// Triangle-level interference between two posed meshes via simultaneous descent of
/// AABB trees. Trees are built once; collide() is const and thread-safe.
class MeshCollider {
 public:
  MeshCollider(const TriMesh& a, const TriMesh& b, std::uint32_t leaf_capacity = 4);

  bool collide(const Isometry& pose_a, const Isometry& pose_b) const;
  /// Minimum distance between the two surfaces (zero when they intersect).
  double distance(const Isometry& pose_a, const Isometry& pose_b) const;

 private:
  BvhTree a_;
  BvhTree b_;
};

bool exact_collide(const TriMesh& a, const Isometry& pose_a, const TriMesh& b, const Isometry& pose_b);
double mesh_distance(const TriMesh& a, const Isometry& pose_a, const TriMesh& b, const Isometry& pose_b);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
};

/// Fraction of draws e ~ N(mean, covariance) (e = mean + L z, z by Box-Muller from a
/// per-sample counter stream) for which `collides(e)` holds. Deterministic per seed
/// regardless of `threads` (0 picks the hardware concurrency). Throws
/// kInvalidArgument for fewer than 100 samples.
McEstimate monte_carlo_probability(const std::function<bool(const Vec3&)>& collides,
                                   const GaussianError& error, std::uint64_t n_samples,
                                   std::uint64_t seed, unsigned threads = 0);

/// Mesh A translated by each draw against a fixed mesh B.
McEstimate monte_carlo_probability(const TriMesh& a, const TriMesh& b, const GaussianError& error,
                                   std::uint64_t n_samples, std::uint64_t seed, unsigned threads = 0);

}  // namespace pcd
