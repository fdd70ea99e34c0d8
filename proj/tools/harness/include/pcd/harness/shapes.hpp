#pragma once

#include <cstdint>
#include <string>

#include "pcd/convex.hpp"
#include "pcd/mesh.hpp"

namespace pcd::harness {

TriMesh box_mesh(const Vec3& lo, const Vec3& hi);
TriMesh polytope_mesh(const ConvexPolytope& p);

/// Closed, star-shaped, non-convex test body: an icosphere stretched into an
/// ellipsoid and displaced by random radial bumps and dents, with two long "ears".
/// Four subdivisions give 5120 triangles.
TriMesh lumpy_mesh(std::uint64_t seed = 7, int subdivisions = 4);

/// Mesh from a path or from a generator name: "builtin:bunny", "builtin:cube",
/// "builtin:sphere". Throws kConfigError for an unknown generator.
TriMesh resolve_mesh(const std::string& spec);

/// Short label for a mesh spec (file stem or generator name).
std::string mesh_label(const std::string& spec);

}  // namespace pcd::harness
