#include "pcd/mesh.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "pcd/errors.hpp"

namespace pcd {

Aabb TriMesh::bounds() const {
  Aabb box;
  for (const Triangle& t : triangles)
    for (std::uint32_t i : t) box.expand(vertices[i]);
  return box;
}

double TriMesh::signed_volume() const {
  // Tetrahedra against the box center keep the terms small for offset meshes.
  const Vec3 o = bounds().center();
  double six_v = 0.0;
  for (const Triangle& t : triangles) {
    six_v += dot(vertices[t[0]] - o, cross(vertices[t[1]] - o, vertices[t[2]] - o));
  }
  return six_v / 6.0;
}

bool TriMesh::is_closed() const {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
  for (const Triangle& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      if (++edges[{t[k], t[(k + 1) % 3]}] > 1) return false;
    }
  }
  for (const auto& [e, count] : edges) {
    if (!edges.contains({e.second, e.first})) return false;
  }
  return !triangles.empty();
}

TriMesh TriMesh::transformed(const Isometry& pose) const {
  TriMesh out;
  out.triangles = triangles;
  out.vertices.reserve(vertices.size());
  for (const Vec3& v : vertices) out.vertices.push_back(pose.apply(v));
  return out;
}

TriMesh normalize_mesh(const TriMesh& mesh, double size) {
  if (mesh.empty()) throw Error(ErrorCode::kEmptyMesh, "cannot normalize an empty mesh");
  const Aabb box = mesh.bounds();
  const Vec3 e = box.extent();
  const double longest = std::max({e.x, e.y, e.z});
  if (!(longest > 0.0)) throw Error(ErrorCode::kDegenerateInput, "mesh has zero extent");
  const double s = size / longest;
  const Vec3 c = box.center();
  TriMesh out;
  out.triangles = mesh.triangles;
  out.vertices.reserve(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) out.vertices.push_back((v - c) * s);
  return out;
}

}  // namespace pcd
