#include "pcd/harness/shapes.hpp"

#include <cmath>
#include <filesystem>
#include <vector>

#include "pcd/errors.hpp"
#include "pcd/harness/obj_io.hpp"
#include "pcd/rng.hpp"

namespace pcd::harness {

TriMesh box_mesh(const Vec3& lo, const Vec3& hi) {
  TriMesh m;
  for (int i = 0; i < 8; ++i)
    m.vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
  m.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                 {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
  return m;
}

TriMesh polytope_mesh(const ConvexPolytope& p) {
  return TriMesh{p.vertices(), p.faces()};
}

TriMesh lumpy_mesh(std::uint64_t seed, int subdivisions) {
  const ConvexPolytope sphere = icosphere(subdivisions);
  struct Bump {
    Vec3 dir;
    double amplitude, width;
  };
  std::vector<Bump> bumps;
  CounterRng rng(seed, 0x6c756d7079ULL);
  for (int k = 0; k < 24; ++k) {
    const Vec3 d = normalized(rng.next_normal3());
    const double sign = k % 3 == 0 ? -1.0 : 1.0;
    bumps.push_back({d, sign * (0.08 + 0.12 * rng.next_open01()), 0.18 + 0.2 * rng.next_open01()});
  }
  bumps.push_back({normalized(Vec3{0.35, 0.25, 1.0}), 0.9, 0.12});
  bumps.push_back({normalized(Vec3{-0.35, 0.25, 1.0}), 0.8, 0.12});

  TriMesh m;
  m.triangles = sphere.faces();
  for (const Vec3& u : sphere.vertices()) {
    double r = 1.0;
    for (const Bump& b : bumps) {
      const double d2 = norm_sq(u - b.dir);
      r += b.amplitude * std::exp(-d2 / (2.0 * b.width * b.width));
    }
    r = std::max(r, 0.3);
    m.vertices.push_back(Vec3{1.0 * u.x, 0.8 * u.y, 0.7 * u.z} * r);
  }
  return m;
}

TriMesh resolve_mesh(const std::string& spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string name = spec.substr(prefix.size());
    if (name == "bunny") return lumpy_mesh();
    if (name == "cube") return box_mesh({-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5});
    if (name == "sphere") return polytope_mesh(icosphere(3));
    throw Error(ErrorCode::kConfigError, "unknown builtin mesh '" + name + "'");
  }
  return load_obj(spec);
}

std::string mesh_label(const std::string& spec) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) return spec.substr(prefix.size());
  return std::filesystem::path(spec).stem().string();
}

}  // namespace pcd::harness
