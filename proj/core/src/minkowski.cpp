#include "pcd/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcd/errors.hpp"
#include "pcd/hull.hpp"

namespace pcd {

ConvexPolytope minkowski_sum_general(const ConvexPolytope& a_negated, const ConvexPolytope& b) {
  const auto& va = a_negated.vertices();
  const auto& vb = b.vertices();
  if (va.empty() || vb.empty()) throw Error(ErrorCode::kDegenerateInput, "Minkowski sum of empty set");
  std::vector<Vec3> sums;
  sums.reserve(va.size() * vb.size());
  for (const Vec3& u : va)
    for (const Vec3& v : vb) sums.push_back(u + v);
  return convex_hull(sums);
}

Kdop26 minkowski_sum_kdop(const Kdop26& a, const Kdop26& b) {
  Kdop26 out;
  for (int s = 0; s < Kdop26::kSlabs; ++s) {
    out.slabs[s] = {a.slabs[s].lo + b.slabs[s].lo, a.slabs[s].hi + b.slabs[s].hi};
  }
  return out;
}

namespace {

struct VertexPool {
  std::vector<Vec3> points;
  double tol = 0.0;

  std::uint32_t add(const Vec3& p) {
    for (std::uint32_t i = 0; i < points.size(); ++i)
      if (norm(points[i] - p) <= tol) return i;
    points.push_back(p);
    return static_cast<std::uint32_t>(points.size() - 1);
  }
};

}  // namespace

ConvexPolytope minkowski_sum_boxes(const Box& a, const Box& b) {
  double scale = 0.0;
  for (const Vec3& g : a.generators) scale = std::max(scale, norm(g));
  for (const Vec3& g : b.generators) scale = std::max(scale, norm(g));
  const Vec3 center = a.center + b.center;

  // Merge parallel generators by summing lengths; drop null ones.
  std::vector<Vec3> gens;
  for (const auto* box : {&a, &b}) {
    for (const Vec3& g : box->generators) {
      const double len = norm(g);
      if (len <= 1e-15 * scale) continue;
      bool merged = false;
      for (Vec3& h : gens) {
        if (norm(cross(g / len, normalized(h))) < 1e-6) {
          h += dot(g, h) >= 0.0 ? g : -g;
          merged = true;
          break;
        }
      }
      if (!merged) gens.push_back(g);
    }
  }
  const int n = static_cast<int>(gens.size());
  if (n < 3) throw Error(ErrorCode::kDegenerateInput, "zonotope generators span less than 3D");

  VertexPool pool;
  pool.tol = 1e-12 * std::max(scale + norm(center), 1e-300);
  std::vector<Triangle> faces;
  bool spans = false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vec3 c = cross(gens[i], gens[j]);
      if (norm(c) <= 1e-12 * norm(gens[i]) * norm(gens[j])) continue;
      const Vec3 m = normalized(c);
      std::vector<int> in_plane;
      for (int k = 0; k < n; ++k)
        if (std::abs(dot(gens[k], m)) <= 1e-9 * norm(gens[k])) in_plane.push_back(k);
      // Each facet plane is handled once, by its two lowest-index generators.
      if (in_plane.size() < 2 || in_plane[0] != i || in_plane[1] != j) continue;
      if (static_cast<int>(in_plane.size()) < n) spans = true;

      for (double side : {1.0, -1.0}) {
        const Vec3 normal = m * side;
        Vec3 face_center = center;
        for (int k = 0; k < n; ++k) {
          if (std::find(in_plane.begin(), in_plane.end(), k) != in_plane.end()) continue;
          face_center += dot(gens[k], normal) >= 0.0 ? gens[k] : -gens[k];
        }
        const Vec3 u = normalized(gens[i]);
        const Vec3 v = cross(normal, u);
        std::vector<std::pair<double, Vec3>> edges;
        for (int k : in_plane) {
          Vec3 h = gens[k];
          double theta = std::atan2(dot(h, v), dot(h, u));
          if (theta < 0.0) {
            theta += kPi;
            h = -h;
            // theta was -0 up to rounding: h already points along u.
            if (theta >= kPi) {
              theta = 0.0;
              h = -h;
            }
          }
          edges.emplace_back(theta, h);
        }
        std::stable_sort(edges.begin(), edges.end(),
                         [](const auto& x, const auto& y) { return x.first < y.first; });
        Vec3 p = face_center;
        for (const auto& e : edges) p -= e.second;
        std::vector<std::uint32_t> poly;
        for (int pass = 0; pass < 2; ++pass) {
          for (const auto& e : edges) {
            poly.push_back(pool.add(p));
            p += e.second * (pass == 0 ? 2.0 : -2.0);
          }
        }
        for (std::size_t t = 1; t + 1 < poly.size(); ++t) faces.push_back({poly[0], poly[t], poly[t + 1]});
      }
    }
  }
  if (!spans) throw Error(ErrorCode::kDegenerateInput, "zonotope is flat");
  return ConvexPolytope(std::move(pool.points), std::move(faces));
}

}  // namespace pcd
