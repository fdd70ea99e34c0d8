#include "pcd/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcd/errors.hpp"
#include "pcd/hull.hpp"

namespace pcd {

const char* to_string(BvType type) {
  switch (type) {
    case BvType::kSphere: return "sphere";
    case BvType::kAabb: return "aabb";
    case BvType::kObb: return "obb";
    case BvType::kKdop26: return "kdop26";
    case BvType::kConvexHull: return "convex";
  }
  return "unknown";
}

BvType parse_bv_type(std::string_view name) {
  for (BvType t : kAllBvTypes)
    if (name == to_string(t)) return t;
  throw Error(ErrorCode::kInvalidArgument, "unknown bounding volume type '" + std::string(name) + "'");
}

namespace {

double point_diameter(std::span<const Vec3> points) {
  Aabb box;
  for (const Vec3& p : points) box.expand(p);
  return norm(box.extent());
}

// Ritter: a rough diameter from two farthest-point sweeps, then grow to cover stragglers.
Sphere fit_sphere(std::span<const Vec3> points) {
  auto farthest = [&](const Vec3& from) {
    std::size_t best = 0;
    double d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double di = norm_sq(points[i] - from);
      if (di > d) {
        d = di;
        best = i;
      }
    }
    return points[best];
  };
  const Vec3 y = farthest(points[0]);
  const Vec3 z = farthest(y);
  Sphere s{(y + z) * 0.5, 0.5 * norm(z - y)};
  for (const Vec3& p : points) {
    const double d = norm(p - s.center);
    if (d > s.radius) {
      const double r = 0.5 * (s.radius + d);
      s.center += (p - s.center) * ((r - s.radius) / d);
      s.radius = r;
    }
  }
  for (const Vec3& p : points) s.radius = std::max(s.radius, norm(p - s.center));
  s.radius *= 1.0 + 1e-12;
  return s;
}

Obb fit_obb(std::span<const Vec3> points, double eps) {
  Vec3 mean;
  for (const Vec3& p : points) mean += p;
  mean = mean / static_cast<double>(points.size());
  Mat3 cov;
  for (const Vec3& p : points) cov = cov + outer(p - mean, p - mean);
  const Mat3 axes = symmetric_eigen(cov).vectors;
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = -lo;
  for (const Vec3& p : points) {
    const Vec3 q = axes.transposed() * p;
    lo = min(lo, q);
    hi = max(hi, q);
  }
  const Vec3 center = axes * ((lo + hi) * 0.5);
  const Vec3 half = (hi - lo) * 0.5 + Vec3{eps, eps, eps};
  return Obb{Box::from_axes(center, axes, half)};
}

}  // namespace

BoundingVolume fit_bv(std::span<const Vec3> points, BvType type) {
  if (points.empty()) throw Error(ErrorCode::kDegenerateInput, "cannot fit a volume to no points");
  const double eps = std::max(1e-7 * point_diameter(points), 1e-12);
  switch (type) {
    case BvType::kSphere: {
      Sphere s = fit_sphere(points);
      s.radius = std::max(s.radius, eps);
      return s;
    }
    case BvType::kAabb: {
      Aabb box;
      for (const Vec3& p : points) box.expand(p);
      box.min -= Vec3{eps, eps, eps};
      box.max += Vec3{eps, eps, eps};
      return box;
    }
    case BvType::kObb: return fit_obb(points, eps);
    case BvType::kKdop26: return Kdop26::fit(points, eps);
    case BvType::kConvexHull: return convex_hull_inflated(points);
  }
  throw Error(ErrorCode::kInvalidArgument, "bad bounding volume type");
}

double bv_volume(const BoundingVolume& bv) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Obb>) {
          return v.box.volume();
        } else {
          return v.volume();
        }
      },
      bv);
}

bool bv_contains(const BoundingVolume& bv, const Vec3& p, double tol) {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          return norm(p - v.center) <= v.radius + tol;
        } else if constexpr (std::is_same_v<T, Aabb>) {
          return v.contains(p, tol);
        } else if constexpr (std::is_same_v<T, Obb>) {
          const Vec3 d = p - v.box.center;
          for (const Vec3& g : v.box.generators) {
            const double len = norm(g);
            if (std::abs(dot(d, g) / len) > len + tol) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Kdop26>) {
          const auto& dirs = Kdop26::directions();
          for (int s = 0; s < Kdop26::kSlabs; ++s) {
            const double t = dot(p, dirs[s]);
            if (t < v.slabs[s].lo - tol || t > v.slabs[s].hi + tol) return false;
          }
          return true;
        } else {
          const auto& verts = v.vertices();
          const auto& faces = v.faces();
          const auto& normals = v.face_normals();
          for (std::size_t i = 0; i < faces.size(); ++i) {
            if (dot(p - verts[faces[i][0]], normals[i]) > tol) return false;
          }
          return true;
        }
      },
      bv);
}

ConvexShape to_convex_shape(const BoundingVolume& bv) {
  return std::visit(
      [](const auto& v) -> ConvexShape {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Aabb>) {
          return Box::axis_aligned(v.min, v.max);
        } else if constexpr (std::is_same_v<T, Obb>) {
          return v.box;
        } else {
          return v;
        }
      },
      bv);
}

std::size_t BvhTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const BvhNode& n) { return n.is_leaf(); }));
}

int BvhTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> d(nodes.size(), 1);
  int deepest = 1;
  // Children are always stored after their parent.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes[i].is_leaf()) {
      d[nodes[i].left] = d[i] + 1;
      d[nodes[i].right] = d[i] + 1;
    }
  }
  return deepest;
}

BvhTree build_bvh(const TriMesh& mesh, BvType type, std::uint32_t leaf_capacity) {
  if (mesh.empty()) throw Error(ErrorCode::kEmptyMesh, "cannot build a hierarchy over an empty mesh");
  if (leaf_capacity == 0) throw Error(ErrorCode::kInvalidArgument, "leaf capacity must be positive");
  for (const Vec3& v : mesh.vertices)
    if (!is_finite(v)) throw Error(ErrorCode::kDegenerateInput, "mesh has non-finite vertices");

  BvhTree tree;
  tree.mesh = mesh;
  tree.type = type;
  tree.leaf_capacity = leaf_capacity;
  const std::size_t n = mesh.size();
  tree.triangle_order.resize(n);
  std::iota(tree.triangle_order.begin(), tree.triangle_order.end(), 0u);

  std::vector<Vec3> centroids(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = mesh.triangle(i);
    centroids[i] = (t[0] + t[1] + t[2]) / 3.0;
  }

  struct Pending {
    std::uint32_t node, first, count;
  };
  tree.nodes.push_back({});
  tree.nodes[0].count = static_cast<std::uint32_t>(n);
  std::vector<Pending> stack{{0, 0, static_cast<std::uint32_t>(n)}};
  std::vector<Vec3> points;
  while (!stack.empty()) {
    const Pending job = stack.back();
    stack.pop_back();
    auto begin = tree.triangle_order.begin() + job.first;
    auto end = begin + job.count;

    points.clear();
    for (auto it = begin; it != end; ++it)
      for (std::uint32_t v : mesh.triangles[*it]) points.push_back(mesh.vertices[v]);
    tree.nodes[job.node].bv = fit_bv(points, type);
    tree.nodes[job.node].volume = bv_volume(tree.nodes[job.node].bv);
    tree.nodes[job.node].first = job.first;
    tree.nodes[job.node].count = job.count;
    if (job.count <= leaf_capacity) continue;

    Aabb cbox;
    for (auto it = begin; it != end; ++it) cbox.expand(centroids[*it]);
    const Vec3 e = cbox.extent();
    const int axis = (e.x >= e.y && e.x >= e.z) ? 0 : (e.y >= e.z ? 1 : 2);
    const std::uint32_t half = job.count / 2;
    std::nth_element(begin, begin + half, end, [&](std::uint32_t a, std::uint32_t b) {
      const double ca = centroids[a][axis], cb = centroids[b][axis];
      return ca < cb || (ca == cb && a < b);
    });
    // nth_element leaves each half in an unspecified order; sort for bit-stable output.
    std::sort(begin, begin + half);
    std::sort(begin + half, end);

    const auto left = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes.push_back({});
    tree.nodes[job.node].left = left;
    tree.nodes[job.node].right = left + 1;
    // Right pushed first so the left subtree is processed (and numbered) first.
    stack.push_back({static_cast<std::uint32_t>(left + 1), job.first + half, job.count - half});
    stack.push_back({static_cast<std::uint32_t>(left), job.first, half});
  }
  return tree;
}

double bve(const BvhTree& tree) {
  const double v = tree.mesh.signed_volume();
  if (!(v > 0.0)) throw Error(ErrorCode::kOpenMesh, "mesh does not enclose a positive volume");
  double total = 0.0;
  for (const BvhNode& n : tree.nodes)
    if (n.is_leaf()) total += n.volume;
  return total / v;
}

}  // namespace pcd
