#include "pcd/convex.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_map>

#include "pcd/errors.hpp"
#include "pcd/hull.hpp"

namespace pcd {

ConvexPolytope::ConvexPolytope(std::vector<Vec3> vertices, std::vector<Triangle> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  normals_.reserve(faces_.size());
  for (const Triangle& f : faces_) {
    const Vec3 n = cross(vertices_[f[1]] - vertices_[f[0]], vertices_[f[2]] - vertices_[f[0]]);
    const double len = norm(n);
    normals_.push_back(len > 0.0 ? n / len : Vec3{});
  }
}

double ConvexPolytope::volume() const {
  if (faces_.empty()) return 0.0;
  // Tetrahedra against the vertex centroid keep the sum well conditioned far from the origin.
  const Vec3 c = centroid_of_vertices();
  double v = 0.0;
  for (const Triangle& f : faces_) {
    v += dot(vertices_[f[0]] - c, cross(vertices_[f[1]] - c, vertices_[f[2]] - c));
  }
  return v / 6.0;
}

double ConvexPolytope::surface_area() const {
  double a = 0.0;
  for (const Triangle& f : faces_) {
    a += 0.5 * norm(cross(vertices_[f[1]] - vertices_[f[0]], vertices_[f[2]] - vertices_[f[0]]));
  }
  return a;
}

double ConvexPolytope::diameter() const {
  if (vertices_.empty()) return 0.0;
  Vec3 lo = vertices_[0], hi = vertices_[0];
  for (const Vec3& v : vertices_) {
    lo = min(lo, v);
    hi = max(hi, v);
  }
  return norm(hi - lo);
}

Vec3 ConvexPolytope::centroid_of_vertices() const {
  Vec3 c;
  for (const Vec3& v : vertices_) c += v;
  return vertices_.empty() ? c : c / static_cast<double>(vertices_.size());
}

ConvexPolytope ConvexPolytope::translated(const Vec3& t) const {
  ConvexPolytope out = *this;
  for (Vec3& v : out.vertices_) v += t;
  return out;
}

ConvexPolytope ConvexPolytope::negated() const {
  ConvexPolytope out = *this;
  for (Vec3& v : out.vertices_) v = -v;
  // Reflection flips orientation; swapping two indices restores outward winding.
  for (Triangle& f : out.faces_) std::swap(f[1], f[2]);
  for (Vec3& n : out.normals_) n = -n;
  return out;
}

PolytopeCheck check_polytope(const ConvexPolytope& p, double rel_tol) {
  PolytopeCheck r;
  const auto& verts = p.vertices();
  const auto& faces = p.faces();
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (const Triangle& f : faces)
    for (int e = 0; e < 3; ++e) ++directed[{f[e], f[(e + 1) % 3]}];
  r.closed = !faces.empty();
  for (const auto& [edge, count] : directed) {
    auto twin = directed.find({edge.second, edge.first});
    if (count != 1 || twin == directed.end() || twin->second != 1) {
      r.closed = false;
      r.message = "edge not shared by exactly two oppositely oriented faces";
      break;
    }
  }
  const int edges = static_cast<int>(directed.size() / 2);
  std::vector<char> used(verts.size(), 0);
  for (const Triangle& f : faces)
    for (auto v : f) used[v] = 1;
  const int nv = static_cast<int>(std::count(used.begin(), used.end(), 1));
  r.euler = nv - edges + static_cast<int>(faces.size());

  const double tol = rel_tol * p.diameter();
  r.convex = true;
  r.unit_normals = true;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const Vec3& n = p.face_normals()[i];
    if (std::abs(norm(n) - 1.0) > 1e-9) {
      r.unit_normals = false;
      r.message = "face normal not unit length";
    }
    const double off = dot(n, verts[faces[i][0]]);
    for (const Vec3& v : verts) {
      if (dot(n, v) - off > tol) {
        r.convex = false;
        r.message = "vertex outside a face plane";
        break;
      }
    }
  }
  return r;
}

Box Box::from_axes(const Vec3& center, const Mat3& axes, const Vec3& half_extents) {
  Box b;
  b.center = center;
  for (int i = 0; i < 3; ++i) b.generators[i] = axes.col(i) * half_extents[i];
  return b;
}

Box Box::axis_aligned(const Vec3& lo, const Vec3& hi) {
  return from_axes((lo + hi) * 0.5, Mat3::identity(), (hi - lo) * 0.5);
}

double Box::volume() const {
  return 8.0 * std::abs(dot(generators[0], cross(generators[1], generators[2])));
}

std::array<Vec3, 8> Box::corners() const {
  std::array<Vec3, 8> c;
  for (int m = 0; m < 8; ++m) {
    Vec3 p = center;
    for (int i = 0; i < 3; ++i) p += generators[i] * ((m >> i) & 1 ? 1.0 : -1.0);
    c[m] = p;
  }
  return c;
}

ConvexPolytope Box::to_polytope() const {
  const auto c = corners();
  return convex_hull_inflated(c);
}

const std::array<Vec3, Kdop26::kSlabs>& Kdop26::directions() {
  static const std::array<Vec3, kSlabs> dirs = [] {
    const double r2 = 1.0 / std::sqrt(2.0), r3 = 1.0 / std::sqrt(3.0);
    return std::array<Vec3, kSlabs>{
        Vec3{1, 0, 0},          Vec3{0, 1, 0},         Vec3{0, 0, 1},
        Vec3{r2, r2, 0},        Vec3{r2, -r2, 0},      Vec3{r2, 0, r2},
        Vec3{r2, 0, -r2},       Vec3{0, r2, r2},       Vec3{0, r2, -r2},
        Vec3{r3, r3, r3},       Vec3{r3, r3, -r3},     Vec3{r3, -r3, r3},
        Vec3{-r3, r3, r3},
    };
  }();
  return dirs;
}

Kdop26 Kdop26::fit(std::span<const Vec3> points, double inflate) {
  if (points.empty()) throw Error(ErrorCode::kDegenerateShape, "k-DOP fit of empty point set");
  Kdop26 k;
  const auto& dirs = directions();
  for (int s = 0; s < kSlabs; ++s) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec3& p : points) {
      const double t = dot(p, dirs[s]);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    k.slabs[s] = {lo - inflate, hi + inflate};
  }
  return k;
}

Kdop26 Kdop26::negated() const {
  Kdop26 k;
  for (int s = 0; s < kSlabs; ++s) k.slabs[s] = {-slabs[s].hi, -slabs[s].lo};
  return k;
}

Kdop26 Kdop26::translated(const Vec3& t) const {
  Kdop26 k;
  const auto& dirs = directions();
  for (int s = 0; s < kSlabs; ++s) {
    const double o = dot(t, dirs[s]);
    k.slabs[s] = {slabs[s].lo + o, slabs[s].hi + o};
  }
  return k;
}

ConvexPolytope Kdop26::to_polytope() const {
  // Candidate vertices are intersections of plane triples that satisfy all slabs.
  const auto& dirs = directions();
  std::array<Vec3, 2 * kSlabs> normals;
  std::array<double, 2 * kSlabs> offsets;
  double scale = 0.0;
  for (int s = 0; s < kSlabs; ++s) {
    if (slabs[s].lo > slabs[s].hi) throw Error(ErrorCode::kDegenerateShape, "inverted k-DOP slab");
    normals[2 * s] = dirs[s];
    offsets[2 * s] = slabs[s].hi;
    normals[2 * s + 1] = -dirs[s];
    offsets[2 * s + 1] = -slabs[s].lo;
    scale = std::max({scale, std::abs(slabs[s].lo), std::abs(slabs[s].hi)});
  }
  double width = std::numeric_limits<double>::infinity();
  for (const Interval& iv : slabs) width = std::min(width, iv.hi - iv.lo);
  const double tol = 1e-12 * std::max(scale, 1e-300) + 1e-9 * width;
  std::vector<Vec3> pts;
  constexpr int kPlanes = 2 * kSlabs;
  for (int i = 0; i < kPlanes; ++i)
    for (int j = i + 1; j < kPlanes; ++j) {
      if (j == (i ^ 1)) continue;
      const Vec3 cij = cross(normals[i], normals[j]);
      for (int k = j + 1; k < kPlanes; ++k) {
        if (k == (i ^ 1) || k == (j ^ 1)) continue;
        const double det = dot(normals[k], cij);
        if (std::abs(det) < 1e-9) continue;
        const Vec3 x = (cross(normals[j], normals[k]) * offsets[i] + cross(normals[k], normals[i]) * offsets[j] +
                        cij * offsets[k]) / det;
        bool inside = true;
        for (int q = 0; q < kPlanes && inside; ++q) inside = dot(normals[q], x) <= offsets[q] + tol;
        if (inside) pts.push_back(x);
      }
    }
  std::sort(pts.begin(), pts.end(), [](const Vec3& a, const Vec3& b) {
    return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 4) throw Error(ErrorCode::kDegenerateShape, "k-DOP slabs do not bound a solid");
  try {
    return convex_hull(pts);
  } catch (const Error& e) {
    throw Error(ErrorCode::kDegenerateShape, std::string("k-DOP is flat: ") + e.what());
  }
}

Vec3 support(const ConvexPolytope& shape, const Vec3& d) {
  const auto& v = shape.vertices();
  if (v.empty()) throw Error(ErrorCode::kDegenerateShape, "support of empty polytope");
  if (d == Vec3{}) throw Error(ErrorCode::kInvalidArgument, "zero support direction");
  std::size_t best = 0;
  double best_val = dot(v[0], d);
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double val = dot(v[i], d);
    if (val > best_val) best_val = val, best = i;
  }
  return v[best];
}

Vec3 support(const Sphere& shape, const Vec3& d) {
  const double len = norm(d);
  if (!(len > 0.0)) throw Error(ErrorCode::kInvalidArgument, "zero support direction");
  return shape.center + d * (shape.radius / len);
}

Vec3 support(const Box& shape, const Vec3& d) {
  if (d == Vec3{}) throw Error(ErrorCode::kInvalidArgument, "zero support direction");
  Vec3 p = shape.center;
  for (const Vec3& g : shape.generators) p += dot(g, d) >= 0.0 ? g : -g;
  return p;
}

Vec3 support(const Kdop26& shape, const Vec3& d) { return support(shape.to_polytope(), d); }

Vec3 support(const ConvexShape& shape, const Vec3& d) {
  return std::visit([&](const auto& s) { return support(s, d); }, shape);
}

ConvexPolytope apply_linear(const ConvexPolytope& shape, const Mat3& t) {
  const double det = t.determinant();
  if (!is_finite(t) || !(std::abs(det) > 1e-14 * std::pow(max_abs(t), 3))) {
    throw Error(ErrorCode::kSingularTransform, "linear map is singular");
  }
  std::vector<Vec3> v;
  v.reserve(shape.vertices().size());
  for (const Vec3& p : shape.vertices()) v.push_back(t * p);
  std::vector<Triangle> f = shape.faces();
  if (det < 0.0)
    for (Triangle& tri : f) std::swap(tri[1], tri[2]);
  return ConvexPolytope(std::move(v), std::move(f));
}

Box apply_linear(const Box& shape, const Mat3& t) {
  if (!is_finite(t) || !(std::abs(t.determinant()) > 1e-14 * std::pow(max_abs(t), 3))) {
    throw Error(ErrorCode::kSingularTransform, "linear map is singular");
  }
  Box b;
  b.center = t * shape.center;
  for (int i = 0; i < 3; ++i) b.generators[i] = t * shape.generators[i];
  return b;
}

ConvexPolytope apply_linear(const Kdop26& shape, const Mat3& t) {
  return apply_linear(shape.to_polytope(), t);
}

ConvexPolytope icosphere(int subdivisions) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
                         {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
                         {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (Vec3& p : v) p = normalized(p);
  std::vector<Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back(normalized((v[a] + v[b]) * 0.5));
      const auto idx = static_cast<std::uint32_t>(v.size() - 1);
      mid.emplace(key, idx);
      return idx;
    };
    std::vector<Triangle> next;
    for (const Triangle& t : f) {
      const auto a = midpoint(t[0], t[1]), b = midpoint(t[1], t[2]), c = midpoint(t[2], t[0]);
      next.push_back({t[0], a, c});
      next.push_back({t[1], b, a});
      next.push_back({t[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  return ConvexPolytope(std::move(v), std::move(f));
}

ConvexPolytope circumscribed_icosphere(const Sphere& sphere) {
  static const ConvexPolytope unit = [] {
    ConvexPolytope p = icosphere(2);
    double inradius = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.faces().size(); ++i) {
      inradius = std::min(inradius, dot(p.face_normals()[i], p.vertices()[p.faces()[i][0]]));
    }
    return apply_linear(p, (1.0 / inradius) * Mat3::identity());
  }();
  const double r = sphere.radius;
  return apply_linear(unit, Mat3::diag(r, r, r)).translated(sphere.center);
}

ConvexPolytope to_polytope(const ConvexShape& shape) {
  struct Visitor {
    ConvexPolytope operator()(const Sphere& s) const { return circumscribed_icosphere(s); }
    ConvexPolytope operator()(const Box& b) const { return b.to_polytope(); }
    ConvexPolytope operator()(const Kdop26& k) const { return k.to_polytope(); }
    ConvexPolytope operator()(const ConvexPolytope& p) const { return p; }
  };
  return std::visit(Visitor{}, shape);
}

}  // namespace pcd
