#include "pcd/hull.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "pcd/errors.hpp"

namespace pcd {
namespace {

struct Face {
  std::array<std::uint32_t, 3> v;
  std::array<int, 3> nb{-1, -1, -1};  // nb[i] lies across edge (v[i], v[i+1])
  Vec3 n;
  double off = 0.0;
  std::vector<std::uint32_t> outside;
  bool alive = true;
};

class QuickHull {
 public:
  explicit QuickHull(std::span<const Vec3> pts) : pts_(pts) {
    Vec3 lo = pts[0], hi = pts[0];
    double max_coord = 0.0;
    for (const Vec3& p : pts) {
      lo = min(lo, p);
      hi = max(hi, p);
      max_coord = std::max({max_coord, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    }
    diam_ = norm(hi - lo);
    eps_ = std::max(1e-11 * diam_, 1e-13 * max_coord);
    degenerate_tol_ = std::max(1e-10 * diam_, 2.0 * eps_);
  }

  double eps() const { return eps_; }
  double diameter() const { return diam_; }
  const std::vector<Face>& faces() const { return faces_; }

  void run() {
    build_simplex();
    std::vector<int> stack;
    for (int i = 0; i < static_cast<int>(faces_.size()); ++i) stack.push_back(i);
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      if (!faces_[f].alive || faces_[f].outside.empty()) continue;
      const std::size_t before = faces_.size();
      add_point(f);
      for (std::size_t i = before; i < faces_.size(); ++i) stack.push_back(static_cast<int>(i));
    }
  }

 private:
  double dist(const Face& f, std::uint32_t p) const { return dot(f.n, pts_[p]) - f.off; }

  int make_face(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    Face f;
    f.v = {a, b, c};
    const Vec3 n = cross(pts_[b] - pts_[a], pts_[c] - pts_[a]);
    const double len = norm(n);
    f.n = len > 0.0 ? n / len : Vec3{};
    f.off = dot(f.n, pts_[a]);
    faces_.push_back(std::move(f));
    return static_cast<int>(faces_.size()) - 1;
  }

  void build_simplex() {
    const std::size_t n = pts_.size();
    if (n < 4) throw Error(ErrorCode::kDegenerateInput, "hull needs at least 4 points");
    std::array<std::uint32_t, 6> ext{};
    for (int axis = 0; axis < 3; ++axis) {
      for (std::uint32_t i = 0; i < n; ++i) {
        if (pts_[i][axis] < pts_[ext[2 * axis]][axis]) ext[2 * axis] = i;
        if (pts_[i][axis] > pts_[ext[2 * axis + 1]][axis]) ext[2 * axis + 1] = i;
      }
    }
    std::uint32_t i0 = 0, i1 = 0;
    double best = -1.0;
    for (int a = 0; a < 6; ++a)
      for (int b = a + 1; b < 6; ++b) {
        const double d = norm_sq(pts_[ext[a]] - pts_[ext[b]]);
        if (d > best) best = d, i0 = ext[a], i1 = ext[b];
      }
    if (std::sqrt(best) <= degenerate_tol_) {
      throw Error(ErrorCode::kDegenerateInput, "points are coincident");
    }
    const Vec3 axis = normalized(pts_[i1] - pts_[i0]);
    std::uint32_t i2 = 0;
    best = -1.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const double d = norm(cross(pts_[i] - pts_[i0], axis));
      if (d > best) best = d, i2 = i;
    }
    if (best <= degenerate_tol_) throw Error(ErrorCode::kDegenerateInput, "points are collinear");
    const Vec3 pn = normalized(cross(pts_[i1] - pts_[i0], pts_[i2] - pts_[i0]));
    std::uint32_t i3 = 0;
    best = -1.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      const double d = std::abs(dot(pts_[i] - pts_[i0], pn));
      if (d > best) best = d, i3 = i;
    }
    if (best <= degenerate_tol_) throw Error(ErrorCode::kDegenerateInput, "points are coplanar");

    const std::array<std::uint32_t, 4> tet{i0, i1, i2, i3};
    constexpr int kFaces[4][4] = {{0, 1, 2, 3}, {0, 3, 1, 2}, {0, 2, 3, 1}, {1, 3, 2, 0}};
    for (const auto& fv : kFaces) {
      std::uint32_t a = tet[fv[0]], b = tet[fv[1]], c = tet[fv[2]];
      const Vec3 nn = cross(pts_[b] - pts_[a], pts_[c] - pts_[a]);
      if (dot(nn, pts_[tet[fv[3]]] - pts_[a]) > 0.0) std::swap(b, c);
      make_face(a, b, c);
    }
    link_all();
    for (std::uint32_t i = 0; i < n; ++i) {
      if (i == i0 || i == i1 || i == i2 || i == i3) continue;
      assign(i, 0, 4);
    }
  }

  void link_all() {
    std::unordered_map<std::uint64_t, std::pair<int, int>> edges;
    auto key = [](std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; };
    for (int f = 0; f < static_cast<int>(faces_.size()); ++f)
      for (int e = 0; e < 3; ++e) edges[key(faces_[f].v[e], faces_[f].v[(e + 1) % 3])] = {f, e};
    for (int f = 0; f < static_cast<int>(faces_.size()); ++f)
      for (int e = 0; e < 3; ++e) {
        auto it = edges.find(key(faces_[f].v[(e + 1) % 3], faces_[f].v[e]));
        faces_[f].nb[e] = it->second.first;
      }
  }

  // Assigns point p to the face in [first, last) it lies farthest outside of, if any.
  void assign(std::uint32_t p, std::size_t first, std::size_t last) {
    int best_face = -1;
    double best = eps_;
    for (std::size_t f = first; f < last; ++f) {
      if (!faces_[f].alive) continue;
      const double d = dist(faces_[f], p);
      if (d > best) best = d, best_face = static_cast<int>(f);
    }
    if (best_face >= 0) faces_[best_face].outside.push_back(p);
  }

  void add_point(int start) {
    const Face& sf = faces_[start];
    std::uint32_t eye = sf.outside.front();
    double best = -1.0;
    for (std::uint32_t p : sf.outside) {
      const double d = dist(sf, p);
      if (d > best) best = d, eye = p;
    }

    std::vector<int> visible{start};
    std::vector<std::pair<int, int>> horizon;  // (visible face, edge index)
    ++epoch_;
    visited_.resize(faces_.size(), 0);
    const std::uint64_t vis = 2 * epoch_, hid = 2 * epoch_ + 1;
    visited_[start] = vis;
    for (std::size_t k = 0; k < visible.size(); ++k) {
      const int f = visible[k];
      for (int e = 0; e < 3; ++e) {
        const int g = faces_[f].nb[e];
        if (visited_[g] == vis) continue;
        if (visited_[g] == hid || dist(faces_[g], eye) <= eps_) {
          visited_[g] = hid;
          horizon.emplace_back(f, e);
          continue;
        }
        visited_[g] = vis;
        visible.push_back(g);
      }
    }

    const std::size_t first_new = faces_.size();
    std::unordered_map<std::uint32_t, int> by_start, by_end;
    for (const auto& [f, e] : horizon) {
      const std::uint32_t u = faces_[f].v[e];
      const std::uint32_t w = faces_[f].v[(e + 1) % 3];
      const int other = faces_[f].nb[e];
      const int nf = make_face(u, w, eye);
      faces_[nf].nb[0] = other;
      for (int oe = 0; oe < 3; ++oe) {
        if (faces_[other].v[oe] == w && faces_[other].v[(oe + 1) % 3] == u) faces_[other].nb[oe] = nf;
      }
      if (!by_start.emplace(u, nf).second || !by_end.emplace(w, nf).second) {
        throw Error(ErrorCode::kDegenerateInput, "hull horizon is not a simple cycle");
      }
    }
    for (std::size_t nf = first_new; nf < faces_.size(); ++nf) {
      Face& f = faces_[nf];
      auto s = by_start.find(f.v[1]);
      auto t = by_end.find(f.v[0]);
      if (s == by_start.end() || t == by_end.end()) {
        throw Error(ErrorCode::kDegenerateInput, "hull horizon is not a closed cycle");
      }
      f.nb[1] = s->second;
      f.nb[2] = t->second;
    }

    std::vector<std::uint32_t> orphans;
    for (int f : visible) {
      faces_[f].alive = false;
      for (std::uint32_t p : faces_[f].outside)
        if (p != eye) orphans.push_back(p);
      faces_[f].outside.clear();
      faces_[f].outside.shrink_to_fit();
    }
    for (std::uint32_t p : orphans) assign(p, first_new, faces_.size());
  }

  std::span<const Vec3> pts_;
  std::vector<Face> faces_;
  std::vector<std::uint64_t> visited_;
  std::uint64_t epoch_ = 0;
  double diam_ = 0.0;
  double eps_ = 0.0;
  double degenerate_tol_ = 0.0;
};

double distance_to_line(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len = norm(ab);
  if (len == 0.0) return norm(p - a);
  return norm(cross(p - a, ab)) / len;
}

// Merges coplanar facets, drops vertices that are not corners and fan-triangulates
// every facet from its lowest-index corner.
std::vector<Triangle> canonical_facets(std::span<const Vec3> pts, const std::vector<Face>& faces,
                                       double plane_eps) {
  std::vector<int> alive;
  std::vector<int> compact(faces.size(), -1);
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    if (faces[f].alive) {
      compact[f] = static_cast<int>(alive.size());
      alive.push_back(f);
    }
  }
  const int nf = static_cast<int>(alive.size());
  std::vector<int> group(nf, -1);
  std::vector<std::vector<int>> groups;
  for (int s = 0; s < nf; ++s) {
    if (group[s] >= 0) continue;
    const Face& seed = faces[alive[s]];
    const int gid = static_cast<int>(groups.size());
    groups.push_back({s});
    group[s] = gid;
    for (std::size_t k = 0; k < groups[gid].size(); ++k) {
      const Face& f = faces[alive[groups[gid][k]]];
      for (int e = 0; e < 3; ++e) {
        const int g = compact[f.nb[e]];
        if (group[g] >= 0) continue;
        const Face& cand = faces[alive[g]];
        if (dot(cand.n, seed.n) <= 0.0) continue;
        bool coplanar = true;
        for (std::uint32_t v : cand.v) coplanar &= std::abs(dot(seed.n, pts[v]) - seed.off) <= plane_eps;
        if (!coplanar) continue;
        group[g] = gid;
        groups[gid].push_back(g);
      }
    }
  }

  // Boundary cycle per group; empty when the group boundary is not a single loop.
  std::vector<std::vector<std::uint32_t>> cycles(groups.size());
  for (std::size_t gid = 0; gid < groups.size(); ++gid) {
    if (groups[gid].size() == 1) {
      const auto& v = faces[alive[groups[gid][0]]].v;
      cycles[gid] = {v[0], v[1], v[2]};
      continue;
    }
    std::unordered_map<std::uint32_t, std::uint32_t> next;
    bool simple = true;
    for (int t : groups[gid]) {
      const Face& f = faces[alive[t]];
      for (int e = 0; e < 3; ++e) {
        if (group[compact[f.nb[e]]] == static_cast<int>(gid)) continue;
        simple &= next.emplace(f.v[e], f.v[(e + 1) % 3]).second;
      }
    }
    if (!simple || next.empty()) continue;
    std::vector<std::uint32_t> cycle;
    std::uint32_t start = next.begin()->first, cur = start;
    do {
      cycle.push_back(cur);
      auto it = next.find(cur);
      if (it == next.end() || cycle.size() > next.size()) break;
      cur = it->second;
    } while (cur != start);
    if (cur == start && cycle.size() == next.size()) cycles[gid] = std::move(cycle);
  }

  // A vertex lying on the segment between its cycle neighbours is not a corner;
  // it is removed only if that holds in every facet it bounds.
  std::unordered_map<std::uint32_t, int> appearances, flat;
  for (const auto& cycle : cycles) {
    const std::size_t m = cycle.size();
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t v = cycle[i];
      ++appearances[v];
      const Vec3& p = pts[cycle[(i + m - 1) % m]];
      const Vec3& q = pts[cycle[(i + 1) % m]];
      if (m > 3 && distance_to_line(pts[v], p, q) <= plane_eps && dot(pts[v] - p, q - pts[v]) > 0.0) {
        ++flat[v];
      }
    }
  }
  // Vertices of groups that fell back to raw triangles must survive.
  for (std::size_t gid = 0; gid < groups.size(); ++gid) {
    if (!cycles[gid].empty()) continue;
    for (int t : groups[gid])
      for (std::uint32_t v : faces[alive[t]].v) ++appearances[v];
  }

  std::vector<Triangle> out;
  for (std::size_t gid = 0; gid < groups.size(); ++gid) {
    if (cycles[gid].empty()) {
      for (int t : groups[gid]) out.push_back(faces[alive[t]].v);
      continue;
    }
    std::vector<std::uint32_t> poly;
    for (std::uint32_t v : cycles[gid]) {
      auto it = flat.find(v);
      if (it != flat.end() && it->second == appearances[v]) continue;
      poly.push_back(v);
    }
    if (poly.size() < 3) continue;
    std::rotate(poly.begin(), std::min_element(poly.begin(), poly.end()), poly.end());
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) out.push_back({poly[0], poly[i], poly[i + 1]});
  }
  return out;
}

}  // namespace

HullResult convex_hull_indexed(std::span<const Vec3> points) {
  for (const Vec3& p : points)
    if (!is_finite(p)) throw Error(ErrorCode::kDegenerateInput, "non-finite hull input");
  if (points.size() < 4) throw Error(ErrorCode::kDegenerateInput, "hull needs at least 4 points");
  QuickHull qh(points);
  qh.run();
  std::vector<Triangle> tris = canonical_facets(points, qh.faces(), 10.0 * qh.eps());

  std::vector<std::uint32_t> used;
  for (const Triangle& t : tris) used.insert(used.end(), t.begin(), t.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  std::vector<Vec3> verts;
  verts.reserve(used.size());
  for (std::uint32_t i = 0; i < used.size(); ++i) {
    remap[used[i]] = i;
    verts.push_back(points[used[i]]);
  }
  for (Triangle& t : tris)
    for (auto& v : t) v = remap[v];
  HullResult r;
  r.polytope = ConvexPolytope(std::move(verts), std::move(tris));
  r.source_index = std::move(used);
  return r;
}

ConvexPolytope convex_hull(std::span<const Vec3> points) {
  return convex_hull_indexed(points).polytope;
}

ConvexPolytope convex_hull_inflated(std::span<const Vec3> points, double rel_eps) {
  if (points.empty()) throw Error(ErrorCode::kDegenerateInput, "empty point set");
  try {
    return convex_hull(points);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateInput) throw;
  }
  Vec3 lo = points[0], hi = points[0], mean;
  for (const Vec3& p : points) {
    lo = min(lo, p);
    hi = max(hi, p);
    mean += p;
  }
  mean = mean / static_cast<double>(points.size());
  double diam = norm(hi - lo);
  if (diam == 0.0) diam = std::max({std::abs(lo.x), std::abs(lo.y), std::abs(lo.z), 1.0});
  const double eps = rel_eps * diam;

  Mat3 cov;
  for (const Vec3& p : points) cov = cov + outer(p - mean, p - mean);
  const SymmetricEigen eig = symmetric_eigen(cov);
  std::vector<Vec3> thin_axes;
  for (int a = 0; a < 3; ++a) {
    const Vec3 axis = eig.vectors.col(a);
    double pmin = std::numeric_limits<double>::infinity(), pmax = -pmin;
    for (const Vec3& p : points) {
      pmin = std::min(pmin, dot(p, axis));
      pmax = std::max(pmax, dot(p, axis));
    }
    if (pmax - pmin < 2.0 * eps) thin_axes.push_back(axis);
  }
  if (thin_axes.empty()) thin_axes.push_back(eig.vectors.col(0));
  std::vector<Vec3> thick;
  const std::size_t combos = std::size_t{1} << thin_axes.size();
  thick.reserve(points.size() * combos);
  for (const Vec3& p : points) {
    for (std::size_t mask = 0; mask < combos; ++mask) {
      Vec3 q = p;
      for (std::size_t a = 0; a < thin_axes.size(); ++a) q += thin_axes[a] * ((mask >> a) & 1 ? eps : -eps);
      thick.push_back(q);
    }
  }
  return convex_hull(thick);
}

}  // namespace pcd
