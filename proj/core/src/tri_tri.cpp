#include "pcd/tri_tri.hpp"

#include <algorithm>
#include <cmath>

namespace pcd {
namespace {

double max_edge(const Tri& t) {
  return std::max({norm(t[1] - t[0]), norm(t[2] - t[1]), norm(t[0] - t[2])});
}

// Signed distances (scaled by |n|) of t's corners to the plane through p with normal n.
std::array<double, 3> plane_side(const Vec3& n, const Vec3& p, const Tri& t, double eps) {
  std::array<double, 3> d;
  for (int i = 0; i < 3; ++i) {
    d[i] = dot(n, t[i] - p);
    if (std::abs(d[i]) < eps) d[i] = 0.0;
  }
  return d;
}

bool same_side_strict(const std::array<double, 3>& d) {
  return (d[0] > 0.0 && d[1] > 0.0 && d[2] > 0.0) || (d[0] < 0.0 && d[1] < 0.0 && d[2] < 0.0);
}

struct Point2 {
  double x, y;
};

double orient2(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_cross(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
  const double d1 = orient2(q1, q2, p1), d2 = orient2(q1, q2, p2);
  const double d3 = orient2(p1, p2, q1), d4 = orient2(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  return (d1 == 0 && on_segment(q1, q2, p1)) || (d2 == 0 && on_segment(q1, q2, p2)) ||
         (d3 == 0 && on_segment(p1, p2, q1)) || (d4 == 0 && on_segment(p1, p2, q2));
}

bool inside_triangle(const Point2& p, const std::array<Point2, 3>& t) {
  const double a = orient2(t[0], t[1], p), b = orient2(t[1], t[2], p), c = orient2(t[2], t[0], p);
  return (a >= 0 && b >= 0 && c >= 0) || (a <= 0 && b <= 0 && c <= 0);
}

bool coplanar_overlap(const Vec3& n, const Tri& a, const Tri& b) {
  // Drop the dominant normal axis and test in 2D.
  const Vec3 an{std::abs(n.x), std::abs(n.y), std::abs(n.z)};
  int i0 = 1, i1 = 2;
  if (an.y >= an.x && an.y >= an.z) {
    i0 = 0;
    i1 = 2;
  } else if (an.z >= an.x && an.z >= an.y) {
    i0 = 0;
    i1 = 1;
  }
  std::array<Point2, 3> pa, pb;
  for (int i = 0; i < 3; ++i) {
    pa[i] = {a[i][i0], a[i][i1]};
    pb[i] = {b[i][i0], b[i][i1]};
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (segments_cross(pa[i], pa[(i + 1) % 3], pb[j], pb[(j + 1) % 3])) return true;
  return inside_triangle(pa[0], pb) || inside_triangle(pb[0], pa);
}

// Interval of the line L = plane(a) ^ plane(b) covered by triangle t, given the
// projections `p` of its corners on L and their plane distances `d`.
void line_interval(const std::array<double, 3>& p, const std::array<double, 3>& d, double& lo,
                   double& hi) {
  // Pick the corner alone on its side of the plane (or on it).
  int k;
  if (d[0] * d[1] > 0.0) {
    k = 2;
  } else if (d[0] * d[2] > 0.0) {
    k = 1;
  } else if (d[1] * d[2] > 0.0 || d[0] != 0.0) {
    k = 0;
  } else if (d[1] != 0.0) {
    k = 1;
  } else {
    k = 2;
  }
  const int i = (k + 1) % 3, j = (k + 2) % 3;
  auto cut = [&](int u) {
    const double denom = d[k] - d[u];
    return denom == 0.0 ? p[u] : p[k] + (p[u] - p[k]) * d[k] / denom;
  };
  const double t1 = cut(i), t2 = cut(j);
  lo = std::min(t1, t2);
  hi = std::max(t1, t2);
}

}  // namespace

bool tri_tri_intersect(const Tri& a, const Tri& b) {
  const double scale = std::max(max_edge(a), max_edge(b));
  const Vec3 nb = cross(b[1] - b[0], b[2] - b[0]);
  const auto da = plane_side(nb, b[0], a, 1e-12 * norm(nb) * scale);
  if (same_side_strict(da)) return false;
  const Vec3 na = cross(a[1] - a[0], a[2] - a[0]);
  const auto db = plane_side(na, a[0], b, 1e-12 * norm(na) * scale);
  if (same_side_strict(db)) return false;

  if (da[0] == 0.0 && da[1] == 0.0 && da[2] == 0.0) return coplanar_overlap(na, a, b);

  const Vec3 dir = cross(na, nb);
  const Vec3 ad{std::abs(dir.x), std::abs(dir.y), std::abs(dir.z)};
  const int axis = (ad.x >= ad.y && ad.x >= ad.z) ? 0 : (ad.y >= ad.z ? 1 : 2);
  const std::array<double, 3> pa{a[0][axis], a[1][axis], a[2][axis]};
  const std::array<double, 3> pb{b[0][axis], b[1][axis], b[2][axis]};
  double a_lo, a_hi, b_lo, b_hi;
  line_interval(pa, da, a_lo, a_hi);
  line_interval(pb, db, b_lo, b_hi);
  return a_lo <= b_hi && b_lo <= a_hi;
}

Vec3 closest_point_on_triangle(const Vec3& p, const Tri& t) {
  const Vec3& a = t[0];
  const Vec3& b = t[1];
  const Vec3& c = t[2];
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));
  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  const double denom = va + vb + vc;
  if (denom == 0.0) {
    // Degenerate triangle: fall back to its edges.
    Vec3 best = a;
    double bd = norm_sq(p - a);
    for (int e = 0; e < 3; ++e) {
      const Vec3 s = t[e], d = t[(e + 1) % 3] - t[e];
      const double dd = norm_sq(d);
      const double u = dd > 0.0 ? std::clamp(dot(p - s, d) / dd, 0.0, 1.0) : 0.0;
      const Vec3 q = s + d * u;
      if (norm_sq(p - q) < bd) {
        bd = norm_sq(p - q);
        best = q;
      }
    }
    return best;
  }
  return a + ab * (vb / denom) + ac * (vc / denom);
}

double segment_segment_distance_sq(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
  const Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
  const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
  double s = 0.0, t = 0.0;
  if (a <= 0.0 && e <= 0.0) return norm_sq(r);
  if (a <= 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = dot(d1, r);
    if (e <= 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = dot(d1, d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return norm_sq((p0 + d1 * s) - (q0 + d2 * t));
}

double tri_tri_distance(const Tri& a, const Tri& b) {
  if (tri_tri_intersect(a, b)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    best = std::min(best, norm_sq(a[i] - closest_point_on_triangle(a[i], b)));
    best = std::min(best, norm_sq(b[i] - closest_point_on_triangle(b[i], a)));
    for (int j = 0; j < 3; ++j) {
      best = std::min(best, segment_segment_distance_sq(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3]));
    }
  }
  return std::sqrt(best);
}

}  // namespace pcd
