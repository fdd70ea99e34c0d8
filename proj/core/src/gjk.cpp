#include "pcd/gjk.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>

#include "pcd/errors.hpp"

namespace pcd {
namespace {

struct Simplex {
  std::array<Vec3, 4> w;
  int size = 0;
};

// Closest point to the origin of the affine hull of the points selected by `mask`,
// as barycentric weights. Returns false when the subset is affinely degenerate.
bool affine_closest(const Simplex& s, unsigned mask, std::array<double, 4>& lambda) {
  std::array<int, 4> idx{};
  int k = 0;
  for (int i = 0; i < s.size; ++i)
    if (mask & (1u << i)) idx[k++] = i;
  lambda.fill(0.0);
  if (k == 1) {
    lambda[idx[0]] = 1.0;
    return true;
  }
  const Vec3& w0 = s.w[idx[0]];
  const int m = k - 1;
  double g[3][3], r[3];
  for (int i = 0; i < m; ++i) {
    const Vec3 ei = s.w[idx[i + 1]] - w0;
    r[i] = -dot(ei, w0);
    for (int j = 0; j < m; ++j) g[i][j] = dot(ei, s.w[idx[j + 1]] - w0);
  }
  // Gaussian elimination with partial pivoting on the (at most 3x3) Gram system.
  double x[3];
  double scale = 0.0;
  for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(g[i][i]));
  for (int c = 0; c < m; ++c) {
    int p = c;
    for (int i = c + 1; i < m; ++i)
      if (std::abs(g[i][c]) > std::abs(g[p][c])) p = i;
    if (std::abs(g[p][c]) <= 1e-14 * scale) return false;
    if (p != c) {
      for (int j = 0; j < m; ++j) std::swap(g[p][j], g[c][j]);
      std::swap(r[p], r[c]);
    }
    for (int i = c + 1; i < m; ++i) {
      const double f = g[i][c] / g[c][c];
      for (int j = c; j < m; ++j) g[i][j] -= f * g[c][j];
      r[i] -= f * r[c];
    }
  }
  for (int i = m - 1; i >= 0; --i) {
    double s_ = r[i];
    for (int j = i + 1; j < m; ++j) s_ -= g[i][j] * x[j];
    x[i] = s_ / g[i][i];
  }
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    lambda[idx[i + 1]] = x[i];
    sum += x[i];
  }
  lambda[idx[0]] = 1.0 - sum;
  return true;
}

// Johnson's distance subalgorithm by explicit enumeration of sub-simplices: the
// answer is the smallest subset whose affine minimizer has positive weights and
// satisfies v . (w_j - v) >= 0 for every simplex point.
Vec3 closest_on_simplex(Simplex& s) {
  const unsigned full = (1u << s.size) - 1;
  Vec3 best_v;
  double best_norm = std::numeric_limits<double>::infinity();
  unsigned best_mask = 0;
  double scale = 0.0;
  for (int i = 0; i < s.size; ++i) scale = std::max(scale, norm_sq(s.w[i]));
  for (int want = 1; want <= s.size; ++want) {
    for (unsigned mask = 1; mask <= full; ++mask) {
      if (std::popcount(mask) != want) continue;
      std::array<double, 4> lambda;
      if (!affine_closest(s, mask, lambda)) continue;
      bool positive = true;
      Vec3 v;
      for (int i = 0; i < s.size; ++i) {
        if (!(mask & (1u << i))) continue;
        positive &= lambda[i] > 0.0;
        v += s.w[i] * lambda[i];
      }
      if (!positive) continue;
      bool voronoi = true;
      const double vv = norm_sq(v);
      for (int j = 0; j < s.size && voronoi; ++j) {
        if (mask & (1u << j)) continue;
        voronoi = dot(v, s.w[j]) - vv >= -1e-13 * scale;
      }
      if (voronoi) {
        best_v = v;
        best_mask = mask;
        best_norm = vv;
        goto done;
      }
      if (vv < best_norm) {
        best_norm = vv;
        best_v = v;
        best_mask = mask;
      }
    }
  }
done:
  Simplex reduced;
  for (int i = 0; i < s.size; ++i)
    if (best_mask & (1u << i)) reduced.w[reduced.size++] = s.w[i];
  s = reduced;
  return best_v;
}

}  // namespace

GjkResult gjk_distance(const SupportFn& a, const SupportFn& b, const GjkOptions& options) {
  // Size of each set from its extents along the axes.
  double size = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 d;
    d[axis] = 1.0;
    size += std::abs(dot(a(d) - a(-d), d)) + std::abs(dot(b(d) - b(-d), d));
  }
  const double tol = options.rel_tolerance * std::max(size, 1e-300);
  auto support_diff = [&](const Vec3& d) { return b(d) - a(-d); };

  GjkResult out;
  Simplex s;
  s.w[0] = support_diff(Vec3{1.0, 0.0, 0.0});
  s.size = 1;
  Vec3 v = s.w[0];
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    out.iterations = iter;
    const double vv = norm_sq(v);
    if (vv <= (1e-3 * tol) * (1e-3 * tol)) {
      out.intersecting = true;
      return out;
    }
    const Vec3 w = support_diff(-v);
    const double vn = std::sqrt(vv);
    // Upper bound |v|, lower bound v.w/|v| on the distance.
    if (vn - dot(v, w) / vn <= tol) break;
    bool duplicate = false;
    for (int i = 0; i < s.size; ++i) duplicate |= s.w[i] == w;
    if (duplicate) break;
    s.w[s.size++] = w;
    const Vec3 next = closest_on_simplex(s);
    if (s.size == 4) {
      out.intersecting = true;
      return out;
    }
    if (norm_sq(next) >= vv) break;
    v = next;
    if (iter == options.max_iterations) {
      throw Error(ErrorCode::kNonConvergence, "GJK did not converge");
    }
  }
  out.displacement = v;
  out.distance = norm(v);
  if (out.distance <= 1e-3 * tol) {
    out.intersecting = true;
    out.distance = 0.0;
  }
  return out;
}

}  // namespace pcd
