#include "pcd/prob_bound.hpp"

#include <algorithm>
#include <cmath>

#include "pcd/errors.hpp"
#include "pcd/gjk.hpp"
#include "pcd/minkowski.hpp"

namespace pcd {

const char* to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::kConvexDivergence: return "convex_divergence";
    case BoundMethod::kSphereMax: return "sphere_max";
    case BoundMethod::kSphereCenter: return "sphere_center";
    case BoundMethod::kExact1: return "exact1";
    case BoundMethod::kMonteCarloRef: return "monte_carlo";
  }
  return "unknown";
}

namespace {

constexpr double kInvFourPi = 1.0 / (4.0 * kPi);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

CollisionBound overlapping() {
  CollisionBound r;
  r.probability_upper = 1.0;
  r.method = BoundMethod::kExact1;
  return r;
}

// Whitened pair: bound from a precomputed V' and separating displacement.
CollisionBound from_sum(const ConvexPolytope& v_prime, const Vec3& displacement) {
  CollisionBound r;
  r.displacement_whitened = displacement;
  r.probability_upper = surface_integral_upper(v_prime, normalized(displacement));
  return r;
}

CollisionBound general_pair(const ConvexPolytope& a, const ConvexPolytope& b, const Vec3& mean,
                            const Mat3& whiten) {
  const ConvexPolytope a_w = apply_linear(a.translated(mean), whiten);
  const ConvexPolytope b_w = apply_linear(b, whiten);
  GjkResult g;
  try {
    g = gjk_distance(a_w, b_w);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonConvergence) throw;
    return overlapping();
  }
  if (g.intersecting) return overlapping();
  return from_sum(minkowski_sum_general(a_w.negated(), b_w), g.displacement);
}

CollisionBound box_pair(const Box& a, const Box& b, const Vec3& mean, const Mat3& whiten) {
  Box a_shift = a;
  a_shift.center += mean;
  const Box a_w = apply_linear(a_shift, whiten);
  const Box b_w = apply_linear(b, whiten);
  GjkResult g;
  try {
    g = gjk_distance(a_w, b_w);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonConvergence) throw;
    return overlapping();
  }
  if (g.intersecting) return overlapping();
  Box a_neg = a_w;
  a_neg.center = -a_neg.center;
  return from_sum(minkowski_sum_boxes(a_neg, b_w), g.displacement);
}

CollisionBound kdop_pair(const Kdop26& a, const Kdop26& b, const Vec3& mean, const Mat3& whiten) {
  // Slab sums commute with the whitening map, so the sum is formed first.
  const Kdop26 sum = minkowski_sum_kdop(a.translated(mean).negated(), b);
  const ConvexPolytope v_prime = apply_linear(sum.to_polytope(), whiten);
  const Sphere origin{{}, 0.0};
  GjkResult g;
  try {
    g = gjk_distance(origin, v_prime);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonConvergence) throw;
    return overlapping();
  }
  if (g.intersecting) return overlapping();
  return from_sum(v_prime, g.displacement);
}

}  // namespace

Vec3 field_f(const Vec3& x, const Vec3& n_d) {
  return n_d * (kInvFourPi * (1.0 + erf(dot(x, n_d) * kInvSqrt2)));
}

double surface_integral_upper_unclamped(const ConvexPolytope& v_prime, const Vec3& n_d) {
  // Evaluated with G = F - n_d / (2 pi): a constant field has zero flux through a
  // closed surface and shifts every per-triangle maximum by the same amount, so the
  // sum is unchanged while far-field terms avoid cancellation in 1 + erf.
  const auto& v = v_prime.vertices();
  const auto& faces = v_prime.faces();
  const auto& normals = v_prime.face_normals();
  double total = 0.0;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const Triangle& f = faces[i];
    const double area = 0.5 * norm(cross(v[f[1]] - v[f[0]], v[f[2]] - v[f[0]]));
    if (area < 1e-14) continue;
    const double c = dot(n_d, normals[i]);
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint32_t idx : f) {
      const double g = -kInvFourPi * std::erfc(dot(v[idx], n_d) * kInvSqrt2) * c;
      best = std::max(best, g);
    }
    total += best * area;
  }
  return total;
}

double surface_integral_upper(const ConvexPolytope& v_prime, const Vec3& n_d) {
  return clamp01(surface_integral_upper_unclamped(v_prime, n_d));
}

CollisionBound convex_pcd(const ConvexShape& a, const ConvexShape& b, const GaussianError& error) {
  const Mat3 whiten = sqrt_inv_covariance(error.covariance());
  const Vec3& mean = error.mean();
  if (const auto* sa = std::get_if<Sphere>(&a)) {
    if (const auto* sb = std::get_if<Sphere>(&b)) return sphere_pcd_max(*sa, *sb, error);
  }
  if (const auto* ba = std::get_if<Box>(&a)) {
    if (const auto* bb = std::get_if<Box>(&b)) return box_pair(*ba, *bb, mean, whiten);
  }
  if (const auto* ka = std::get_if<Kdop26>(&a)) {
    if (const auto* kb = std::get_if<Kdop26>(&b)) return kdop_pair(*ka, *kb, mean, whiten);
  }
  return general_pair(to_polytope(a), to_polytope(b), mean, whiten);
}

namespace {

double ball_volume(double r) { return 4.0 / 3.0 * kPi * r * r * r; }

}  // namespace

CollisionBound sphere_pcd_max(const Sphere& a, const Sphere& b, const GaussianError& error) {
  const Mat3& cov = error.covariance();
  const Vec3 c = b.center - a.center - error.mean();
  const double radius = a.radius + b.radius;
  CollisionBound r;
  r.method = BoundMethod::kSphereMax;
  Vec3 x;
  if (norm(c) > radius) {
    // Minimize x^T S^-1 x on |x - c| = R. Stationarity gives
    // x(lambda) = (S^-1 + lambda I)^-1 lambda c; in the eigenbasis of S the distance
    // |x(lambda) - c| falls monotonically from |c| to 0 as lambda grows.
    const SymmetricEigen eig = symmetric_eigen(cov);
    const Vec3 cq = eig.vectors.transposed() * c;
    auto offset_at = [&](double lambda) {
      Vec3 d;
      for (int i = 0; i < 3; ++i) d[i] = cq[i] / (1.0 + lambda * eig.values[i]);
      return d;  // (x - c) expressed in the eigenbasis, negated
    };
    double lo = 0.0, hi = 1.0 / eig.values[2];
    int steps = 0;
    while (norm(offset_at(hi)) > radius) {
      hi *= 2.0;
      if (++steps > 2000) throw Error(ErrorCode::kNonConvergence, "sphere bound bracket");
    }
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) {
        converged = true;
        break;
      }
      (norm(offset_at(mid)) > radius ? lo : hi) = mid;
      if (hi - lo <= 1e-15 * hi) {
        converged = true;
        break;
      }
    }
    if (!converged) throw Error(ErrorCode::kNonConvergence, "sphere bound bisection");
    // hi keeps |x - c| <= R, so x stays inside the ball.
    x = c - eig.vectors * offset_at(hi);
  }
  r.density_point = x;
  r.displacement_whitened = sqrt_inv_covariance(cov) * x;
  r.probability_upper = clamp01(ball_volume(radius) * gaussian_pdf(x, Vec3{}, cov));
  return r;
}

CollisionBound sphere_pcd_center(const Sphere& a, const Sphere& b, const GaussianError& error) {
  const Vec3 c = b.center - a.center - error.mean();
  const double radius = a.radius + b.radius;
  CollisionBound r;
  r.method = BoundMethod::kSphereCenter;
  r.density_point = c;
  r.displacement_whitened = sqrt_inv_covariance(error.covariance()) * c;
  r.probability_upper = clamp01(ball_volume(radius) * gaussian_pdf(c, Vec3{}, error.covariance()));
  return r;
}

}  // namespace pcd
