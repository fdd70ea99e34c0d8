#include "pcd/geometry.hpp"

#include <algorithm>
#include <utility>

#include "pcd/errors.hpp"
#include "pcd/rng.hpp"

namespace pcd {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kDegenerateShape: return "DegenerateShape";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kSingularTransform: return "SingularTransform";
    case ErrorCode::kEmptyMesh: return "EmptyMesh";
    case ErrorCode::kOpenMesh: return "OpenMesh";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double frobenius_norm(const Mat3& a) {
  double s = 0.0;
  for (double v : a.m) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Mat3& a) {
  double s = 0.0;
  for (double v : a.m) s = std::max(s, std::abs(v));
  return s;
}

bool is_finite(const Mat3& a) {
  return std::all_of(a.m.begin(), a.m.end(), [](double v) { return std::isfinite(v); });
}

Mat3 inverse(const Mat3& a) {
  const Vec3 r0 = a.row(0), r1 = a.row(1), r2 = a.row(2);
  const Vec3 c0 = cross(r1, r2), c1 = cross(r2, r0), c2 = cross(r0, r1);
  const double det = dot(r0, c0);
  const double scale = max_abs(a);
  if (!(std::abs(det) > 1e-300) || std::abs(det) <= 1e-14 * scale * scale * scale) {
    throw Error(ErrorCode::kSingularTransform, "matrix is singular");
  }
  return (1.0 / det) * Mat3::from_cols(c0, c1, c2);
}

Mat3 outer(const Vec3& a, const Vec3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
  return r;
}

SymmetricEigen symmetric_eigen(const Mat3& input) {
  Mat3 a = input;
  Mat3 q = Mat3::identity();
  const double tol = 1e-12 * frobenius_norm(input);
  constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = std::sqrt(2.0 * (a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2)));
    if (off <= tol) break;
    for (const auto& pq : kPairs) {
      const int p = pq[0], r = pq[1];
      const double apq = a(p, r);
      if (apq == 0.0) continue;
      const double theta = (a(r, r) - a(p, p)) / (2.0 * apq);
      const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;
      // A <- J^T A J with the Givens rotation J acting on (p, r).
      for (int k = 0; k < 3; ++k) {
        const double akp = a(k, p), akr = a(k, r);
        a(k, p) = c * akp - s * akr;
        a(k, r) = s * akp + c * akr;
      }
      for (int k = 0; k < 3; ++k) {
        const double apk = a(p, k), ark = a(r, k);
        a(p, k) = c * apk - s * ark;
        a(r, k) = s * apk + c * ark;
      }
      for (int k = 0; k < 3; ++k) {
        const double qkp = q(k, p), qkr = q(k, r);
        q(k, p) = c * qkp - s * qkr;
        q(k, r) = s * qkp + c * qkr;
      }
    }
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  SymmetricEigen out;
  Vec3 cols[3];
  for (int i = 0; i < 3; ++i) {
    out.values[i] = a(order[i], order[i]);
    cols[i] = q.col(order[i]);
  }
  if (dot(cols[0], cross(cols[1], cols[2])) < 0.0) cols[2] = -cols[2];
  out.vectors = Mat3::from_cols(cols[0], cols[1], cols[2]);
  return out;
}

Isometry::Isometry(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!is_finite(rotation) || !is_finite(translation)) {
    throw Error(ErrorCode::kInvalidArgument, "isometry has non-finite entries");
  }
  const Mat3 gram = rotation.transposed() * rotation;
  if (max_abs(gram - Mat3::identity()) > 1e-9 || std::abs(rotation.determinant() - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "rotation is not orthonormal with det +1");
  }
}

Isometry Isometry::inverse() const {
  const Mat3 rt = rotation_.transposed();
  Isometry out;
  out.rotation_ = rt;
  out.translation_ = -(rt * translation_);
  return out;
}

Isometry Isometry::operator*(const Isometry& rhs) const {
  Isometry out;
  out.rotation_ = rotation_ * rhs.rotation_;
  out.translation_ = rotation_ * rhs.translation_ + translation_;
  return out;
}

void validate_covariance(const Mat3& cov) {
  if (!is_finite(cov)) throw Error(ErrorCode::kNotPositiveDefinite, "covariance has non-finite entries");
  const double scale = max_abs(cov);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(cov(i, j) - cov(j, i)) > 1e-9 * scale) {
        throw Error(ErrorCode::kNotSymmetric, "covariance is not symmetric");
      }
  const SymmetricEigen eig = symmetric_eigen(cov);
  const double lmax = eig.values[2];
  if (!(lmax > 0.0) || !(eig.values[0] > 1e-12 * lmax)) {
    throw Error(ErrorCode::kNotPositiveDefinite, "covariance is not positive definite");
  }
}

GaussianError::GaussianError(const Vec3& mean, const Mat3& covariance)
    : mean_(mean), covariance_(covariance) {
  if (!is_finite(mean)) throw Error(ErrorCode::kInvalidArgument, "mean has non-finite entries");
  validate_covariance(covariance);
}

GaussianError GaussianError::isotropic(double sigma, const Vec3& mean) {
  return GaussianError(mean, Mat3::diag(sigma * sigma, sigma * sigma, sigma * sigma));
}

GaussianError GaussianError::axes(const Vec3& s, const Mat3& r, const Vec3& mean) {
  Mat3 cov = r * Mat3::diag(s.x * s.x, s.y * s.y, s.z * s.z) * r.transposed();
  // Exact symmetry regardless of rounding in the products above.
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) cov(i, j) = cov(j, i) = 0.5 * (cov(i, j) + cov(j, i));
  return GaussianError(mean, cov);
}

Mat3 sqrt_inv_covariance(const Mat3& covariance) {
  validate_covariance(covariance);
  const SymmetricEigen eig = symmetric_eigen(covariance);
  const Mat3& q = eig.vectors;
  const Mat3 d = Mat3::diag(1.0 / std::sqrt(eig.values[0]), 1.0 / std::sqrt(eig.values[1]),
                            1.0 / std::sqrt(eig.values[2]));
  Mat3 t = q * d * q.transposed();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) t(i, j) = t(j, i) = 0.5 * (t(i, j) + t(j, i));
  return t;
}

Mat3 cholesky(const Mat3& c) {
  validate_covariance(c);
  Mat3 l;
  for (int j = 0; j < 3; ++j) {
    double s = c(j, j);
    for (int k = 0; k < j; ++k) s -= l(j, k) * l(j, k);
    if (!(s > 0.0)) throw Error(ErrorCode::kNotPositiveDefinite, "cholesky pivot not positive");
    l(j, j) = std::sqrt(s);
    for (int i = j + 1; i < 3; ++i) {
      double t = c(i, j);
      for (int k = 0; k < j; ++k) t -= l(i, k) * l(j, k);
      l(i, j) = t / l(j, j);
    }
  }
  return l;
}

double erf(double t) { return t < 0.0 ? -std::erf(-t) : std::erf(t); }

double erfc(double t) { return std::erfc(t); }

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

double gaussian_pdf(const Vec3& x, const Vec3& mean, const Mat3& covariance) {
  validate_covariance(covariance);
  const Mat3 inv = inverse(covariance);
  const Vec3 d = x - mean;
  const double maha = dot(d, inv * d);
  const double det = covariance.determinant();
  return std::exp(-0.5 * maha) / std::sqrt(std::pow(2.0 * kPi, 3) * det);
}

Mat3 quaternion_to_matrix(double w, double x, double y, double z) {
  Mat3 r;
  r(0, 0) = 1 - 2 * (y * y + z * z);
  r(0, 1) = 2 * (x * y - z * w);
  r(0, 2) = 2 * (x * z + y * w);
  r(1, 0) = 2 * (x * y + z * w);
  r(1, 1) = 1 - 2 * (x * x + z * z);
  r(1, 2) = 2 * (y * z - x * w);
  r(2, 0) = 2 * (x * z - y * w);
  r(2, 1) = 2 * (y * z + x * w);
  r(2, 2) = 1 - 2 * (x * x + y * y);
  return r;
}

Mat3 random_rotation(std::uint64_t seed) {
  // Shoemake's subgroup algorithm: uniform unit quaternion from three uniforms.
  CounterRng rng(seed, 0x5eed'0f'50'3ULL);
  const double u1 = rng.next_open01();
  const double u2 = rng.next_open01();
  const double u3 = rng.next_open01();
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  const double qx = a * std::sin(2.0 * kPi * u2);
  const double qy = a * std::cos(2.0 * kPi * u2);
  const double qz = b * std::sin(2.0 * kPi * u3);
  const double qw = b * std::cos(2.0 * kPi * u3);
  return quaternion_to_matrix(qw, qx, qy, qz);
}

}  // namespace pcd
