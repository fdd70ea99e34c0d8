#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>

namespace pcd {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double norm_sq(const Vec3& a) { return dot(a, a); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }
inline Vec3 min(const Vec3& a, const Vec3& b) {
  return {std::fmin(a.x, b.x), std::fmin(a.y, b.y), std::fmin(a.z, b.z)};
}
inline Vec3 max(const Vec3& a, const Vec3& b) {
  return {std::fmax(a.x, b.x), std::fmax(a.y, b.y), std::fmax(a.z, b.z)};
}
inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

/// 3x3 matrix, row-major storage.
struct Mat3 {
  std::array<double, 9> m{};

  constexpr double operator()(int r, int c) const { return m[r * 3 + c]; }
  constexpr double& operator()(int r, int c) { return m[r * 3 + c]; }

  static constexpr Mat3 identity() { return diag(1.0, 1.0, 1.0); }
  static constexpr Mat3 zero() { return Mat3{}; }
  static constexpr Mat3 diag(double a, double b, double c) {
    Mat3 r;
    r(0, 0) = a;
    r(1, 1) = b;
    r(2, 2) = c;
    return r;
  }
  static constexpr Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
    Mat3 r;
    for (int c = 0; c < 3; ++c) {
      r(0, c) = r0[c];
      r(1, c) = r1[c];
      r(2, c) = r2[c];
    }
    return r;
  }
  static constexpr Mat3 from_cols(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    return from_rows(c0, c1, c2).transposed();
  }

  constexpr Vec3 row(int r) const { return {(*this)(r, 0), (*this)(r, 1), (*this)(r, 2)}; }
  constexpr Vec3 col(int c) const { return {(*this)(0, c), (*this)(1, c), (*this)(2, c)}; }

  constexpr Mat3 transposed() const {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t(c, r) = (*this)(r, c);
    return t;
  }
  constexpr double determinant() const {
    return dot(row(0), cross(row(1), row(2)));
  }
  constexpr double trace() const { return m[0] + m[4] + m[8]; }

  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

constexpr Vec3 operator*(const Mat3& a, const Vec3& v) {
  return {dot(a.row(0), v), dot(a.row(1), v), dot(a.row(2), v)};
}
constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}
constexpr Mat3 operator*(double s, Mat3 a) {
  for (double& v : a.m) v *= s;
  return a;
}
constexpr Mat3 operator+(Mat3 a, const Mat3& b) {
  for (int i = 0; i < 9; ++i) a.m[i] += b.m[i];
  return a;
}
constexpr Mat3 operator-(Mat3 a, const Mat3& b) {
  for (int i = 0; i < 9; ++i) a.m[i] -= b.m[i];
  return a;
}

double frobenius_norm(const Mat3& a);
double max_abs(const Mat3& a);
bool is_finite(const Mat3& a);
/// Throws kSingularTransform when |det| is negligible relative to the entries.
Mat3 inverse(const Mat3& a);
Mat3 outer(const Vec3& a, const Vec3& b);

/// Result of a symmetric eigendecomposition: A = Q diag(values) Q^T, ascending values,
/// eigenvectors stored as columns of Q (det Q = +1).
struct SymmetricEigen {
  Vec3 values;
  Mat3 vectors;
};

/// Cyclic Jacobi; stops when the off-diagonal norm drops below 1e-12 * ||A||_F.
SymmetricEigen symmetric_eigen(const Mat3& a);

/// Rigid placement: x -> rotation * x + translation.
class Isometry {
 public:
  Isometry() = default;
  /// Throws kInvalidArgument unless rotation is orthonormal with det +1 (tolerance 1e-9).
  Isometry(const Mat3& rotation, const Vec3& translation);

  static Isometry translation_only(const Vec3& t) { return Isometry(Mat3::identity(), t); }

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 apply(const Vec3& p) const { return rotation_ * p + translation_; }
  Isometry inverse() const;
  Isometry operator*(const Isometry& rhs) const;

 private:
  Mat3 rotation_ = Mat3::identity();
  Vec3 translation_;
};

/// Positional error N(mean, covariance); validated on construction.
class GaussianError {
 public:
  /// Throws kNotSymmetric or kNotPositiveDefinite.
  GaussianError(const Vec3& mean, const Mat3& covariance);

  static GaussianError isotropic(double sigma, const Vec3& mean = {});
  /// Covariance R diag(s^2) R^T with standard deviations s along the columns of R.
  static GaussianError axes(const Vec3& std_devs, const Mat3& rotation, const Vec3& mean = {});

  const Vec3& mean() const { return mean_; }
  const Mat3& covariance() const { return covariance_; }

 private:
  Vec3 mean_;
  Mat3 covariance_;
};

/// Checks symmetry (1e-9 relative) and definiteness (lambda_min > 1e-12 lambda_max).
void validate_covariance(const Mat3& covariance);

/// Symmetric T with T * covariance * T^T = I.
Mat3 sqrt_inv_covariance(const Mat3& covariance);

/// Lower-triangular L with L L^T = covariance.
Mat3 cholesky(const Mat3& covariance);

/// Odd by construction: erf(-t) == -erf(t) bit for bit.
double erf(double t);
double erfc(double t);
/// Standard normal CDF.
double normal_cdf(double t);

/// Density of N(mean, covariance) at x.
double gaussian_pdf(const Vec3& x, const Vec3& mean, const Mat3& covariance);

/// Uniform rotation on SO(3) from a unit quaternion, deterministic per seed.
Mat3 random_rotation(std::uint64_t seed);

/// Rotation taking unit quaternion (w, x, y, z) to a matrix.
Mat3 quaternion_to_matrix(double w, double x, double y, double z);

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace pcd
