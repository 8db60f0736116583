#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace spherecon {

using Rng = std::mt19937_64;

/// 53-bit uniform in [0, 1). Built directly from raw engine output so that a
/// seed pins the stream regardless of the standard library implementation.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller; consumes exactly two engine draws.
inline double standard_normal(Rng& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

/// A point on the n-sphere embedded in R^{n+1}. The stored coordinates have
/// unit Euclidean norm to within 1e-12.
class UnitVector {
 public:
  explicit UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) {
      throw std::invalid_argument("UnitVector: ambient dimension must be >= 2");
    }
    if (std::abs(coords_.norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("UnitVector: norm deviates from 1 by more than 1e-12");
    }
  }

  /// Rescales an arbitrary nonzero vector onto the sphere.
  static UnitVector normalized(const Eigen::VectorXd& v) {
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw std::invalid_argument("UnitVector::normalized: vector has no direction");
    }
    return UnitVector(v / norm);
  }

  static UnitVector axis(int ambient_dim, int index) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(ambient_dim);
    e(index) = 1.0;
    return UnitVector(std::move(e));
  }

  const Eigen::VectorXd& coords() const { return coords_; }
  /// Sphere dimension n (ambient dimension is n+1).
  int dim() const { return static_cast<int>(coords_.size()) - 1; }

 private:
  Eigen::VectorXd coords_;
};

/// A vector attached to the tangent plane of the sphere at `base`.
class TangentVector {
 public:
  TangentVector(UnitVector base, Eigen::VectorXd coords)
      : base_(std::move(base)), coords_(std::move(coords)) {
    if (coords_.size() != base_.coords().size()) {
      throw std::invalid_argument("TangentVector: dimension mismatch with base");
    }
    if (std::abs(coords_.dot(base_.coords())) > 1e-10) {
      throw std::invalid_argument("TangentVector: not orthogonal to base point");
    }
  }

  const UnitVector& base() const { return base_; }
  const Eigen::VectorXd& coords() const { return coords_; }
  double norm() const { return coords_.norm(); }

 private:
  UnitVector base_;
  Eigen::VectorXd coords_;
};

/// Element of SO(3): orthogonal to 1e-10 in Frobenius norm with det = 1.
class Rotation3 {
 public:
  explicit Rotation3(Eigen::Matrix3d entries) : entries_(std::move(entries)) {
    if ((entries_.transpose() * entries_ - Eigen::Matrix3d::Identity()).norm() > 1e-10) {
      throw std::invalid_argument("Rotation3: matrix is not orthogonal");
    }
    if (std::abs(entries_.determinant() - 1.0) > 1e-10) {
      throw std::invalid_argument("Rotation3: determinant is not +1");
    }
  }

  static Rotation3 identity() { return Rotation3(Eigen::Matrix3d::Identity()); }

  /// Repairs a near-rotation by Gram-Schmidt on the columns; the third column
  /// is rebuilt as a cross product so the result has det = 1 exactly.
  static Rotation3 orthonormalized(const Eigen::Matrix3d& m) {
    Eigen::Vector3d x = m.col(0).normalized();
    Eigen::Vector3d y = (m.col(1) - m.col(1).dot(x) * x).normalized();
    Eigen::Vector3d z = x.cross(y);
    Eigen::Matrix3d r;
    r.col(0) = x;
    r.col(1) = y;
    r.col(2) = z;
    return Rotation3(r);
  }

  const Eigen::Matrix3d& matrix() const { return entries_; }
  Eigen::Vector3d column(int i) const { return entries_.col(i); }

 private:
  Eigen::Matrix3d entries_;
};

/// Orthogonal projection of an ambient vector onto the tangent plane at x:
/// P_x v = v - <v,x> x.
inline TangentVector project(const UnitVector& x, const Eigen::VectorXd& v) {
  if (v.size() != x.coords().size()) {
    throw std::invalid_argument("project: dimension mismatch");
  }
  Eigen::VectorXd w = v - v.dot(x.coords()) * x.coords();
  return TangentVector(x, std::move(w));
}

inline Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
  Eigen::Matrix3d s;
  s << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
      -w.y(), w.x(), 0.0;
  return s;
}

inline Eigen::Vector3d unskew(const Eigen::Matrix3d& omega) {
  if ((omega + omega.transpose()).norm() > 1e-10) {
    throw std::invalid_argument("unskew: matrix is not antisymmetric");
  }
  return Eigen::Vector3d(omega(2, 1), omega(0, 2), omega(1, 0));
}

struct SphereDistance {
  double angle;  // geodesic distance in [0, pi]
  double s;      // chordal half-square 1 - <x,y> in [0, 2]
};

/// Geodesic angle and the chordal half-square s = 1 - <x,y> = |x-y|^2 / 2.
/// The inner product is clamped to [-1, 1] before acos so that consensus and
/// antipodal configurations cannot produce NaN.
inline SphereDistance geodesic_and_chordal(const UnitVector& x, const UnitVector& y) {
  if (x.coords().size() != y.coords().size()) {
    throw std::invalid_argument("geodesic_and_chordal: dimension mismatch");
  }
  const double dot = std::clamp(x.coords().dot(y.coords()), -1.0, 1.0);
  return SphereDistance{std::acos(dot), 1.0 - dot};
}

/// Chordal half-square on raw coordinates (hot-path variant).
inline double chordal_s(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return 1.0 - std::clamp(x.dot(y), -1.0, 1.0);
}

/// Uniform sample on S^n: normalize a standard Gaussian in R^{n+1}.
inline UnitVector sample_unit_sphere(int n, Rng& rng) {
  if (n < 1) {
    throw std::invalid_argument("sample_unit_sphere: n must be >= 1");
  }
  Eigen::VectorXd g(n + 1);
  while (true) {
    for (int i = 0; i <= n; ++i) g(i) = standard_normal(rng);
    if (g.norm() > 1e-6) break;  // astronomically rare redraw
  }
  return UnitVector::normalized(g);
}

/// Standard homogeneous quaternion-to-rotation formula, q = (w, x, y, z).
/// The sign of q is irrelevant; q need not be normalized.
inline Rotation3 quaternion_to_rotation(const Eigen::Vector4d& q) {
  const double n2 = q.squaredNorm();
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw std::invalid_argument("quaternion_to_rotation: zero quaternion");
  }
  const double w = q(0), x = q(1), y = q(2), z = q(3);
  Eigen::Matrix3d r;
  r << w * w + x * x - y * y - z * z, 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),
       2.0 * (x * y + w * z), w * w - x * x + y * y - z * z, 2.0 * (y * z - w * x),
       2.0 * (x * z - w * y), 2.0 * (y * z + w * x), w * w - x * x - y * y + z * z;
  return Rotation3(r / n2);
}

/// Haar-uniform rotation: uniform unit quaternion on S^3 mapped to SO(3).
inline Rotation3 sample_uniform_rotation(Rng& rng) {
  Eigen::Vector4d q;
  while (true) {
    for (int i = 0; i < 4; ++i) q(i) = standard_normal(rng);
    if (q.norm() > 1e-6) break;
  }
  return quaternion_to_rotation(q);
}

/// Rodrigues closed form for exp(skew(w)); preserves SO(3) to machine
/// precision, which keeps long integration runs orthogonal.
inline Eigen::Matrix3d rotation_exp(const Eigen::Vector3d& w) {
  const double theta2 = w.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a, b;  // exp = I + a S(w) + b S(w)^2
  if (theta < 1e-4) {
    a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Eigen::Matrix3d s = skew(w);
  return Eigen::Matrix3d::Identity() + a * s + b * (s * s);
}

}  // namespace spherecon
