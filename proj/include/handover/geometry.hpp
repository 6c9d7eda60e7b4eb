#pragma once

// Rigid-body primitives: rotation representations, hand frames and the
// frame-matching transform. Units are meters and radians; the world frame is
// right-handed with +z up.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <span>

#include "handover/errors.hpp"

namespace handover {

using Vec3 = Eigen::Vector3d;
using Point3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kConstructionTolerance = 1e-12;
inline constexpr double kVerificationTolerance = 1e-9;

/// Vector of Euclidean length one. Construction normalizes.
class UnitVec3 {
 public:
  /// Normalizes `v`; throws DegenerateDirection when ||v|| <= min_norm.
  explicit UnitVec3(const Vec3& v, double min_norm = 1e-9);

  static UnitVec3 unit_x() { return UnitVec3(Vec3::UnitX()); }
  static UnitVec3 unit_y() { return UnitVec3(Vec3::UnitY()); }
  static UnitVec3 unit_z() { return UnitVec3(Vec3::UnitZ()); }

  const Vec3& vec() const noexcept { return v_; }
  double x() const noexcept { return v_.x(); }
  double y() const noexcept { return v_.y(); }
  double z() const noexcept { return v_.z(); }
  double dot(const UnitVec3& o) const noexcept { return v_.dot(o.v_); }

 private:
  Vec3 v_;
};

/// Proper rotation: R^T R = I and det R = +1 (checked to 1e-9).
class RotationMatrix {
 public:
  RotationMatrix() : m_(Mat3::Identity()) {}
  /// Throws InvalidRotation unless `m` satisfies the SO(3) invariants.
  explicit RotationMatrix(const Mat3& m, double tol = kVerificationTolerance);

  static RotationMatrix identity() { return {}; }
  /// Rotation by `angle` radians about a (not necessarily unit) axis.
  static RotationMatrix about_axis(const Vec3& axis, double angle);
  static RotationMatrix about_x(double angle) { return about_axis(Vec3::UnitX(), angle); }
  static RotationMatrix about_y(double angle) { return about_axis(Vec3::UnitY(), angle); }
  static RotationMatrix about_z(double angle) { return about_axis(Vec3::UnitZ(), angle); }

  const Mat3& matrix() const noexcept { return m_; }
  Vec3 column(int i) const { return m_.col(i); }

  RotationMatrix operator*(const RotationMatrix& o) const;
  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  RotationMatrix transpose() const;

  static bool is_valid(const Mat3& m, double tol = kVerificationTolerance);

 private:
  struct Unchecked {};
  RotationMatrix(const Mat3& m, Unchecked) : m_(m) {}
  friend RotationMatrix rotation_from_orthonormal_columns(const Vec3&, const Vec3&, const Vec3&);

  Mat3 m_;
};

/// Hamilton unit quaternion, scalar first, canonicalized so that w >= 0.
class UnitQuaternion {
 public:
  UnitQuaternion() = default;
  /// Throws NonUnitQuaternion if |q| deviates from 1 by more than 1e-6, then
  /// renormalizes and canonicalizes the sign.
  UnitQuaternion(double w, double x, double y, double z);

  static UnitQuaternion identity() { return {}; }

  double w() const noexcept { return w_; }
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double z() const noexcept { return z_; }
  std::array<double, 4> wxyz() const { return {w_, x_, y_, z_}; }

  /// Hamilton product, canonicalized.
  UnitQuaternion operator*(const UnitQuaternion& o) const;
  UnitQuaternion conjugate() const;

 private:
  double w_ = 1.0, x_ = 0.0, y_ = 0.0, z_ = 0.0;
};

RotationMatrix to_matrix(const UnitQuaternion& q);
UnitQuaternion to_quaternion(const RotationMatrix& r);

/// Element of SE(3). Acts on points as x -> R x + t.
struct RigidTransform {
  RotationMatrix rotation;
  Point3 translation = Point3::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform from_matrix(const Mat4& h, double tol = kVerificationTolerance);

  Mat4 matrix() const;
  Point3 apply(const Point3& p) const { return rotation * p + translation; }
  Vec3 apply_direction(const Vec3& v) const { return rotation * v; }
  RigidTransform inverse() const;
  /// (this * o)(x) == this(o(x)).
  RigidTransform operator*(const RigidTransform& o) const;
};

/// Hand-attached frame: origin at the hand centre, +x along the hand
/// direction, +z along the palm normal. The normal is stored orthogonalized
/// against the direction.
class HandFrame {
 public:
  const Point3& centre() const noexcept { return centre_; }
  const UnitVec3& direction() const noexcept { return direction_; }
  const UnitVec3& normal() const noexcept { return normal_; }

  /// Frame-to-parent transform [a, p x a, p | c].
  RigidTransform transform() const;

 private:
  friend HandFrame build_frame(const Point3&, const Vec3&, const Vec3&);
  HandFrame(const Point3& c, const UnitVec3& d, const UnitVec3& p)
      : centre_(c), direction_(d), normal_(p) {}

  Point3 centre_;
  UnitVec3 direction_;
  UnitVec3 normal_;
};

/// Builds the hand frame at `centre`. The normal is Gram-Schmidt projected
/// against the direction. Errors: DegenerateDirection, ParallelAxes.
HandFrame build_frame(const Point3& centre, const Vec3& direction, const Vec3& normal);

/// Transform that carries `imagined` onto `real`:
/// rotation R2 R1^T, translation c2 - R2 R1^T c1.
RigidTransform matching_transform(const HandFrame& imagined, const HandFrame& real);

/// Applies `h` to a frame: origin, direction and normal are all mapped.
HandFrame transform_frame(const RigidTransform& h, const HandFrame& frame);

struct Pose {
  Point3 position = Point3::Zero();
  UnitQuaternion orientation;
};

/// p' = R p0 + t, and q' such that R(q') = H.rotation * R(q0).
Pose transform_pose(const Point3& p0, const UnitQuaternion& q0, const RigidTransform& h);

using Rot6D = std::array<double, 6>;

/// Gram-Schmidt decode of two stacked 3-vectors (the first two matrix columns).
RotationMatrix rot6d_to_matrix(std::span<const double, 6> r6);
inline RotationMatrix rot6d_to_matrix(const Rot6D& r6) {
  return rot6d_to_matrix(std::span<const double, 6>(r6));
}
Rot6D matrix_to_rot6d(const RotationMatrix& r);

inline constexpr Rot6D kIdentityRot6D{1.0, 0.0, 0.0, 0.0, 1.0, 0.0};

}  // namespace handover
