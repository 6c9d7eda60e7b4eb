#include "handover/geometry.hpp"

#include <cmath>
#include <sstream>

namespace handover {

namespace {

constexpr double kMinNorm = 1e-9;
constexpr double kParallelCosine = 1.0 - 1e-9;

// Gram-Schmidt on two directions; shared by build_frame and the 6D decoder.
// Returns (a, b) with a = normalize(u), b = normalize(v - (v.a) a).
std::pair<Vec3, Vec3> orthonormal_pair(const Vec3& u, const Vec3& v, const char* what) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (!(nu > kMinNorm) || !(nv > kMinNorm)) {
    std::ostringstream msg;
    msg << what << ": zero-length input (|u|=" << nu << ", |v|=" << nv << ")";
    fail(ErrorCode::kDegenerateDirection, msg.str());
  }
  const Vec3 a = u / nu;
  const Vec3 vn = v / nv;
  const double c = a.dot(vn);
  if (std::abs(c) >= kParallelCosine) {
    fail(ErrorCode::kParallelAxes, std::string(what) + ": axes are parallel");
  }
  const Vec3 b = (vn - c * a).normalized();
  return {a, b};
}

}  // namespace

UnitVec3::UnitVec3(const Vec3& v, double min_norm) {
  const double n = v.norm();
  if (!std::isfinite(n) || n <= min_norm) {
    fail(ErrorCode::kDegenerateDirection, "cannot normalize a zero-length or non-finite vector");
  }
  v_ = v / n;
}

RotationMatrix::RotationMatrix(const Mat3& m, double tol) : m_(m) {
  if (!is_valid(m, tol)) {
    fail(ErrorCode::kInvalidRotation, "matrix is not a proper rotation");
  }
}

bool RotationMatrix::is_valid(const Mat3& m, double tol) {
  if (!m.allFinite()) return false;
  const double ortho = (m.transpose() * m - Mat3::Identity()).norm();
  return ortho <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

RotationMatrix RotationMatrix::about_axis(const Vec3& axis, double angle) {
  const UnitVec3 u(axis);
  return RotationMatrix(Eigen::AngleAxisd(angle, u.vec()).toRotationMatrix(), Unchecked{});
}

RotationMatrix RotationMatrix::operator*(const RotationMatrix& o) const {
  return RotationMatrix(m_ * o.m_, Unchecked{});
}

RotationMatrix RotationMatrix::transpose() const {
  return RotationMatrix(m_.transpose(), Unchecked{});
}

RotationMatrix rotation_from_orthonormal_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  Mat3 m;
  m.col(0) = c0;
  m.col(1) = c1;
  m.col(2) = c2;
  return RotationMatrix(m, RotationMatrix::Unchecked{});
}

// --- quaternions -----------------------------------------------------------

namespace {

void canonicalize(double& w, double& x, double& y, double& z) {
  bool flip = w < 0.0;
  if (w == 0.0) {
    // double-cover tie-break on the first non-zero vector component
    if (x != 0.0) flip = x < 0.0;
    else if (y != 0.0) flip = y < 0.0;
    else flip = z < 0.0;
  }
  if (flip) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
}

}  // namespace

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "quaternion norm " << n << " deviates from 1";
    fail(ErrorCode::kNonUnitQuaternion, msg.str());
  }
  w_ = w / n;
  x_ = x / n;
  y_ = y / n;
  z_ = z / n;
  canonicalize(w_, x_, y_, z_);
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& o) const {
  return UnitQuaternion(w_ * o.w_ - x_ * o.x_ - y_ * o.y_ - z_ * o.z_,
                        w_ * o.x_ + x_ * o.w_ + y_ * o.z_ - z_ * o.y_,
                        w_ * o.y_ - x_ * o.z_ + y_ * o.w_ + z_ * o.x_,
                        w_ * o.z_ + x_ * o.y_ - y_ * o.x_ + z_ * o.w_);
}

UnitQuaternion UnitQuaternion::conjugate() const { return UnitQuaternion(w_, -x_, -y_, -z_); }

RotationMatrix to_matrix(const UnitQuaternion& q) {
  const Eigen::Quaterniond e(q.w(), q.x(), q.y(), q.z());
  const Mat3 m = e.toRotationMatrix();
  return rotation_from_orthonormal_columns(m.col(0), m.col(1), m.col(2));
}

UnitQuaternion to_quaternion(const RotationMatrix& r) {
  Eigen::Quaterniond e(r.matrix());
  e.normalize();
  return UnitQuaternion(e.w(), e.x(), e.y(), e.z());
}

// --- rigid transforms ------------------------------------------------------

RigidTransform RigidTransform::from_matrix(const Mat4& h, double tol) {
  if (!h.allFinite()) fail(ErrorCode::kInvalidRotation, "homogeneous matrix has non-finite entries");
  const Eigen::RowVector4d bottom = h.row(3);
  if ((bottom - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > tol) {
    fail(ErrorCode::kInvalidRotation, "homogeneous matrix bottom row must be [0 0 0 1]");
  }
  return {RotationMatrix(Mat3(h.topLeftCorner<3, 3>()), tol), h.topRightCorner<3, 1>()};
}

Mat4 RigidTransform::matrix() const {
  Mat4 h = Mat4::Identity();
  h.topLeftCorner<3, 3>() = rotation.matrix();
  h.topRightCorner<3, 1>() = translation;
  return h;
}

RigidTransform RigidTransform::inverse() const {
  const RotationMatrix rt = rotation.transpose();
  return {rt, -(rt * translation)};
}

RigidTransform RigidTransform::operator*(const RigidTransform& o) const {
  return {rotation * o.rotation, rotation * o.translation + translation};
}

// --- hand frames -----------------------------------------------------------

RigidTransform HandFrame::transform() const {
  const Vec3& a = direction_.vec();
  const Vec3& p = normal_.vec();
  return {rotation_from_orthonormal_columns(a, p.cross(a), p), centre_};
}

HandFrame build_frame(const Point3& centre, const Vec3& direction, const Vec3& normal) {
  if (!centre.allFinite()) fail(ErrorCode::kDegenerateDirection, "frame centre is not finite");
  const auto [a, p] = orthonormal_pair(direction, normal, "build_frame");
  return HandFrame(centre, UnitVec3(a), UnitVec3(p));
}

RigidTransform matching_transform(const HandFrame& imagined, const HandFrame& real) {
  const RigidTransform f1 = imagined.transform();
  const RigidTransform f2 = real.transform();
  const RotationMatrix r = f2.rotation * f1.rotation.transpose();
  return {r, f2.translation - r * f1.translation};
}

HandFrame transform_frame(const RigidTransform& h, const HandFrame& frame) {
  return build_frame(h.apply(frame.centre()), h.apply_direction(frame.direction().vec()),
                     h.apply_direction(frame.normal().vec()));
}

Pose transform_pose(const Point3& p0, const UnitQuaternion& q0, const RigidTransform& h) {
  return {h.apply(p0), to_quaternion(h.rotation) * q0};
}

// --- 6D rotation representation -------------------------------------------

RotationMatrix rot6d_to_matrix(std::span<const double, 6> r6) {
  const Vec3 v1(r6[0], r6[1], r6[2]);
  const Vec3 v2(r6[3], r6[4], r6[5]);
  if (!v1.allFinite() || !v2.allFinite()) {
    fail(ErrorCode::kDegenerateDirection, "rot6d: non-finite input");
  }
  const auto [b1, b2] = orthonormal_pair(v1, v2, "rot6d_to_matrix");
  return rotation_from_orthonormal_columns(b1, b2, b1.cross(b2));
}

Rot6D matrix_to_rot6d(const RotationMatrix& r) {
  const Mat3& m = r.matrix();
  return {m(0, 0), m(1, 0), m(2, 0), m(0, 1), m(1, 1), m(2, 1)};
}

}  // namespace handover
