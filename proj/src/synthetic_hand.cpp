#include "handover/synthetic_hand.hpp"

#include <cmath>
#include <numbers>

namespace handover {

namespace {

constexpr int kPalmRings = 7;
constexpr int kPalmRingSize = 19;
constexpr int kFingerRingSize = 8;
constexpr int kRingsPerBone = 5;
constexpr int kFingerRings = 3 * kRingsPerBone + 1;
constexpr int kPalmVertices = kPalmRings * kPalmRingSize;
constexpr int kFingerVertices = kFingerRings * kFingerRingSize + 1;
static_assert(kPalmVertices + 5 * kFingerVertices == kNumVertices);

// Right hand, meters.
constexpr double kRightKeypoints[kNumKeypoints][3] = {
    {0.000, 0.000, 0.000},                                                          // wrist
    {0.020, 0.025, -0.010}, {0.045, 0.045, -0.012}, {0.070, 0.058, -0.012}, {0.092, 0.068, -0.010},
    {0.085, 0.025, 0.000},  {0.125, 0.027, 0.000},  {0.150, 0.028, 0.000},  {0.172, 0.029, 0.000},
    {0.088, 0.005, 0.000},  {0.132, 0.005, 0.000},  {0.160, 0.005, 0.000},  {0.184, 0.005, 0.000},
    {0.084, -0.014, 0.000}, {0.124, -0.015, 0.000}, {0.150, -0.016, 0.000}, {0.172, -0.017, 0.000},
    {0.078, -0.032, 0.000}, {0.106, -0.034, 0.000}, {0.126, -0.035, 0.000}, {0.144, -0.036, 0.000},
};

// radius at finger base / tip, per finger (thumb, index, middle, ring, pinky)
constexpr double kFingerRadius[5][2] = {
    {0.0105, 0.0080}, {0.0085, 0.0065}, {0.0088, 0.0066}, {0.0082, 0.0062}, {0.0074, 0.0055}};

constexpr std::array<int, kNumJoints> kParents{-1, 0, 1, 2, 0, 4, 5, 0, 7, 8, 0, 10, 11, 0, 13, 14};

Vec3 design_keypoint(int i) {
  return {kRightKeypoints[i][0], kRightKeypoints[i][1], kRightKeypoints[i][2]};
}

void add_quad_strip(FaceList& faces, int ring_a, int ring_b, int size) {
  for (int i = 0; i < size; ++i) {
    const int j = (i + 1) % size;
    faces.push_back({ring_a + i, ring_a + j, ring_b + j});
    faces.push_back({ring_a + i, ring_b + j, ring_b + i});
  }
}

HandModel::Data right_hand_data() {
  HandModel::Data d;
  d.template_vertices.resize(kNumVertices, 3);
  d.weights = Eigen::MatrixXd::Zero(kNumVertices, kNumJoints);
  d.joint_regressor = Eigen::MatrixXd::Zero(kNumKeypoints, kNumVertices);
  d.parents = kParents;
  d.handedness = Handedness::kRight;

  // palm: elliptical rings from the wrist toward the knuckle line
  const Vec3 knuckles = (design_keypoint(5) + design_keypoint(9) + design_keypoint(13) + design_keypoint(17)) / 4.0;
  for (int r = 0; r < kPalmRings; ++r) {
    const double s = 0.9 * r / (kPalmRings - 1);
    const Vec3 c = s * knuckles;
    const double wy = 0.022 + s * (0.042 - 0.022);
    const double wz = 0.012 - s * 0.001;
    for (int i = 0; i < kPalmRingSize; ++i) {
      const double phi = 2.0 * std::numbers::pi * i / kPalmRingSize;
      const int v = r * kPalmRingSize + i;
      d.template_vertices.row(v) = (c + Vec3(0.0, wy * std::cos(phi), wz * std::sin(phi))).transpose();
      d.weights(v, 0) = 1.0;
      if (r == 0) d.joint_regressor(0, v) = 1.0 / kPalmRingSize;
    }
  }
  for (int r = 0; r + 1 < kPalmRings; ++r) {
    add_quad_strip(d.faces, r * kPalmRingSize, (r + 1) * kPalmRingSize, kPalmRingSize);
  }

  for (int f = 0; f < 5; ++f) {
    const int base_vertex = kPalmVertices + f * kFingerVertices;
    const int base_kp = 1 + 4 * f;
    int ring = 0;
    for (int b = 0; b < 3; ++b) {
      const Vec3 p0 = design_keypoint(base_kp + b);
      const Vec3 p1 = design_keypoint(base_kp + b + 1);
      const Vec3 u = (p1 - p0).normalized();
      const Vec3 e1 = Vec3::UnitZ().cross(u).normalized();
      const Vec3 e2 = u.cross(e1);
      const int joint = 1 + 3 * f + b;
      const int last = (b == 2) ? kRingsPerBone : kRingsPerBone - 1;
      for (int q = 0; q <= last; ++q, ++ring) {
        const double t = static_cast<double>(q) / kRingsPerBone;
        const Vec3 c = p0 + t * (p1 - p0);
        const double along = static_cast<double>(ring) / (kFingerRings - 1);
        const double radius = kFingerRadius[f][0] + along * (kFingerRadius[f][1] - kFingerRadius[f][0]);
        for (int i = 0; i < kFingerRingSize; ++i) {
          const double phi = 2.0 * std::numbers::pi * i / kFingerRingSize;
          const int v = base_vertex + ring * kFingerRingSize + i;
          d.template_vertices.row(v) =
              (c + radius * (std::cos(phi) * e1 + std::sin(phi) * e2)).transpose();
          if (q == 0) {
            d.weights(v, joint) = 0.5;
            d.weights(v, kParents[joint]) += 0.5;
            d.joint_regressor(base_kp + b, v) = 1.0 / kFingerRingSize;
          } else {
            d.weights(v, joint) = 1.0;
          }
          if (q == kRingsPerBone) d.joint_regressor(base_kp + 3, v) = 1.0 / kFingerRingSize;
        }
      }
    }
    const int cap = base_vertex + kFingerRings * kFingerRingSize;
    const Vec3 tip = design_keypoint(base_kp + 3);
    const Vec3 dir = (tip - design_keypoint(base_kp + 2)).normalized();
    d.template_vertices.row(cap) = (tip + 0.006 * dir).transpose();
    d.weights(cap, 1 + 3 * f + 2) = 1.0;

    for (int r = 0; r + 1 < kFingerRings; ++r) {
      add_quad_strip(d.faces, base_vertex + r * kFingerRingSize,
                     base_vertex + (r + 1) * kFingerRingSize, kFingerRingSize);
    }
    const int last_ring = base_vertex + (kFingerRings - 1) * kFingerRingSize;
    for (int i = 0; i < kFingerRingSize; ++i) {
      d.faces.push_back({last_ring + i, last_ring + (i + 1) % kFingerRingSize, cap});
    }
  }

  // shape blend directions: global scale, per-axis stretch, per-finger length
  const VertexMatrix& t = d.template_vertices;
  d.shape_dirs.assign(kNumShapeParams, VertexMatrix::Zero(kNumVertices, 3));
  d.shape_dirs[0] = 0.05 * t;
  d.shape_dirs[1].col(0) = 0.05 * t.col(0);
  d.shape_dirs[2].col(1) = 0.05 * t.col(1);
  d.shape_dirs[3].col(2) = 0.05 * t.col(2);
  for (int f = 0; f < 5; ++f) {
    const Vec3 base = design_keypoint(1 + 4 * f);
    const int first = kPalmVertices + f * kFingerVertices;
    for (int v = first; v < first + kFingerVertices; ++v) {
      d.shape_dirs[4 + f].row(v) = 0.05 * (t.row(v) - base.transpose());
    }
  }
  for (int v = 0; v < kPalmVertices; ++v) d.shape_dirs[9](v, 2) = 0.05 * t(v, 2);
  return d;
}

}  // namespace

KeypointMatrix synthetic_keypoints(Handedness handedness) {
  KeypointMatrix k;
  for (int i = 0; i < kNumKeypoints; ++i) k.row(i) = design_keypoint(i).transpose();
  if (handedness == Handedness::kLeft) k.col(1) *= -1.0;
  return k;
}

HandModel make_synthetic_hand(Handedness handedness) {
  HandModel::Data d = right_hand_data();
  if (handedness == Handedness::kLeft) {
    d.handedness = Handedness::kLeft;
    d.template_vertices.col(1) *= -1.0;
    for (auto& dir : d.shape_dirs) dir.col(1) *= -1.0;
    for (auto& f : d.faces) std::swap(f[1], f[2]);
  }
  return HandModel::create(std::move(d));
}

}  // namespace handover
