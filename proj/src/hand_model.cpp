#include "handover/hand_model.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <string>

#include "handover/simd/kernels.hpp"

namespace handover {

std::string_view to_string(Handedness h) { return h == Handedness::kLeft ? "left" : "right"; }

Handedness parse_handedness(std::string_view s) {
  std::string lower;
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "left") return Handedness::kLeft;
  if (lower == "right") return Handedness::kRight;
  fail(ErrorCode::kInvalidInput, "handedness must be 'left' or 'right', got '" + std::string(s) + "'");
}

namespace {

[[noreturn]] void mismatch(const std::string& what) { fail(ErrorCode::kModelMismatch, what); }

}  // namespace

HandModel HandModel::create(Data d) {
  const Eigen::Index v = d.template_vertices.rows();
  if (v != kNumVertices) {
    mismatch("hand model must have " + std::to_string(kNumVertices) + " vertices, got " +
             std::to_string(v));
  }
  if (!d.template_vertices.allFinite()) mismatch("template vertices are not finite");
  if (d.weights.rows() != v || d.weights.cols() != kNumJoints) {
    mismatch("skinning weights must be V x 16");
  }
  if (d.joint_regressor.rows() != kNumKeypoints || d.joint_regressor.cols() != v) {
    mismatch("joint regressor must be 21 x V");
  }
  if (d.shape_dirs.size() > static_cast<std::size_t>(kNumShapeParams)) {
    mismatch("at most 10 shape blend directions are supported");
  }
  for (const auto& dir : d.shape_dirs) {
    if (dir.rows() != v) mismatch("shape blend direction must be V x 3");
  }
  if (d.parents[0] != -1) mismatch("joint 0 (wrist) must be the kinematic root");
  for (int k = 1; k < kNumJoints; ++k) {
    if (d.parents[k] < 0 || d.parents[k] >= k) {
      mismatch("parent of joint " + std::to_string(k) + " must precede it");
    }
  }
  for (Eigen::Index i = 0; i < v; ++i) {
    const double sum = d.weights.row(i).sum();
    if (d.weights.row(i).minCoeff() < 0.0 || std::abs(sum - 1.0) > 1e-6) {
      std::ostringstream msg;
      msg << "weight row " << i << " must be non-negative and sum to 1 (sum=" << sum << ")";
      mismatch(msg.str());
    }
    d.weights.row(i) /= sum;
  }
  for (const auto& f : d.faces) {
    for (int idx : f) {
      if (idx < 0 || idx >= v) mismatch("face index out of range");
    }
  }
  return HandModel(std::move(d));
}

VertexMatrix HandModel::shaped_vertices(std::span<const double> beta) const {
  VertexMatrix out = d_.template_vertices;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (beta[i] == 0.0) continue;
    if (i >= d_.shape_dirs.size()) {
      mismatch("shape parameter " + std::to_string(i) + " has no blend direction in this model");
    }
    out += beta[i] * d_.shape_dirs[i];
  }
  return out;
}

KeypointMatrix HandModel::rest_keypoints(std::span<const double> beta) const {
  return d_.joint_regressor * shaped_vertices(beta);
}

std::vector<RigidTransform> chain_transforms(std::span<const int> parents,
                                             std::span<const Point3> rest_joints,
                                             std::span<const RotationMatrix> local_rotations,
                                             const Vec3& translation) {
  const std::size_t k_count = parents.size();
  if (rest_joints.size() != k_count || local_rotations.size() != k_count) {
    mismatch("kinematic chain arrays disagree in length");
  }
  std::vector<RigidTransform> world(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const int parent = parents[k];
    if (parent < 0) {
      world[k] = {local_rotations[k], rest_joints[k]};
    } else {
      if (static_cast<std::size_t>(parent) >= k) mismatch("parent must precede child");
      world[k] = world[parent] *
                 RigidTransform{local_rotations[k], rest_joints[k] - rest_joints[parent]};
    }
  }
  std::vector<RigidTransform> rel(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    rel[k] = {world[k].rotation,
              world[k].translation - world[k].rotation * rest_joints[k] + translation};
  }
  return rel;
}

VertexMatrix skin(const VertexMatrix& rest, const Eigen::MatrixXd& weights,
                  std::span<const RigidTransform> transforms) {
  const Eigen::Index n = rest.rows();
  if (weights.rows() != n || weights.cols() != static_cast<Eigen::Index>(transforms.size())) {
    mismatch("skinning weights must be V x K");
  }
  std::vector<double> packed(12 * transforms.size());
  for (std::size_t k = 0; k < transforms.size(); ++k) {
    const Mat3& r = transforms[k].rotation.matrix();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) packed[12 * k + 4 * i + j] = r(i, j);
      packed[12 * k + 4 * i + 3] = transforms[k].translation[i];
    }
  }
  VertexMatrix out(n, 3);
  const auto un = static_cast<std::size_t>(n);
  simd::skin_vertices({
      .rest_x = {rest.col(0).data(), un},
      .rest_y = {rest.col(1).data(), un},
      .rest_z = {rest.col(2).data(), un},
      .weights = {weights.data(), static_cast<std::size_t>(weights.size())},
      .transforms = packed,
      .out_x = {out.col(0).data(), un},
      .out_y = {out.col(1).data(), un},
      .out_z = {out.col(2).data(), un},
  });
  return out;
}

std::vector<RigidTransform> skinning_transforms(const HandModel& model, const HandPose& pose) {
  if (pose.handedness != model.handedness()) {
    mismatch("pose handedness does not match the hand model");
  }
  if (!pose.translation.allFinite()) mismatch("pose translation is not finite");
  const KeypointMatrix rest = model.rest_keypoints(pose.shape);

  std::array<RotationMatrix, kNumJoints> local;
  std::array<Point3, kNumJoints> joints;
  for (int k = 0; k < kNumJoints; ++k) {
    try {
      local[k] = rot6d_to_matrix(pose.rotations[k]);
    } catch (const Error& e) {
      fail(ErrorCode::kInvalidPoseBlock,
           "pose block " + std::to_string(k) + " is degenerate: " + e.what());
    }
    joints[k] = rest.row(kJointKeypoint[k]).transpose();
  }
  return chain_transforms(model.parents(), joints, local, pose.translation);
}

PosedHand lbs_forward(const HandModel& model, const HandPose& pose) {
  const std::vector<RigidTransform> rel = skinning_transforms(model, pose);
  const VertexMatrix shaped = model.shaped_vertices(pose.shape);
  const KeypointMatrix rest = model.joint_regressor() * shaped;

  PosedHand out;
  out.handedness = pose.handedness;
  out.vertices = skin(shaped, model.weights(), rel);
  for (int k = 0; k < kNumJoints; ++k) {
    const int kp = kJointKeypoint[k];
    out.joints.row(kp) = rel[k].apply(rest.row(kp).transpose()).transpose();
  }
  for (std::size_t f = 0; f < kTipKeypoint.size(); ++f) {
    const int kp = kTipKeypoint[f];
    out.joints.row(kp) = rel[kTipParentJoint[f]].apply(rest.row(kp).transpose()).transpose();
  }
  return out;
}

UnitVec3 hand_direction(const KeypointMatrix& joints) {
  const Vec3 d = (joints.row(keypoint::kMiddleTip) - joints.row(keypoint::kWrist)).transpose();
  if (!(d.norm() >= 1e-6)) {
    fail(ErrorCode::kDegenerateDirection, "wrist and middle fingertip coincide");
  }
  return UnitVec3(d);
}

UnitVec3 palm_normal(const KeypointMatrix& joints, Handedness handedness) {
  const Vec3 wrist = joints.row(keypoint::kWrist).transpose();
  const Vec3 index = joints.row(keypoint::kIndexBase).transpose() - wrist;
  const Vec3 pinky = joints.row(keypoint::kPinkyBase).transpose() - wrist;
  Vec3 n = index.cross(pinky);
  const double scale = index.norm() * pinky.norm();
  if (!(n.norm() > 1e-9 * scale) || !(scale > 0.0)) {
    fail(ErrorCode::kDegenerateNormal, "wrist, index base and pinky base are collinear");
  }
  if (handedness == Handedness::kLeft) n = -n;
  return UnitVec3(n, 0.0);
}

Point3 geometric_center(const VertexMatrix& points) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (n == 0) fail(ErrorCode::kInvalidInput, "geometric_center of an empty point set");
  const auto s = simd::sum_points({points.col(0).data(), n}, {points.col(1).data(), n},
                                  {points.col(2).data(), n});
  return Point3(s[0], s[1], s[2]) / static_cast<double>(n);
}

Point3 geometric_center(const KeypointMatrix& points) {
  return points.colwise().mean().transpose();
}

Handedness classify_handedness(const KeypointMatrix& joints) {
  if (!joints.allFinite()) fail(ErrorCode::kDegenerateObservation, "keypoints are not finite");
  const Vec3 wrist = joints.row(keypoint::kWrist).transpose();
  const Vec3 index = joints.row(keypoint::kIndexBase).transpose() - wrist;
  const Vec3 pinky = joints.row(keypoint::kPinkyBase).transpose() - wrist;
  const Vec3 thumb = joints.row(keypoint::kThumbBase).transpose() - wrist;
  const double triple = index.cross(pinky).dot(thumb);
  if (std::abs(triple) < 1e-9) {
    fail(ErrorCode::kAmbiguousHandedness, "thumb lies in the palm plane; handedness is ambiguous");
  }
  return triple > 0.0 ? Handedness::kRight : Handedness::kLeft;
}

HandFrame hand_frame_of(const PosedHand& hand) {
  return build_frame(geometric_center(hand.vertices), hand_direction(hand).vec(),
                     palm_normal(hand).vec());
}

HandFrame keypoint_frame_of(const KeypointMatrix& joints, Handedness handedness) {
  return build_frame(geometric_center(joints), hand_direction(joints).vec(),
                     palm_normal(joints, handedness).vec());
}

}  // namespace handover
