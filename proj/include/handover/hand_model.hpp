#pragma once

// Articulated hand: linear blend skinning, keypoint geometry and
// handedness classification.
//
// Keypoint layout (21): 0 wrist; 1-4 thumb; 5-8 index; 9-12 middle;
// 13-16 ring; 17-20 pinky. The last keypoint of each finger is the tip.
// Skinning joints (16) are the non-tip keypoints in the same order.

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "handover/geometry.hpp"

namespace handover {

enum class Handedness { kLeft, kRight };

std::string_view to_string(Handedness h);
/// Accepts "left"/"right" in any case; throws InvalidInput otherwise.
Handedness parse_handedness(std::string_view s);
inline Handedness opposite(Handedness h) {
  return h == Handedness::kLeft ? Handedness::kRight : Handedness::kLeft;
}

inline constexpr int kNumVertices = 778;
inline constexpr int kNumJoints = 16;
inline constexpr int kNumKeypoints = 21;
inline constexpr int kNumShapeParams = 10;

namespace keypoint {
inline constexpr int kWrist = 0;
inline constexpr int kThumbBase = 1;
inline constexpr int kIndexBase = 5;
inline constexpr int kMiddleTip = 12;
inline constexpr int kPinkyBase = 17;
}  // namespace keypoint

/// Keypoint index of each skinning joint.
inline constexpr std::array<int, kNumJoints> kJointKeypoint{0, 1, 2, 3, 5, 6, 7, 9,
                                                            10, 11, 13, 14, 15, 17, 18, 19};
/// Fingertip keypoints and the skinning joint each one rides on.
inline constexpr std::array<int, 5> kTipKeypoint{4, 8, 12, 16, 20};
inline constexpr std::array<int, 5> kTipParentJoint{3, 6, 9, 12, 15};

using VertexMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;  // column-major: SoA
using KeypointMatrix = Eigen::Matrix<double, kNumKeypoints, 3>;
using FaceList = std::vector<std::array<int, 3>>;

/// Immutable model parameters. Construct through `HandModel::create`.
class HandModel {
 public:
  struct Data {
    VertexMatrix template_vertices;         // V x 3
    Eigen::MatrixXd weights;                // V x K, rows sum to 1
    Eigen::MatrixXd joint_regressor;        // 21 x V
    std::vector<VertexMatrix> shape_dirs;   // up to 10 blend directions, V x 3 each
    std::array<int, kNumJoints> parents{};  // parents[0] == -1
    Handedness handedness = Handedness::kRight;
    FaceList faces;                         // optional topology
  };

  /// Validates and normalizes weight rows. Throws ModelMismatch on
  /// dimension or invariant violations.
  static HandModel create(Data data);

  const VertexMatrix& template_vertices() const noexcept { return d_.template_vertices; }
  const Eigen::MatrixXd& weights() const noexcept { return d_.weights; }
  const Eigen::MatrixXd& joint_regressor() const noexcept { return d_.joint_regressor; }
  const std::vector<VertexMatrix>& shape_dirs() const noexcept { return d_.shape_dirs; }
  const std::array<int, kNumJoints>& parents() const noexcept { return d_.parents; }
  Handedness handedness() const noexcept { return d_.handedness; }
  const FaceList& faces() const noexcept { return d_.faces; }
  int num_vertices() const noexcept { return static_cast<int>(d_.template_vertices.rows()); }

  /// Template with the shape blend applied; joints regressed from it.
  VertexMatrix shaped_vertices(std::span<const double> beta) const;
  KeypointMatrix rest_keypoints(std::span<const double> beta = {}) const;

 private:
  explicit HandModel(Data d) : d_(std::move(d)) {}
  Data d_;
};

struct HandPose {
  Vec3 translation = Vec3::Zero();
  std::array<Rot6D, kNumJoints> rotations;  // root first
  std::array<double, kNumShapeParams> shape{};
  Handedness handedness = Handedness::kRight;

  HandPose() { rotations.fill(kIdentityRot6D); }
};

struct PosedHand {
  VertexMatrix vertices;
  KeypointMatrix joints;
  Handedness handedness = Handedness::kRight;
};

/// Linear blend skinning. Errors: InvalidPoseBlock, ModelMismatch.
PosedHand lbs_forward(const HandModel& model, const HandPose& pose);

/// Forward kinematics over an arbitrary tree (parents[k] < k, root -1).
/// Returns, per joint, the rest-relative transform x -> G_k (x - J_k) + t
/// where G_k composes the local rotations along the chain.
std::vector<RigidTransform> chain_transforms(std::span<const int> parents,
                                             std::span<const Point3> rest_joints,
                                             std::span<const RotationMatrix> local_rotations,
                                             const Vec3& translation);

/// v' = sum_k w(v,k) T_k v over a V x K weight matrix.
VertexMatrix skin(const VertexMatrix& rest, const Eigen::MatrixXd& weights,
                  std::span<const RigidTransform> transforms);

/// `chain_transforms` for a hand model and pose.
std::vector<RigidTransform> skinning_transforms(const HandModel& model, const HandPose& pose);

/// normalize(middle tip - wrist). DegenerateDirection if closer than 1e-6 m.
UnitVec3 hand_direction(const KeypointMatrix& joints);
inline UnitVec3 hand_direction(const PosedHand& hand) { return hand_direction(hand.joints); }

/// Normal leaving the palm side. Right hands use
/// (index base - wrist) x (pinky base - wrist); left hands flip the sign.
UnitVec3 palm_normal(const KeypointMatrix& joints, Handedness handedness);
inline UnitVec3 palm_normal(const PosedHand& hand) {
  return palm_normal(hand.joints, hand.handedness);
}

/// Arithmetic mean of the rows of `points` (N >= 1).
Point3 geometric_center(const VertexMatrix& points);
Point3 geometric_center(const KeypointMatrix& points);

/// Sign of ((index - wrist) x (pinky - wrist)) . (thumb - wrist): positive is
/// a right hand. AmbiguousHandedness if |triple| < 1e-9 m^3.
Handedness classify_handedness(const KeypointMatrix& joints);

/// Frame centred on the vertex centroid with the hand direction and palm
/// normal as axes.
HandFrame hand_frame_of(const PosedHand& hand);

/// Same axes as `hand_frame_of`, centred on the keypoint centroid. Used when
/// only keypoints are observed.
HandFrame keypoint_frame_of(const KeypointMatrix& joints, Handedness handedness);

}  // namespace handover
