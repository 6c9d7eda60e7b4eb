#include "handover/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "handover/synthetic_hand.hpp"

namespace handover {

HandModels HandModels::synthetic() {
  return {make_synthetic_hand(Handedness::kLeft), make_synthetic_hand(Handedness::kRight)};
}

void CannedPoseLibrary::set(const std::string& object, const HandPose& pose) {
  Entry& e = entries_[object];
  (pose.handedness == Handedness::kLeft ? e.left : e.right) = pose;
}

std::vector<HandPose> CannedPoseLibrary::receiving_poses(const TaskDescription& task,
                                                         const ObjectCloud&) const {
  const auto it = entries_.find(task.object);
  if (it == entries_.end()) return {};
  const auto& pose = task.handedness == Handedness::kLeft ? it->second.left : it->second.right;
  if (!pose) return {};
  return {*pose};
}

std::vector<HandPose> PalmUpPlacementProvider::receiving_poses(const TaskDescription& task,
                                                               const ObjectCloud& cloud) const {
  cloud.validate();
  HandPose pose;
  pose.handedness = task.handedness;
  pose.rotations[0] = matrix_to_rot6d(RotationMatrix::about_x(std::numbers::pi));
  const PosedHand at_origin = lbs_forward(models_->get(task.handedness), pose);

  const Eigen::RowVector3d lo = cloud.points.colwise().minCoeff();
  const Eigen::RowVector3d hi = cloud.points.colwise().maxCoeff();
  const Eigen::RowVector3d mid = 0.5 * (lo + hi);
  const Point3 hand_centre = geometric_center(at_origin.vertices);
  const double hand_top = at_origin.vertices.col(2).maxCoeff();
  pose.translation = Vec3(mid.x() - at_origin.joints(keypoint::kMiddleTip, 0),
                          mid.y() - hand_centre.y(), lo.z() - gap_ - hand_top);
  return {pose};
}

std::vector<GraspCandidate> AntipodalGraspProvider::candidates(const TaskDescription&,
                                                               const ObjectCloud& cloud) const {
  return antipodal_candidates(cloud, opts_);
}

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate_configuration(const HandoverConfiguration& config,
                                        const HardwareLimits& limits) {
  ValidationReport r;
  const double width = config.grasp.width();
  r.checks.push_back({"width", width > 0.0 && width <= limits.max_width, width, limits.max_width});

  const ClearanceResult clear =
      clearance_check(config.grasp, limits.gripper, config.hand, limits.clearance);
  r.checks.push_back({"clearance", clear.pass, clear.min_distance, limits.clearance});

  const Mat3& rot = config.grasp.pose().rotation.matrix();
  const double ortho = (rot.transpose() * rot - Mat3::Identity()).norm();
  r.checks.push_back({"grasp_rotation", RotationMatrix::is_valid(rot), ortho,
                      kVerificationTolerance});

  int valid_blocks = 0;
  for (const auto& block : config.hand_pose.rotations) {
    try {
      (void)rot6d_to_matrix(block);
      ++valid_blocks;
    } catch (const Error&) {
    }
  }
  r.checks.push_back({"pose_blocks", valid_blocks == kNumJoints, static_cast<double>(valid_blocks),
                      static_cast<double>(kNumJoints)});

  const double dp = std::abs(config.hand_frame.direction().dot(config.hand_frame.normal()));
  const bool frame_ok = dp <= 1e-10 &&
                        RotationMatrix::is_valid(config.hand_frame.transform().rotation.matrix()) &&
                        config.hand_frame.centre().allFinite();
  r.checks.push_back({"hand_frame", frame_ok, dp, 1e-10});

  const bool same_hand = config.hand.handedness == config.task.handedness &&
                         config.hand_pose.handedness == config.task.handedness;
  r.checks.push_back({"handedness", same_hand, same_hand ? 1.0 : 0.0, 1.0});
  return r;
}

HandoverConfiguration imagine_configuration(const TaskDescription& task, const ObjectCloud& cloud,
                                            const HandModels& models,
                                            const ReceivingHandProvider& hands,
                                            const GraspCandidateProvider& grasps,
                                            const PipelineConfig& cfg) {
  cfg.selection.validate();
  cfg.gripper.validate();
  cloud.validate();

  const std::vector<HandPose> poses = hands.receiving_poses(task, cloud);
  if (poses.empty()) {
    fail(ErrorCode::kProviderEmpty, "no receiving hand pose for '" + task.object + "' (" +
                                        std::string(to_string(task.handedness)) + ")");
  }
  const HandPose& pose = poses.front();
  if (pose.handedness != task.handedness) {
    fail(ErrorCode::kHandednessMismatch, "receiving pose handedness differs from the task");
  }
  PosedHand hand = lbs_forward(models.get(task.handedness), pose);

  const std::vector<GraspCandidate> candidates = grasps.candidates(task, cloud);
  if (candidates.empty()) fail(ErrorCode::kProviderEmpty, "grasp provider returned no candidates");
  const std::vector<double> scores = score_candidates(candidates, hand, cfg.selection);

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  std::vector<CandidateAttempt> attempts;
  std::optional<std::size_t> chosen;
  for (std::size_t idx : order) {
    const GraspCandidate& c = candidates[idx];
    const ClearanceResult clear = clearance_check(c, cfg.gripper, hand, cfg.selection.clearance);
    const bool width_ok = c.width() <= cfg.max_width;
    attempts.push_back({idx, scores[idx], clear.min_distance, width_ok, clear.pass});
    if (clear.pass && width_ok) {
      chosen = idx;
      break;
    }
  }
  if (!chosen) {
    std::vector<double> distances(candidates.size());
    for (const auto& a : attempts) distances[a.index] = a.min_distance;
    throw AllCandidatesCollide("all " + std::to_string(candidates.size()) +
                                   " grasp candidates collide with the receiving hand",
                               std::move(distances));
  }

  HandFrame frame = hand_frame_of(hand);
  HandoverConfiguration config{task,
                               cloud,
                               pose,
                               std::move(hand),
                               candidates[*chosen],
                               *chosen,
                               scores[*chosen],
                               std::move(attempts),
                               *chosen != order.front(),
                               frame,
                               {}};
  config.validation = validate_configuration(config, cfg.limits());
  return config;
}

HandFrame imagined_frame_for(const HandoverConfiguration& config, const Observation& obs) {
  if (obs.vertices) return config.hand_frame;
  return keypoint_frame_of(config.hand.joints, config.hand.handedness);
}

EndEffectorTarget match_to_observation(const HandoverConfiguration& config,
                                       const Observation& obs) {
  Handedness observed;
  try {
    observed = classify_handedness(obs.keypoints);
  } catch (const Error& e) {
    fail(ErrorCode::kDegenerateObservation, std::string("observed keypoints: ") + e.what());
  }
  if (observed != config.task.handedness) {
    fail(ErrorCode::kHandednessMismatch,
         "observed a " + std::string(to_string(observed)) + " hand but the task expects the " +
             std::string(to_string(config.task.handedness)) + " hand");
  }

  std::optional<HandFrame> real;
  try {
    const Point3 centre = obs.vertices ? geometric_center(*obs.vertices)
                                       : geometric_center(obs.keypoints);
    real = build_frame(centre, hand_direction(obs.keypoints).vec(),
                       palm_normal(obs.keypoints, observed).vec());
  } catch (const Error& e) {
    fail(ErrorCode::kDegenerateObservation, std::string("observed hand frame: ") + e.what());
  }

  const HandFrame imagined = imagined_frame_for(config, obs);
  const RigidTransform h = matching_transform(imagined, *real);
  const RigidTransform& grasp = config.grasp.pose();
  const Pose target = transform_pose(grasp.translation, to_quaternion(grasp.rotation), h);

  const HandFrame moved = transform_frame(h, imagined);
  const MatchDiagnostics diag{
      (moved.centre() - real->centre()).norm(),
      moved.direction().dot(real->direction()),
      std::atan2(moved.normal().vec().cross(real->normal().vec()).norm(),
                 moved.normal().dot(real->normal())),
  };
  return {target.position, target.orientation, h, diag};
}

}  // namespace handover
