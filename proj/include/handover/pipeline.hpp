#pragma once

// Imagine a handover configuration in the object frame, then transport it to
// the observed hand in the world frame.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "handover/grasp.hpp"
#include "handover/intent.hpp"

namespace handover {

struct HandModels {
  HandModel left;
  HandModel right;

  const HandModel& get(Handedness h) const { return h == Handedness::kLeft ? left : right; }
  /// Procedural models for both hands.
  static HandModels synthetic();
};

/// Produces receiving hand poses in the object frame.
class ReceivingHandProvider {
 public:
  virtual ~ReceivingHandProvider() = default;
  virtual std::vector<HandPose> receiving_poses(const TaskDescription& task,
                                                const ObjectCloud& cloud) const = 0;
};

/// Produces grasp candidates in the object frame.
class GraspCandidateProvider {
 public:
  virtual ~GraspCandidateProvider() = default;
  virtual std::vector<GraspCandidate> candidates(const TaskDescription& task,
                                                 const ObjectCloud& cloud) const = 0;
};

/// Canned poses keyed by (object name, handedness).
class CannedPoseLibrary : public ReceivingHandProvider {
 public:
  struct Entry {
    std::optional<HandPose> left;
    std::optional<HandPose> right;
  };

  CannedPoseLibrary() = default;
  explicit CannedPoseLibrary(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  void set(const std::string& object, const HandPose& pose);
  const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

  std::vector<HandPose> receiving_poses(const TaskDescription& task,
                                        const ObjectCloud& cloud) const override;

 private:
  std::map<std::string, Entry> entries_;
};

/// Palm-up open hand under the object: the middle fingertip reaches the
/// object's centre line and the palm sits `gap` meters below its lowest point.
class PalmUpPlacementProvider : public ReceivingHandProvider {
 public:
  explicit PalmUpPlacementProvider(const HandModels& models, double gap = 0.01)
      : models_(&models), gap_(gap) {}

  std::vector<HandPose> receiving_poses(const TaskDescription& task,
                                        const ObjectCloud& cloud) const override;

 private:
  const HandModels* models_;
  double gap_;
};

class AntipodalGraspProvider : public GraspCandidateProvider {
 public:
  explicit AntipodalGraspProvider(AntipodalOptions opts = {}) : opts_(opts) {}
  std::vector<GraspCandidate> candidates(const TaskDescription& task,
                                         const ObjectCloud& cloud) const override;

 private:
  AntipodalOptions opts_;
};

/// Returns a fixed list (e.g. loaded from a candidate file).
class FixedGraspProvider : public GraspCandidateProvider {
 public:
  explicit FixedGraspProvider(std::vector<GraspCandidate> list) : list_(std::move(list)) {}
  std::vector<GraspCandidate> candidates(const TaskDescription&, const ObjectCloud&) const override {
    return list_;
  }

 private:
  std::vector<GraspCandidate> list_;
};

struct HardwareLimits {
  double max_width = kMaxGripperWidth;
  double clearance = 0.005;
  GripperGeometry gripper = GripperGeometry::parallel_jaw();
};

struct PipelineConfig {
  SelectionConfig selection;
  GripperGeometry gripper = GripperGeometry::parallel_jaw();
  double max_width = kMaxGripperWidth;

  HardwareLimits limits() const { return {max_width, selection.clearance, gripper}; }
};

struct ValidationCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double limit = 0.0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool pass() const;
  const ValidationCheck* find(std::string_view name) const;
};

struct CandidateAttempt {
  std::size_t index;
  double score;
  double min_distance;
  bool width_ok;
  bool clear;
};

struct HandoverConfiguration {
  TaskDescription task;
  ObjectCloud object;
  HandPose hand_pose;
  PosedHand hand;
  GraspCandidate grasp;
  std::size_t grasp_index;
  double grasp_score;
  std::vector<CandidateAttempt> attempts;  // in evaluation order, best score first
  bool fallback_used;
  HandFrame hand_frame;
  ValidationReport validation;
};

/// Poses the receiving hand, selects the best-scoring grasp that clears the
/// hand (falling back down the ranking), and validates the result.
/// Errors: ProviderEmpty, HandednessMismatch, AllCandidatesCollide.
HandoverConfiguration imagine_configuration(const TaskDescription& task, const ObjectCloud& cloud,
                                            const HandModels& models,
                                            const ReceivingHandProvider& hands,
                                            const GraspCandidateProvider& grasps,
                                            const PipelineConfig& cfg = {});

/// Width, clearance, rotation validity, pose blocks, frame and handedness.
ValidationReport validate_configuration(const HandoverConfiguration& config,
                                        const HardwareLimits& limits = {});

/// Observed receiving hand in the world frame. When mesh vertices are
/// present the frame centre is their centroid, otherwise the keypoint
/// centroid is used on both the observed and the imagined side.
struct Observation {
  KeypointMatrix keypoints;
  std::optional<VertexMatrix> vertices;
};

struct MatchDiagnostics {
  double centre_error;   // meters
  double direction_dot;
  double normal_angle;   // radians
};

struct EndEffectorTarget {
  Point3 position;
  UnitQuaternion orientation;
  RigidTransform matching;  // imagined -> real
  MatchDiagnostics diagnostics;
};

/// Frame of the imagined hand that `match_to_observation` aligns, chosen by
/// the same centre rule as the observation.
HandFrame imagined_frame_for(const HandoverConfiguration& config, const Observation& obs);

/// Errors: HandednessMismatch, DegenerateObservation.
EndEffectorTarget match_to_observation(const HandoverConfiguration& config, const Observation& obs);

}  // namespace handover
