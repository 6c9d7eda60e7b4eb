#pragma once

// Grasp candidates for a two-finger parallel gripper, scored against the
// receiving hand. Gripper frame: +z is the approach axis (base toward the
// fingers), +x the closing axis, origin between the fingertips.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "handover/hand_model.hpp"
#include "handover/object_cloud.hpp"

namespace handover {

/// Jaw opening limit of the gripper, meters.
inline constexpr double kMaxGripperWidth = 0.074;

enum class CandidateSource { kExternal, kAntipodalSampler, kFile };

std::string_view to_string(CandidateSource s);
CandidateSource parse_candidate_source(std::string_view s);

class GraspCandidate {
 public:
  /// Throws WidthExceedsGripper unless 0 < width <= max_width.
  GraspCandidate(const RigidTransform& pose, double width, CandidateSource source,
                 double max_width = kMaxGripperWidth);

  const RigidTransform& pose() const noexcept { return pose_; }
  double width() const noexcept { return width_; }
  CandidateSource source() const noexcept { return source_; }

 private:
  RigidTransform pose_;
  double width_;
  CandidateSource source_;
};

enum class CosineMode {
  kSigned,    // signed cosine: prefers anti-parallel approach
  kAbsolute,  // |cosine|: prefers perpendicular approach
};

std::string_view to_string(CosineMode m);
CosineMode parse_cosine_mode(std::string_view s);

struct SelectionConfig {
  double lambda = 1.0;       // distance weight, 1/m
  CosineMode mode = CosineMode::kSigned;
  double clearance = 0.005;  // meters

  /// Throws InvalidInput for non-finite or negative lambda or non-positive
  /// clearance.
  void validate() const;
};

struct Sphere {
  Point3 centre;
  double radius;
};

/// Collision proxy for the gripper, spheres expressed in the gripper frame.
struct GripperGeometry {
  std::vector<Sphere> spheres;

  void validate() const;
  /// Two-finger gripper with fingers opened to the maximum width.
  static GripperGeometry parallel_jaw();
};

struct GripperAxis {
  Point3 centre;
  UnitVec3 approach;
};

/// p_g is the candidate's translation, v_g the third rotation column.
GripperAxis gripper_center_and_direction(const GraspCandidate& c);

/// signed: (v_g . v_h) - lambda |p_g - p_h|; absolute uses |v_g . v_h|.
double score_candidate(const UnitVec3& v_g, const Point3& p_g, const UnitVec3& v_h,
                       const Point3& p_h, const SelectionConfig& cfg);

/// Scores against the hand's direction and vertex centroid.
std::vector<double> score_candidates(std::span<const GraspCandidate> candidates,
                                     const PosedHand& hand, const SelectionConfig& cfg);

struct Selection {
  std::size_t index;
  GraspCandidate candidate;
  double score;
};

/// Argmin of the score, lowest index on ties. EmptyCandidateSet for n = 0.
Selection select_grasp(std::span<const GraspCandidate> candidates, const PosedHand& hand,
                       const SelectionConfig& cfg);

/// Gripper proxy spheres placed at the candidate pose.
std::vector<Sphere> place_gripper(const GraspCandidate& c, const GripperGeometry& geom);

struct ClearanceResult {
  bool pass;
  double min_distance;  // negative on penetration
};

/// min over (sphere, hand vertex) of |centre - vertex| - radius; passes when
/// that is >= delta.
ClearanceResult clearance_check(const GraspCandidate& c, const GripperGeometry& geom,
                                const PosedHand& hand, double delta);

struct AntipodalOptions {
  double max_width = kMaxGripperWidth;
  double friction_half_angle = 0.2618;  // 15 degrees
  std::size_t count = 32;
  std::uint64_t seed = 0;
};

/// Deterministic antipodal pair sampler: every point pair closer than
/// max_width whose inward normals lie within the friction cone of the line
/// joining them is eligible; `count` of them are drawn with the seed and
/// emitted in pair order. Normals are estimated when the cloud has none.
/// Errors: NoCandidatesFound, InvalidInput.
std::vector<GraspCandidate> antipodal_candidates(const ObjectCloud& cloud,
                                                 const AntipodalOptions& opts);

/// The natural-language request a learned grasp generator would receive.
std::string grasp_generator_prompt(std::string_view object_name);

}  // namespace handover
