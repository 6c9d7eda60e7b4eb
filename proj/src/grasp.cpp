#include "handover/grasp.hpp"

#include <cmath>
#include <sstream>

#include "handover/simd/kernels.hpp"

namespace handover {

std::string_view to_string(CandidateSource s) {
  switch (s) {
    case CandidateSource::kExternal: return "external";
    case CandidateSource::kAntipodalSampler: return "antipodal-sampler";
    case CandidateSource::kFile: return "file";
  }
  return "external";
}

CandidateSource parse_candidate_source(std::string_view s) {
  if (s == "external") return CandidateSource::kExternal;
  if (s == "antipodal-sampler") return CandidateSource::kAntipodalSampler;
  if (s == "file") return CandidateSource::kFile;
  fail(ErrorCode::kInvalidInput, "unknown candidate source '" + std::string(s) + "'");
}

std::string_view to_string(CosineMode m) {
  return m == CosineMode::kSigned ? "signed" : "absolute";
}

CosineMode parse_cosine_mode(std::string_view s) {
  if (s == "signed") return CosineMode::kSigned;
  if (s == "absolute") return CosineMode::kAbsolute;
  fail(ErrorCode::kInvalidInput, "cosine mode must be 'signed' or 'absolute'");
}

GraspCandidate::GraspCandidate(const RigidTransform& pose, double width, CandidateSource source,
                               double max_width)
    : pose_(pose), width_(width), source_(source) {
  if (!pose.translation.allFinite()) fail(ErrorCode::kInvalidInput, "grasp translation is not finite");
  if (!(width > 0.0) || !(width <= max_width)) {
    std::ostringstream msg;
    msg << "grasp width " << width << " m outside (0, " << max_width << "]";
    fail(ErrorCode::kWidthExceedsGripper, msg.str());
  }
}

void SelectionConfig::validate() const {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    fail(ErrorCode::kInvalidInput, "lambda must be finite and non-negative");
  }
  if (!std::isfinite(clearance) || !(clearance > 0.0)) {
    fail(ErrorCode::kInvalidInput, "clearance must be positive");
  }
}

void GripperGeometry::validate() const {
  if (spheres.empty()) fail(ErrorCode::kInvalidInput, "gripper geometry needs at least one sphere");
  for (const auto& s : spheres) {
    if (!s.centre.allFinite() || !(s.radius > 0.0)) {
      fail(ErrorCode::kInvalidInput, "gripper sphere must have finite centre and positive radius");
    }
  }
}

GripperGeometry GripperGeometry::parallel_jaw() {
  constexpr double finger_x = kMaxGripperWidth / 2 + 0.008;
  GripperGeometry g;
  for (double side : {-1.0, 1.0}) {
    g.spheres.push_back({{side * finger_x, 0.0, 0.010}, 0.008});
    g.spheres.push_back({{side * finger_x, 0.0, -0.010}, 0.008});
    g.spheres.push_back({{side * finger_x, 0.0, -0.030}, 0.009});
    g.spheres.push_back({{side * 0.030, 0.0, -0.070}, 0.030});
  }
  g.spheres.push_back({{0.0, 0.0, -0.070}, 0.030});
  g.spheres.push_back({{0.0, 0.0, -0.120}, 0.035});
  return g;
}

GripperAxis gripper_center_and_direction(const GraspCandidate& c) {
  return {c.pose().translation, UnitVec3(c.pose().rotation.column(2))};
}

double score_candidate(const UnitVec3& v_g, const Point3& p_g, const UnitVec3& v_h,
                       const Point3& p_h, const SelectionConfig& cfg) {
  const double cosine = v_g.dot(v_h);
  const double angle_term = cfg.mode == CosineMode::kSigned ? cosine : std::abs(cosine);
  return angle_term - cfg.lambda * (p_g - p_h).norm();
}

std::vector<double> score_candidates(std::span<const GraspCandidate> candidates,
                                     const PosedHand& hand, const SelectionConfig& cfg) {
  const UnitVec3 v_h = hand_direction(hand);
  const Point3 p_h = geometric_center(hand.vertices);
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) {
    const auto [p_g, v_g] = gripper_center_and_direction(c);
    scores.push_back(score_candidate(v_g, p_g, v_h, p_h, cfg));
  }
  return scores;
}

Selection select_grasp(std::span<const GraspCandidate> candidates, const PosedHand& hand,
                       const SelectionConfig& cfg) {
  if (candidates.empty()) fail(ErrorCode::kEmptyCandidateSet, "no grasp candidates to select from");
  const std::vector<double> scores = score_candidates(candidates, hand, cfg);
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] < scores[best]) best = i;
  }
  return {best, candidates[best], scores[best]};
}

std::vector<Sphere> place_gripper(const GraspCandidate& c, const GripperGeometry& geom) {
  std::vector<Sphere> out;
  out.reserve(geom.spheres.size());
  for (const auto& s : geom.spheres) out.push_back({c.pose().apply(s.centre), s.radius});
  return out;
}

ClearanceResult clearance_check(const GraspCandidate& c, const GripperGeometry& geom,
                                const PosedHand& hand, double delta) {
  geom.validate();
  std::vector<double> packed;
  for (const auto& s : place_gripper(c, geom)) {
    packed.insert(packed.end(), {s.centre.x(), s.centre.y(), s.centre.z(), s.radius});
  }
  const auto n = static_cast<std::size_t>(hand.vertices.rows());
  const double d = simd::min_sphere_point_distance({hand.vertices.col(0).data(), n},
                                                   {hand.vertices.col(1).data(), n},
                                                   {hand.vertices.col(2).data(), n}, packed);
  return {d >= delta, d};
}

std::string grasp_generator_prompt(std::string_view object_name) {
  std::string hyphenated(object_name);
  for (char& ch : hyphenated) {
    if (ch == ' ') ch = '-';
  }
  return "How can 2-fingers parallel gripper grasp the " + hyphenated + "?";
}

}  // namespace handover
