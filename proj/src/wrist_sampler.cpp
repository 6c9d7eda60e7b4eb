#include "handover/wrist_sampler.hpp"

#include <algorithm>
#include <numbers>

namespace handover {

namespace {

constexpr double deg(double d) { return d * std::numbers::pi / 180.0; }

double clip(double v, double lo, double hi, bool& clipped) {
  if (v < lo) {
    clipped = true;
    return lo;
  }
  if (v > hi) {
    clipped = true;
    return hi;
  }
  return v;
}

// per-finger curl (thumb, index, middle, ring, pinky), radians
std::array<double, 5> finger_curl(GripType grip) {
  switch (grip) {
    case GripType::kOpen: return {0.0, 0.0, 0.0, 0.0, 0.0};
    case GripType::kPrecise: return {deg(20), deg(30), deg(15), deg(10), deg(10)};
    case GripType::kPower: return {deg(30), deg(60), deg(60), deg(60), deg(60)};
  }
  return {};
}

}  // namespace

std::string_view to_string(GripType g) {
  switch (g) {
    case GripType::kOpen: return "open";
    case GripType::kPrecise: return "precise";
    case GripType::kPower: return "power";
  }
  return "open";
}

bool WristBounds::contains(const WristAngles& a, double tol) const {
  return a.pronation <= pronation + tol && a.pronation >= -supination - tol &&
         a.flexion <= flexion + tol && a.flexion >= -extension - tol &&
         a.radial <= radial + tol && a.radial >= -ulnar - tol;
}

RotationMatrix wrist_rotation(const WristAngles& a, Handedness handedness) {
  const double mirror = handedness == Handedness::kRight ? 1.0 : -1.0;
  return RotationMatrix::about_x(-mirror * a.pronation) *
         RotationMatrix::about_z(mirror * a.radial) * RotationMatrix::about_y(a.flexion);
}

WristSample sample_wrist_pose(const WristAngles& request, GripType grip, Handedness handedness,
                              const WristBounds& bounds) {
  WristSample s;
  s.requested = request;
  s.grip = grip;
  s.applied.pronation = clip(request.pronation, -bounds.supination, bounds.pronation, s.clipped);
  s.applied.flexion = clip(request.flexion, -bounds.extension, bounds.flexion, s.clipped);
  s.applied.radial = clip(request.radial, -bounds.ulnar, bounds.radial, s.clipped);

  s.pose.handedness = handedness;
  s.pose.rotations[0] = matrix_to_rot6d(wrist_rotation(s.applied, handedness));
  const auto curl = finger_curl(grip);
  const double mirror = handedness == Handedness::kRight ? 1.0 : -1.0;
  for (int f = 0; f < 5; ++f) {
    // fingers curl toward the palm (about +y); the thumb sweeps across it
    const RotationMatrix r = f == 0 ? RotationMatrix::about_z(-mirror * curl[f])
                                    : RotationMatrix::about_y(curl[f]);
    for (int b = 0; b < 3; ++b) s.pose.rotations[1 + 3 * f + b] = matrix_to_rot6d(r);
  }
  return s;
}

std::vector<WristSample> canonical_wrist_poses(GripType grip, Handedness handedness,
                                               const WristBounds& bounds) {
  const std::array<std::pair<double, double>, 3> forearm{{
      {0.0, 0.0},
      {-bounds.supination, 0.0},
      {-bounds.supination / 2, -bounds.ulnar / 2},
  }};
  const std::array<double, 3> flexion{-bounds.extension, 0.0, bounds.flexion};
  std::vector<WristSample> out;
  for (const auto& [pro, dev] : forearm) {
    for (double flex : flexion) {
      out.push_back(sample_wrist_pose({pro, flex, dev}, grip, handedness, bounds));
    }
  }
  return out;
}

}  // namespace handover
