#pragma once

// Receiving-hand pose sampler over the three wrist degrees of freedom and
// three grip styles.

#include <vector>

#include "handover/hand_model.hpp"

namespace handover {

enum class GripType { kOpen, kPrecise, kPower };

std::string_view to_string(GripType g);

/// Radians. Positive values are pronation, flexion and radial deviation;
/// negative values supination, extension and ulnar deviation.
struct WristAngles {
  double pronation = 0.0;
  double flexion = 0.0;
  double radial = 0.0;
};

/// Maximal wrist range of an unaffected adult, radians.
struct WristBounds {
  double pronation = deg(76.0);
  double supination = deg(85.0);
  double flexion = deg(75.0);
  double extension = deg(75.0);
  double radial = deg(20.0);
  double ulnar = deg(45.0);

  bool contains(const WristAngles& a, double tol = 1e-12) const;

 private:
  static constexpr double deg(double d) { return d * 3.14159265358979323846 / 180.0; }
};

struct WristSample {
  WristAngles requested;
  WristAngles applied;  // after clipping to the bounds
  bool clipped = false;
  GripType grip = GripType::kOpen;
  HandPose pose;        // root block carries the wrist rotation
};

/// Wrist rotation for a hand at rest (fingers +x, palm -z for the right
/// hand): R = Rx(-pronation) Rz(radial) Ry(flexion), mirrored for the left.
RotationMatrix wrist_rotation(const WristAngles& angles, Handedness handedness);

/// Clips out-of-range angles to the bounds and flags it; never throws for
/// range violations.
WristSample sample_wrist_pose(const WristAngles& request, GripType grip, Handedness handedness,
                              const WristBounds& bounds = {});

/// Nine canonical receiving poses: extension/neutral/flexion extremes for
/// each of three forearm/deviation combinations.
std::vector<WristSample> canonical_wrist_poses(GripType grip, Handedness handedness,
                                               const WristBounds& bounds = {});

}  // namespace handover
