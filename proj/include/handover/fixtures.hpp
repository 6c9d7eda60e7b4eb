#pragma once

// Shipped example data: the tool catalog, a small tiered corpus, the two
// desk-scale object clouds and observed hands. Used by make_fixtures and
// the tests so both see the same numbers.

#include <vector>

#include "handover/evaluation.hpp"
#include "handover/pipeline.hpp"

namespace handover::fixtures {

ToolCatalog catalog();  // 16 tools

/// Cylinder r = 0.03 m, h = 0.12 m, named "bottle".
ObjectCloud cylinder();
/// Box 0.05 x 0.10 x 0.16 m, named "stapler".
ObjectCloud box();

/// Where the observed hands sit in the world.
RigidTransform world_from_object();

/// Keypoints of the resting synthetic hand placed in the world.
KeypointMatrix observed_keypoints(Handedness h);

std::vector<EvalItem> corpus();

/// Palm-up receiving poses for both hands under both fixture objects.
CannedPoseLibrary pose_library(const HandModels& models);

/// One candidate whose jaws close around the middle of the palm.
GraspCandidate colliding_candidate(const PosedHand& hand);

}  // namespace handover::fixtures
