#pragma once

#include "handover/hand_model.hpp"

namespace handover {

/// Procedurally generated 778-vertex hand that follows the model layout:
/// a tube-shaped palm and three-segment tubes for each finger. The right
/// hand rests with fingers along +x, thumb toward +y and the palm facing -z;
/// the left hand is its mirror image through the xz-plane.
HandModel make_synthetic_hand(Handedness handedness);

/// Design keypoints of the synthetic hand (what its regressor reproduces).
KeypointMatrix synthetic_keypoints(Handedness handedness);

}  // namespace handover
