#include "handover/fixtures.hpp"

#include <numbers>

#include "handover/synthetic_hand.hpp"

namespace handover::fixtures {

ToolCatalog catalog() {
  return ToolCatalog({
      {"scissors", {"shears"}, {"cut paper", "trim"}},
      {"game controller", {"gamepad", "joystick", "controller"}, {"play games", "play a game"}},
      {"pincer", {"pliers", "pincers"}, {"bend wire", "pull a nail"}},
      {"knife", {"blade", "cutter"}, {"slice", "cut bread", "chop"}},
      {"eyeglasses", {"glasses", "spectacles"}, {"read", "see better"}},
      {"screwdriver", {"driver"}, {"screw", "tighten a screw", "loosen a screw"}},
      {"hammer", {"mallet"}, {"hit a nail", "drive a nail"}},
      {"mug", {"cup"}, {"drink coffee", "drink tea"}},
      {"spoon", {"teaspoon"}, {"stir", "eat soup", "eat cereal"}},
      {"fork", {}, {"eat pasta", "eat salad"}},
      {"toothbrush", {}, {"brush teeth", "brush my teeth"}},
      {"wrench", {"spanner"}, {"tighten a bolt", "loosen a bolt"}},
      {"flashlight", {"torch"}, {"see in the dark", "light"}},
      {"stapler", {}, {"staple", "bind papers"}},
      {"bottle", {"water bottle"}, {"drink water", "thirsty"}},
      {"headphones", {"headset", "earphones"}, {"listen to music"}},
  });
}

ObjectCloud cylinder() { return make_cylinder_cloud("bottle", 0.03, 0.12); }

ObjectCloud box() { return make_box_cloud("stapler", 0.05, 0.10, 0.16); }

RigidTransform world_from_object() {
  const double deg = std::numbers::pi / 180.0;
  return {RotationMatrix::about_z(30 * deg) * RotationMatrix::about_x(10 * deg),
          Point3(0.45, -0.10, 0.85)};
}

KeypointMatrix observed_keypoints(Handedness h) {
  const KeypointMatrix rest = synthetic_keypoints(h);
  const RigidTransform w = world_from_object();
  KeypointMatrix out;
  for (int i = 0; i < kNumKeypoints; ++i) out.row(i) = w.apply(rest.row(i).transpose()).transpose();
  return out;
}

std::vector<EvalItem> corpus() {
  const auto R = Handedness::kRight;
  const auto L = Handedness::kLeft;
  struct Row {
    const char* text;
    AmbiguityTier tier;
    const char* object;
    Handedness hand;
  };
  const Row rows[] = {
      {"Pass me the knife", AmbiguityTier::kClear, "knife", R},
      {"Can I have the scissors?", AmbiguityTier::kClear, "scissors", L},
      {"I need the hammer", AmbiguityTier::kClear, "hammer", R},
      {"Hand me the mug please", AmbiguityTier::kClear, "mug", L},
      {"Give me the screwdriver", AmbiguityTier::kClear, "screwdriver", R},
      {"I want the toothbrush", AmbiguityTier::kClear, "toothbrush", L},
      {"Pass the stapler", AmbiguityTier::kClear, "stapler", R},
      {"The flashlight, please", AmbiguityTier::kClear, "flashlight", L},
      {"I want to play games", AmbiguityTier::kFoggy, "game controller", R},
      {"Could you give me my glasses", AmbiguityTier::kFoggy, "eyeglasses", L},
      {"I need something to tighten a screw", AmbiguityTier::kFoggy, "screwdriver", R},
      {"Pass me the spanner", AmbiguityTier::kFoggy, "wrench", L},
      {"Something to stir my tea", AmbiguityTier::kFoggy, "spoon", R},
      {"I need the torch", AmbiguityTier::kFoggy, "flashlight", L},
      {"I'd like to listen to music", AmbiguityTier::kFoggy, "headphones", R},
      {"I need to cut bread", AmbiguityTier::kFoggy, "knife", L},
      {"I'm thirsty", AmbiguityTier::kFuzzy, "bottle", R},
      {"My hands are cold and I could use some coffee", AmbiguityTier::kFuzzy, "mug", L},
      {"It is too dark in here", AmbiguityTier::kFuzzy, "flashlight", R},
      {"These papers keep falling apart", AmbiguityTier::kFuzzy, "stapler", L},
      {"That nail is sticking out of the board", AmbiguityTier::kFuzzy, "hammer", R},
      {"I can't read this small print", AmbiguityTier::kFuzzy, "eyeglasses", L},
      {"My teeth feel dirty", AmbiguityTier::kFuzzy, "toothbrush", R},
      {"Let's have some fun on the console", AmbiguityTier::kFuzzy, "game controller", L},
  };
  std::vector<EvalItem> out;
  bool use_keypoints = false;
  for (const Row& r : rows) {
    EvalItem item;
    item.query.text = r.text;
    // alternate between an explicit hint and observed keypoints
    if (use_keypoints) {
      item.query.keypoints = observed_keypoints(r.hand);
    } else {
      item.query.handedness = r.hand;
    }
    use_keypoints = !use_keypoints;
    item.tier = r.tier;
    item.truth = {r.object, r.hand};
    out.push_back(std::move(item));
  }
  return out;
}

CannedPoseLibrary pose_library(const HandModels& models) {
  const PalmUpPlacementProvider place(models);
  CannedPoseLibrary lib;
  for (const ObjectCloud& cloud : {cylinder(), box()}) {
    for (Handedness h : {Handedness::kLeft, Handedness::kRight}) {
      lib.set(cloud.name, place.receiving_poses({cloud.name, h}, cloud).front());
    }
  }
  return lib;
}

GraspCandidate colliding_candidate(const PosedHand& hand) {
  return GraspCandidate({RotationMatrix::identity(), geometric_center(hand.vertices)}, 0.05,
                        CandidateSource::kFile);
}

}  // namespace handover::fixtures
