// Regenerates the files under data/ from the in-code fixtures.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "handover/fixtures.hpp"
#include "handover/ply.hpp"
#include "handover/serialization.hpp"

using namespace handover;

int main(int argc, char** argv) {
  CLI::App app{"Write the shipped fixture files."};
  std::string dir = "data";
  app.add_option("--out", dir, "Output directory");
  CLI11_PARSE(app, argc, argv);

  const std::filesystem::path root(dir);
  std::filesystem::create_directories(root);
  auto put = [&](const char* name, const Json& j, bool compact = false) {
    write_text_file(root / name, compact ? j.dump() + "\n" : dump_json(j));
    std::cout << (root / name).string() << "\n";
  };

  try {
    const HandModels models = HandModels::synthetic();
    const CannedPoseLibrary poses = fixtures::pose_library(models);

    put("catalog.json", to_json(fixtures::catalog()));
    Json corpus = Json::array();
    for (const auto& item : fixtures::corpus()) corpus.push_back(to_json(item));
    put("corpus.json", corpus);
    put("poses.json", to_json(poses));
    put("task_bottle_right.json", to_json(TaskDescription{"bottle", Handedness::kRight}));
    put("task_stapler_left.json", to_json(TaskDescription{"stapler", Handedness::kLeft}));
    put("keypoints_right.json", keypoints_to_json(fixtures::observed_keypoints(Handedness::kRight)));
    put("keypoints_left.json", keypoints_to_json(fixtures::observed_keypoints(Handedness::kLeft)));
    put("settings.json", {{"lambda", 1.0},
                          {"clearance", 0.005},
                          {"cosine_mode", "signed"},
                          {"endpoint", {{"model", "gemma2:9b"}, {"timeout_ms", 30000}, {"retries", 1}}}});

    // the imagined right hand under the bottle, seen from the world frame
    const HandPose pose = *poses.entries().at("bottle").right;
    const PosedHand hand = lbs_forward(models.right, pose);
    const RigidTransform w = fixtures::world_from_object();
    KeypointMatrix seen;
    for (int i = 0; i < kNumKeypoints; ++i) seen.row(i) = w.apply(hand.joints.row(i).transpose()).transpose();
    put("observed_bottle_right.json", {{"keypoints", keypoints_to_json(seen)}});

    put("grasps_colliding.json", Json::array({to_json(fixtures::colliding_candidate(hand))}));
    put("hand_model_right.json", to_json(models.right), true);  // face list is long

    save_ply(root / "cylinder.ply", fixtures::cylinder(), PlyEncoding::kBinaryLittleEndian);
    save_ply(root / "box.ply", fixtures::box(), PlyEncoding::kAscii);
    std::cout << (root / "cylinder.ply").string() << "\n" << (root / "box.ply").string() << "\n";
  } catch (const Error& e) {
    std::cerr << "make_fixtures: " << e.name() << ": " << e.what() << "\n";
    return 2;
  }
  return 0;
}
