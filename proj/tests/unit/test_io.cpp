#include <cstring>
#include <fstream>
#include <sstream>

#include "handover/fixtures.hpp"
#include "handover/base64.hpp"
#include "handover/ply.hpp"
#include "handover/scene_export.hpp"
#include "handover/serialization.hpp"
#include "handover/synthetic_hand.hpp"
#include "handover/wrist_sampler.hpp"
#include "helpers.hpp"

using namespace handover;
using test::error_of;

namespace {

const HandModels& models() {
  static const HandModels m = HandModels::synthetic();
  return m;
}

const HandoverConfiguration& bottle_config() {
  static const HandoverConfiguration c = [] {
    const PalmUpPlacementProvider hands(models());
    return imagine_configuration({"bottle", Handedness::kRight}, fixtures::cylinder(), models(), hands,
                                 AntipodalGraspProvider{});
  }();
  return c;
}

ObjectCloud read_ply_text(const std::string& s) {
  std::istringstream in(s, std::ios::binary);
  return read_ply(in, "t");
}

VertexMatrix as_float32(const VertexMatrix& m) { return m.cast<float>().cast<double>(); }

}  // namespace

TEST_SUITE("io") {

TEST_CASE("ascii PLY with three points") {
  const ObjectCloud c = read_ply_text(
      "ply\nformat ascii 1.0\ncomment hi\nelement vertex 3\n"
      "property float x\nproperty float y\nproperty float z\nend_header\n"
      "0 0 0\n1 0 0\n0 1 0.5\n");
  REQUIRE(c.points.rows() == 3);
  CHECK_FALSE(c.normals.has_value());
  CHECK(c.points(2, 2) == 0.5);
  CHECK(c.name == "t");
}

TEST_CASE("PLY skips extra properties and face lists") {
  const ObjectCloud c = read_ply_text(
      "ply\nformat ascii 1.0\nelement vertex 3\n"
      "property double x\nproperty double y\nproperty double z\nproperty uchar red\n"
      "property float nx\nproperty float ny\nproperty float nz\n"
      "element face 1\nproperty list uchar int vertex_indices\nend_header\n"
      "0 0 0 255 0 0 1\n1 0 0 10 0 0 2\n0 1 0 0 1 0 0\n3 0 1 2\n");
  REQUIRE(c.points.rows() == 3);
  REQUIRE(c.normals.has_value());
  CHECK(c.normals->row(1).norm() == doctest::Approx(1.0));  // renormalized
  CHECK(c.normals->row(2).x() == 1.0);
}

TEST_CASE("PLY round trips at float32 precision") {
  test::TempDir dir;
  for (const ObjectCloud& src : {fixtures::cylinder(), fixtures::box()}) {
    for (PlyEncoding enc : {PlyEncoding::kBinaryLittleEndian, PlyEncoding::kAscii}) {
      const std::string path = dir / (src.name + ".ply");
      save_ply(path, src, enc);
      const ObjectCloud back = load_ply(path);
      CHECK(back.name == src.name);
      CHECK((back.points - as_float32(src.points)).cwiseAbs().maxCoeff() == 0.0);
      REQUIRE(back.normals.has_value());
      CHECK((*back.normals - as_float32(*src.normals)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("PLY errors") {
  CHECK(error_of([] {
          read_ply_text("ply\nformat binary_big_endian 1.0\nelement vertex 1\nproperty float x\n"
                        "property float y\nproperty float z\nend_header\n");
        }) == ErrorCode::kUnsupportedEncoding);
  CHECK(error_of([] { read_ply_text("plx\n"); }) == ErrorCode::kMalformedHeader);
  CHECK(error_of([] {
          read_ply_text("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nend_header\n1\n");
        }) == ErrorCode::kMalformedHeader);
  CHECK(error_of([] {
          read_ply_text("ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\nproperty float y\n"
                        "property float z\nend_header\n0 0 0\n");
        }) == ErrorCode::kInvalidInput);
  CHECK(error_of([] { load_ply("/nonexistent/cloud.ply"); }) == ErrorCode::kIoError);
}

TEST_CASE("base64") {
  const std::string s = "foobar";
  const std::vector<std::uint8_t> bytes(s.begin(), s.end());
  CHECK(base64_encode(bytes) == "Zm9vYmFy");
  CHECK(base64_encode(std::span(bytes).first(4)) == "Zm9vYg==");
  CHECK(base64_decode("Zm9vYg==") == std::vector<std::uint8_t>(bytes.begin(), bytes.begin() + 4));
  CHECK(error_of([] { base64_decode("Zm9v!mFy"); }) == ErrorCode::kInvalidInput);
  CHECK(error_of([] { base64_decode("Zm9"); }) == ErrorCode::kInvalidInput);
}

TEST_CASE("small records round trip") {
  const TaskDescription t{"game controller", Handedness::kLeft};
  CHECK(task_from_json(to_json(t)) == t);

  HandPose p = sample_wrist_pose({0.3, 0.2, -0.1}, GripType::kPower, Handedness::kLeft).pose;
  p.translation = Vec3(0.1, -0.2, 0.3);
  p.shape[3] = 0.25;
  const HandPose q = hand_pose_from_json(to_json(p));
  CHECK(dump_json(to_json(q)) == dump_json(to_json(p)));

  const KeypointMatrix k = fixtures::observed_keypoints(Handedness::kRight);
  CHECK((keypoints_from_json(keypoints_to_json(k)) - k).norm() == 0.0);
  const Observation obs = observation_from_json(Json{{"keypoints", keypoints_to_json(k)}});
  CHECK_FALSE(obs.vertices.has_value());

  const ToolCatalog cat = catalog_from_json(to_json(fixtures::catalog()));
  CHECK(dump_json(to_json(cat)) == dump_json(to_json(fixtures::catalog())));

  const auto corpus = fixtures::corpus();
  Json arr = Json::array();
  for (const auto& item : corpus) arr.push_back(to_json(item));
  const auto back = corpus_from_json(arr);
  REQUIRE(back.size() == corpus.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].truth == corpus[i].truth);
    CHECK(back[i].tier == corpus[i].tier);
    CHECK(back[i].query.text == corpus[i].query.text);
  }

  const CannedPoseLibrary lib = fixtures::pose_library(models());
  CHECK(dump_json(to_json(pose_library_from_json(to_json(lib)))) == dump_json(to_json(lib)));
}

TEST_CASE("grasp files enforce the gripper width") {
  const GraspCandidate g = bottle_config().grasp;
  const GraspCandidate back = grasp_from_json(to_json(g));
  CHECK((back.pose().matrix() - g.pose().matrix()).norm() == 0.0);
  CHECK(back.width() == g.width());
  CHECK(back.source() == g.source());

  Json wide = to_json(g);
  wide["width_m"] = 0.08;
  CHECK(error_of([&] { grasp_from_json(wide); }) == ErrorCode::kWidthExceedsGripper);
  CHECK(error_of([&] { grasps_from_json(Json::array({to_json(g), wide})); }) == ErrorCode::kWidthExceedsGripper);
  CHECK(grasp_from_json(wide, 0.1).width() == 0.08);
}

TEST_CASE("configuration round trip is lossless") {
  const Json a = to_json(bottle_config());
  const HandoverConfiguration back = configuration_from_json(a);
  CHECK(dump_json(to_json(back)) == dump_json(a));
  CHECK(back.grasp_index == bottle_config().grasp_index);
  CHECK((back.hand.vertices - bottle_config().hand.vertices).norm() == 0.0);
  CHECK(validate_configuration(back).pass());
  CHECK(a["schema"] == kConfigSchema);
}

TEST_CASE("settings") {
  const Settings s = settings_from_json(
      Json{{"lambda", 2.0}, {"cosine_mode", "absolute"}, {"endpoint", {{"url", "http://x:1/v1"}, {"retries", 3}}}});
  CHECK(s.lambda == 2.0);
  CHECK(s.cosine_mode == CosineMode::kAbsolute);
  CHECK(s.endpoint == "http://x:1/v1");
  CHECK(s.retries == 3);
  CHECK_FALSE(s.clearance.has_value());
  CHECK(error_of([] { settings_from_json(Json{{"lambda", "big"}}); }) == ErrorCode::kInvalidInput);
}

TEST_CASE("hand model file keeps float32 precision") {
  const HandModel& m = models().right;
  const HandModel back = hand_model_from_json(to_json(m));
  CHECK(back.num_vertices() == m.num_vertices());
  CHECK(back.handedness() == m.handedness());
  CHECK((back.template_vertices() - m.template_vertices()).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((back.weights() - m.weights()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((back.rest_keypoints() - m.rest_keypoints()).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(back.faces() == m.faces());
}

TEST_CASE("scene OBJ") {
  const HandoverConfiguration& c = bottle_config();
  const std::string obj = scene_obj(c, models().right.faces());
  CHECK(obj == scene_obj(c, models().right.faces()));

  std::istringstream in(obj);
  std::string line;
  std::vector<std::string> groups;
  long vertices = 0, normals = 0, max_index = 0;
  while (std::getline(in, line)) {
    if (line.rfind("g ", 0) == 0) groups.push_back(line.substr(2));
    if (line.rfind("v ", 0) == 0) ++vertices;
    if (line.rfind("vn ", 0) == 0) ++normals;
    if (line.rfind("f ", 0) == 0 || line.rfind("p ", 0) == 0) {
      std::istringstream f(line.substr(2));
      long i;
      while (f >> i) {
        CHECK(i >= 1);
        max_index = std::max(max_index, i);
      }
    }
  }
  CHECK(groups == std::vector<std::string>{"object", "hand", "gripper"});
  CHECK(normals == c.object.points.rows());
  CHECK(max_index == vertices);

  HandoverConfiguration bare = c;
  bare.object.normals.reset();
  CHECK(scene_obj(bare, {}).find("\nvn ") == std::string::npos);
}

}  // TEST_SUITE
