// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "handover/fixtures.hpp"
#include "handover/ply.hpp"
#include "handover/serialization.hpp"
#include "handover/synthetic_hand.hpp"
#include "handover/wrist_sampler.hpp"

using namespace handover;

namespace {

constexpr double kFrameTol = 1e-9;
constexpr double kAngleTol = 1e-6;
constexpr double kPoseTol = 1e-9;
constexpr double kLbsIdentityTol = 1e-12;
constexpr double kLbsRigidTol = 1e-9;
constexpr double kTinyRigTol = 1e-15;
constexpr double kRot6dTol = 1e-12;
constexpr double kAverageTol = 0.005;
constexpr double kTimeBudgetMs = 1000.0;
constexpr int kTrials = 1000;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Vec3 gaussian(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n;
  return scale * Vec3(n(rng), n(rng), n(rng));
}

RotationMatrix random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  return RotationMatrix(q.normalized().toRotationMatrix());
}

RigidTransform random_transform(std::mt19937_64& rng, double scale = 1.0) {
  return {random_rotation(rng), gaussian(rng, scale)};
}

HandFrame random_frame(std::mt19937_64& rng) {
  return build_frame(gaussian(rng), gaussian(rng), gaussian(rng));
}

double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome frame_matching() {
  std::mt19937_64 rng(1);
  double worst_origin = 0, worst_dot = 1, worst_angle = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < kTrials; ++i) {
    const HandFrame a = random_frame(rng), b = random_frame(rng);
    const RigidTransform h = matching_transform(a, b);
    worst_origin = std::max(worst_origin, (h.apply(a.centre()) - b.centre()).norm());
    worst_dot = std::min(worst_dot, h.apply_direction(a.direction().vec()).dot(b.direction().vec()));
    worst_angle = std::max(worst_angle, angle_between(h.apply_direction(a.normal().vec()), b.normal().vec()));
  }
  const double ms = ms_since(t0);
  const bool ok = worst_origin <= kFrameTol && worst_dot >= 1 - kFrameTol && worst_angle <= kAngleTol &&
                  ms < kTimeBudgetMs;
  return {ok, fmt("origin %.2e m, min dot 1-%.2e, normal %.2e rad", worst_origin, 1 - worst_dot, worst_angle) +
                  fmt(", %.1f ms", ms)};
}

Outcome quaternion_consistency() {
  std::mt19937_64 rng(2);
  double worst_rot = 0, worst_pos = 0;
  for (int i = 0; i < kTrials; ++i) {
    const Point3 p0 = gaussian(rng);
    const UnitQuaternion q0 = to_quaternion(random_rotation(rng));
    const RigidTransform h = random_transform(rng);
    const Pose out = transform_pose(p0, q0, h);
    const Mat3 expect = h.rotation.matrix() * to_matrix(q0).matrix();
    worst_rot = std::max(worst_rot, (to_matrix(out.orientation).matrix() - expect).norm());
    const Eigen::Vector4d hp = h.matrix() * p0.homogeneous();
    worst_pos = std::max(worst_pos, (out.position - hp.head<3>()).norm());
  }
  return {worst_rot <= kPoseTol && worst_pos <= kPoseTol,
          fmt("rotation %.2e (Frobenius), position %.2e m", worst_rot, worst_pos)};
}

double relative_pose_error(const HandFrame& imagined, const HandFrame& real, const RigidTransform& grasp,
                           const Pose& moved) {
  const RigidTransform moved_tf{to_matrix(moved.orientation), moved.position};
  const Mat4 before = (imagined.transform().inverse() * grasp).matrix();
  const Mat4 after = (real.transform().inverse() * moved_tf).matrix();
  return (before - after).norm();
}

Outcome relative_pose() {
  std::mt19937_64 rng(3);
  double worst_geom = 0;
  for (int i = 0; i < kTrials; ++i) {
    const HandFrame imagined = random_frame(rng), real = random_frame(rng);
    const RigidTransform grasp = random_transform(rng, 0.3);
    const RigidTransform h = matching_transform(imagined, real);
    const Pose moved = transform_pose(grasp.translation, to_quaternion(grasp.rotation), h);
    worst_geom = std::max(worst_geom, relative_pose_error(imagined, real, grasp, moved));
  }

  // same property through the pipeline: imagined configurations against
  // observed hands at random world poses
  const HandModels models = HandModels::synthetic();
  const PalmUpPlacementProvider hands(models);
  double worst_pipe = 0;
  int runs = 0;
  for (const ObjectCloud& cloud : {fixtures::cylinder(), fixtures::box()}) {
    for (Handedness hd : {Handedness::kRight, Handedness::kLeft}) {
      const auto config = imagine_configuration({cloud.name, hd}, cloud, models, hands, AntipodalGraspProvider{});
      for (int i = 0; i < kTrials / 4; ++i, ++runs) {
        const RigidTransform world = random_transform(rng);
        Observation obs{config.hand.joints, std::nullopt};
        for (int k = 0; k < obs.keypoints.rows(); ++k) {
          obs.keypoints.row(k) = world.apply(config.hand.joints.row(k).transpose()).transpose();
        }
        const EndEffectorTarget t = match_to_observation(config, obs);
        const HandFrame real = keypoint_frame_of(obs.keypoints, hd);
        worst_pipe = std::max(worst_pipe, relative_pose_error(imagined_frame_for(config, obs), real,
                                                              config.grasp.pose(), {t.position, t.orientation}));
      }
    }
  }
  return {worst_geom <= kPoseTol && worst_pipe <= kPoseTol && runs == kTrials,
          fmt("random frames %.2e, pipeline %.2e over %.0f observations", worst_geom, worst_pipe, runs)};
}

Outcome lbs() {
  const HandModel model = make_synthetic_hand(Handedness::kRight);
  const double identity =
      (lbs_forward(model, HandPose{}).vertices - model.template_vertices()).cwiseAbs().maxCoeff();

  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  const Point3 wrist = model.rest_keypoints().row(0).transpose();
  double rigid = 0;
  for (int i = 0; i < 100; ++i) {
    HandPose pose;
    for (int j = 1; j < kNumJoints; ++j) {
      pose.rotations[j] = matrix_to_rot6d(RotationMatrix(Eigen::AngleAxisd(0.4 * n(rng), gaussian(rng).normalized())
                                                             .toRotationMatrix()));
    }
    const VertexMatrix base = lbs_forward(model, pose).vertices;
    const RigidTransform t = random_transform(rng, 0.5);
    pose.rotations[0] = matrix_to_rot6d(t.rotation);
    pose.translation = t.translation;
    const VertexMatrix moved = lbs_forward(model, pose).vertices;
    for (int v = 0; v < base.rows(); ++v) {
      const Point3 expect = t.rotation * (Point3(base.row(v).transpose()) - wrist) + wrist + t.translation;
      rigid = std::max(rigid, (moved.row(v).transpose() - expect).norm());
    }
  }

  const std::array<int, 2> parents{-1, 0};
  const std::array<Point3, 2> joints{Point3(0, 0, 0), Point3(1, 0, 0)};
  const std::array<RotationMatrix, 2> local{RotationMatrix::identity(),
                                            RotationMatrix::about_z(std::numbers::pi / 2)};
  const auto rel = chain_transforms(parents, joints, local, Vec3(0, 0, 1));
  VertexMatrix rest(4, 3);
  rest << 0.5, 0, 0, 1.5, 0, 0, 2, 0, 0, 1, 1, 0;
  Eigen::MatrixXd w(4, 2);
  w << 1, 0, 0, 1, 0, 1, 0.5, 0.5;
  VertexMatrix expect(4, 3);
  expect << 0.5, 0, 1, 1, 0.5, 1, 1, 1, 1, 0.5, 0.5, 1;
  const double tiny = (skin(rest, w, rel) - expect).cwiseAbs().maxCoeff();

  return {identity <= kLbsIdentityTol && rigid <= kLbsRigidTol && tiny <= kTinyRigTol,
          fmt("identity %.2e, rigid %.2e, tiny rig %.2e", identity, rigid, tiny)};
}

Outcome rot6d() {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  double round_trip = 0, ortho = 0, det = 0;
  for (int i = 0; i < kTrials; ++i) {
    const RotationMatrix r = random_rotation(rng);
    round_trip = std::max(round_trip, (rot6d_to_matrix(matrix_to_rot6d(r)).matrix() - r.matrix()).norm());
    Rot6D raw;
    for (double& x : raw) x = n(rng);
    const Mat3 m = rot6d_to_matrix(raw).matrix();
    ortho = std::max(ortho, (m.transpose() * m - Mat3::Identity()).norm());
    det = std::max(det, std::abs(m.determinant() - 1.0));
  }
  return {round_trip <= kRot6dTol && ortho <= kRot6dTol && det <= kRot6dTol,
          fmt("round trip %.2e, orthonormality %.2e, |det-1| %.2e", round_trip, ortho, det)};
}

RotationMatrix approach_along(const Vec3& a_in) {
  const Vec3 a = a_in.normalized();
  Vec3 x = (std::abs(a.y()) < 0.9 ? Vec3::UnitY() : Vec3::UnitX()).cross(a).normalized();
  Mat3 m;
  m << x, a.cross(x), a;
  return RotationMatrix(m);
}

Outcome grasp_selection() {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> count(1, 64);
  int agree = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    PosedHand hand;
    hand.joints = KeypointMatrix::Zero();
    hand.joints.row(0) = gaussian(rng, 0.1).transpose();
    hand.joints.row(keypoint::kMiddleTip) = (hand.joints.row(0).transpose() + gaussian(rng)).transpose();
    hand.vertices = gaussian(rng, 0.1).transpose();
    const Vec3 vh = (hand.joints.row(keypoint::kMiddleTip) - hand.joints.row(0)).normalized().transpose();
    const Point3 ph = hand.vertices.row(0).transpose();
    std::vector<GraspCandidate> c;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      c.emplace_back(RigidTransform{approach_along(gaussian(rng)), gaussian(rng, 0.2)}, 0.04,
                     CandidateSource::kExternal);
    }
    const SelectionConfig cfg;
    std::size_t best = 0;
    double best_s = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double s = c[i].pose().rotation.matrix().col(2).dot(vh) -
                       cfg.lambda * (c[i].pose().translation - ph).norm();
      if (s < best_s) best_s = s, best = static_cast<std::size_t>(i);
    }
    agree += select_grasp(c, hand, cfg).index == best;
  }

  PosedHand toy;
  toy.joints = KeypointMatrix::Zero();
  toy.joints.row(keypoint::kMiddleTip) << 1, 0, 0;
  toy.vertices = VertexMatrix::Zero(1, 3);
  auto in_xz = [](double deg) {
    const double r = deg * std::numbers::pi / 180.0;
    return Vec3(std::cos(r), 0, std::sin(r));
  };
  const std::vector<GraspCandidate> pair{
      GraspCandidate({approach_along(in_xz(90)), Point3(0.2, 0, 0)}, 0.04, CandidateSource::kExternal),
      GraspCandidate({approach_along(in_xz(170)), Point3(0, 0.2, 0)}, 0.04, CandidateSource::kExternal)};
  SelectionConfig signed_mode, literal;
  literal.mode = CosineMode::kAbsolute;
  const bool signed_170 = select_grasp(pair, toy, signed_mode).index == 1;
  const bool literal_90 = select_grasp(pair, toy, literal).index == 0;
  return {agree == kTrials && signed_170 && literal_90,
          fmt("oracle agreement %.0f/%.0f; divergence fixture: signed cos picks 170 deg ", agree, kTrials) +
              (signed_170 ? "yes" : "no") + ", |cos| mode picks 90 deg " + (literal_90 ? "yes" : "no")};
}

Outcome grammar() {
  const ToolCatalog catalog = fixtures::catalog();
  int ok = 0, total = 0;
  for (const auto& e : catalog.entries()) {
    for (Handedness h : {Handedness::kLeft, Handedness::kRight}) {
      ++total;
      const TaskDescription t{e.name, h};
      try {
        ok += parse_task_description(render_task_description(t), catalog) == t;
      } catch (const Error&) {
      }
    }
  }
  return {ok == 32 && total == 32, fmt("%.0f/%.0f round trips", ok, total)};
}

Outcome aggregation() {
  const std::array<double, 3> tiers{50.11, 40.51, 42.09};
  const double avg = average_accuracy(tiers);
  return {std::abs(avg - 44.24) <= kAverageTol, fmt("average %.4f%% (target 44.24 +/- %.3f)", avg, kAverageTol)};
}

Outcome hardware_limits() {
  bool rejected_ctor = false, rejected_load = false;
  try {
    GraspCandidate(RigidTransform{}, 0.0741, CandidateSource::kExternal);
  } catch (const Error& e) {
    rejected_ctor = e.code() == ErrorCode::kWidthExceedsGripper;
  }
  Json wide = to_json(GraspCandidate(RigidTransform{}, 0.05, CandidateSource::kFile));
  wide["width_m"] = 0.08;
  try {
    grasps_from_json(Json::array({wide}));
  } catch (const Error& e) {
    rejected_load = e.code() == ErrorCode::kWidthExceedsGripper;
  }

  const HandModels models = HandModels::synthetic();
  const PalmUpPlacementProvider hands(models);
  HandoverConfiguration c = imagine_configuration({"bottle", Handedness::kRight}, fixtures::cylinder(), models,
                                                  hands, AntipodalGraspProvider{});
  c.grasp = GraspCandidate(c.grasp.pose(), 0.08, CandidateSource::kExternal, 0.1);
  const bool rejected_validation = !validate_configuration(c).find("width")->pass;

  GripperGeometry g;
  g.spheres = {{Point3::Zero(), 0.01}};
  PosedHand hand;
  hand.vertices = VertexMatrix(1, 3);
  hand.vertices << 0, 0.03, 0;
  const ClearanceResult overlap =
      clearance_check(GraspCandidate({RotationMatrix::identity(), Point3(0, 0.03, 0)}, 0.04, CandidateSource::kExternal),
                      g, hand, 0.005);
  const bool flagged = !overlap.pass && overlap.min_distance < 0;
  return {rejected_ctor && rejected_load && rejected_validation && flagged,
          std::string("width rejected at construction ") + (rejected_ctor ? "yes" : "no") + ", load " +
              (rejected_load ? "yes" : "no") + ", validation " + (rejected_validation ? "yes" : "no") +
              fmt("; overlap distance %.4f m", overlap.min_distance)};
}

Outcome desk_run() {
  const HandModels models = HandModels::synthetic();
  bool ok = true;
  double slowest = 0;
  int runs = 0;
  for (const ObjectCloud& src : {fixtures::cylinder(), fixtures::box()}) {
    // through the PLY codec, as the CLI would see it
    std::stringstream ply(std::ios::in | std::ios::out | std::ios::binary);
    write_ply(ply, src, PlyEncoding::kBinaryLittleEndian);
    const ObjectCloud cloud = read_ply(ply, src.name);
    for (Handedness hd : {Handedness::kRight, Handedness::kLeft}) {
      std::string first;
      for (int rep = 0; rep < 2; ++rep, ++runs) {
        const auto t0 = Clock::now();
        const PalmUpPlacementProvider hands(models);
        const AntipodalGraspProvider grasps(AntipodalOptions{.seed = 7});
        const auto c = imagine_configuration({cloud.name, hd}, cloud, models, hands, grasps);
        const std::string bytes = dump_json(to_json(c));
        slowest = std::max(slowest, ms_since(t0));
        ok &= validate_configuration(c).pass() && configuration_from_json(Json::parse(bytes)).validation.pass();
        if (rep == 0) first = bytes;
        ok &= rep == 0 || bytes == first;
      }
    }
  }
  ok &= slowest < kTimeBudgetMs;
  return {ok, fmt("%.0f runs, validated and byte-identical per seed; slowest %.1f ms", runs, slowest)};
}

Outcome wrist() {
  const WristBounds b;
  auto deg = [](double d) { return d * std::numbers::pi / 180.0; };
  const bool published = std::abs(b.pronation - deg(76)) < 1e-12 && std::abs(b.supination - deg(85)) < 1e-12 &&
                         std::abs(b.flexion - deg(75)) < 1e-12 && std::abs(b.extension - deg(75)) < 1e-12 &&
                         std::abs(b.radial - deg(20)) < 1e-12 && std::abs(b.ulnar - deg(45)) < 1e-12;
  bool ok = published;
  std::size_t n = 0;
  for (Handedness hd : {Handedness::kRight, Handedness::kLeft}) {
    const auto poses = canonical_wrist_poses(GripType::kOpen, hd);
    n = poses.size();
    ok &= n == 9;
    for (const auto& p : poses) ok &= b.contains(p.applied) && !p.clipped;
  }
  return {ok, fmt("%.0f poses per hand, all within bounds", static_cast<double>(n))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"frame matching exactness", frame_matching},
      {"quaternion/matrix consistency", quaternion_consistency},
      {"relative-pose preservation", relative_pose},
      {"linear blend skinning", lbs},
      {"6D rotation decoding", rot6d},
      {"grasp selection", grasp_selection},
      {"intent grammar round trip", grammar},
      {"accuracy aggregation", aggregation},
      {"hardware constraints", hardware_limits},
      {"end-to-end desk run", desk_run},
      {"wrist sampler", wrist},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
