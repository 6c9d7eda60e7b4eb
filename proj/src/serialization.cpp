#include "handover/serialization.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "handover/base64.hpp"

namespace handover {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::kInvalidInput, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

const Json* optional_field(const Json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

std::string text(const Json& j, const char* what) {
  if (!j.is_string()) bad(std::string(what) + " must be a string");
  return j.get<std::string>();
}

template <std::size_t N>
std::array<double, N> fixed_array(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != N) {
    bad(std::string(what) + " must be an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(j[i], what);
  return out;
}

Json vec_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const Json& j, const char* what) {
  const auto a = fixed_array<3>(j, what);
  return {a[0], a[1], a[2]};
}

Json rows_json(const Eigen::Ref<const Eigen::MatrixX3d>& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vec_json(m.row(i).transpose()));
  return out;
}

VertexMatrix rows_from(const Json& j, const char* what) {
  if (!j.is_array()) bad(std::string(what) + " must be an array of [x, y, z]");
  VertexMatrix m(static_cast<Eigen::Index>(j.size()), 3);
  for (std::size_t i = 0; i < j.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = vec_from(j[i], what).transpose();
  }
  return m;
}

Json transform_json(const RigidTransform& t) {
  const Mat4 m = t.matrix();
  Json out = Json::array();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out.push_back(m(r, c));
  }
  return out;
}

RigidTransform transform_from(const Json& j) {
  const auto a = fixed_array<16>(j, "matrix");
  Mat4 m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m(r, c) = a[4 * r + c];
  }
  try {
    return RigidTransform::from_matrix(m);
  } catch (const Error& e) {
    bad(std::string("matrix is not a rigid transform: ") + e.what());
  }
}

// float32 little-endian <-> base64

std::string pack_floats(const double* data, std::size_t n) {
  std::vector<std::uint8_t> bytes(4 * n);
  for (std::size_t i = 0; i < n; ++i) {
    auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(data[i]));
    for (int b = 0; b < 4; ++b) bytes[4 * i + b] = static_cast<std::uint8_t>(bits >> (8 * b));
  }
  return base64_encode(bytes);
}

std::vector<double> unpack_floats(const Json& j, std::size_t expected, const char* what) {
  const std::vector<std::uint8_t> bytes = base64_decode(text(j, what));
  if (bytes.size() != 4 * expected) {
    bad(std::string(what) + ": expected " + std::to_string(expected) + " float32 values, got " +
        std::to_string(bytes.size() / 4));
  }
  std::vector<double> out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) bits |= std::uint32_t{bytes[4 * i + b]} << (8 * b);
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

// Row-major packing of an arbitrary matrix.
template <typename M>
std::string pack_matrix(const M& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  }
  return pack_floats(flat.data(), flat.size());
}

template <typename M>
void unpack_matrix(const Json& j, M& m, const char* what) {
  const auto flat = unpack_floats(j, static_cast<std::size_t>(m.size()), what);
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = flat[i++];
  }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  out << contents;
  if (!out) fail(ErrorCode::kIoError, "write to '" + path.string() + "' failed");
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string body = read_text_file(path);
  try {
    return Json::parse(body);
  } catch (const Json::exception& e) {
    bad("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json to_json(const TaskDescription& task) {
  return {{"object", task.object}, {"hand", to_string(task.handedness)}};
}

TaskDescription task_from_json(const Json& j) {
  return {text(field(j, "object"), "object"), parse_handedness(text(field(j, "hand"), "hand"))};
}

Json to_json(const HandPose& pose) {
  Json rotations = Json::array();
  for (const auto& r : pose.rotations) rotations.push_back(r);
  return {{"handedness", to_string(pose.handedness)},
          {"translation", vec_json(pose.translation)},
          {"rotations", rotations},
          {"shape", pose.shape}};
}

HandPose hand_pose_from_json(const Json& j) {
  HandPose pose;
  pose.handedness = parse_handedness(text(field(j, "handedness"), "handedness"));
  if (const Json* t = optional_field(j, "translation")) pose.translation = vec_from(*t, "translation");
  if (const Json* r = optional_field(j, "rotations")) {
    if (!r->is_array() || r->size() != kNumJoints) bad("rotations must hold 16 blocks of 6");
    for (int k = 0; k < kNumJoints; ++k) pose.rotations[k] = fixed_array<6>((*r)[k], "rotation block");
  }
  if (const Json* s = optional_field(j, "shape")) {
    if (!s->is_array() || s->size() > kNumShapeParams) bad("shape holds at most 10 numbers");
    for (std::size_t i = 0; i < s->size(); ++i) pose.shape[i] = number((*s)[i], "shape");
  }
  return pose;
}

Json keypoints_to_json(const KeypointMatrix& k) { return rows_json(k); }

KeypointMatrix keypoints_from_json(const Json& j) {
  const VertexMatrix m = rows_from(j, "keypoints");
  if (m.rows() != kNumKeypoints) {
    bad("expected 21 keypoints, got " + std::to_string(m.rows()));
  }
  return m;
}

Observation observation_from_json(const Json& j) {
  if (j.is_array()) return {keypoints_from_json(j), std::nullopt};
  Observation obs{keypoints_from_json(field(j, "keypoints")), std::nullopt};
  if (const Json* v = optional_field(j, "vertices")) {
    obs.vertices = rows_from(*v, "vertices");
    if (obs.vertices->rows() == 0) bad("observed vertices are empty");
  }
  return obs;
}

Json to_json(const GraspCandidate& c) {
  return {{"matrix", transform_json(c.pose())},
          {"width_m", c.width()},
          {"source", to_string(c.source())}};
}

GraspCandidate grasp_from_json(const Json& j, double max_width) {
  const RigidTransform pose = transform_from(field(j, "matrix"));
  const double width = number(field(j, "width_m"), "width_m");
  CandidateSource source = CandidateSource::kFile;
  if (const Json* s = optional_field(j, "source")) source = parse_candidate_source(text(*s, "source"));
  return GraspCandidate(pose, width, source, max_width);
}

std::vector<GraspCandidate> grasps_from_json(const Json& j, double max_width) {
  if (!j.is_array()) bad("grasp file must be an array of candidates");
  std::vector<GraspCandidate> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    try {
      out.push_back(grasp_from_json(j[i], max_width));
    } catch (const Error& e) {
      fail(e.code(), "candidate " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

Json to_json(const ToolCatalog& catalog) {
  Json out = Json::array();
  for (const auto& e : catalog.entries()) {
    out.push_back({{"name", e.name}, {"synonyms", e.synonyms}, {"use_cases", e.use_cases}});
  }
  return out;
}

ToolCatalog catalog_from_json(const Json& j) {
  if (!j.is_array()) bad("catalog must be an array of tools");
  std::vector<ToolEntry> entries;
  for (const auto& item : j) {
    ToolEntry e;
    e.name = text(field(item, "name"), "name");
    if (const Json* s = optional_field(item, "synonyms")) {
      for (const auto& x : *s) e.synonyms.push_back(text(x, "synonym"));
    }
    if (const Json* u = optional_field(item, "use_cases")) {
      for (const auto& x : *u) e.use_cases.push_back(text(x, "use case"));
    }
    entries.push_back(std::move(e));
  }
  return ToolCatalog(std::move(entries));
}

Json to_json(const EvalItem& item) {
  Json out = {{"text", item.query.text},
              {"tier", to_string(item.tier)},
              {"truth", to_json(item.truth)}};
  if (item.query.keypoints) out["keypoints"] = keypoints_to_json(*item.query.keypoints);
  if (item.query.image_path) out["image"] = *item.query.image_path;
  if (item.query.handedness) out["hand_hint"] = to_string(*item.query.handedness);
  return out;
}

std::vector<EvalItem> corpus_from_json(const Json& j) {
  if (!j.is_array()) bad("corpus must be an array of items");
  std::vector<EvalItem> out;
  out.reserve(j.size());
  for (const auto& item : j) {
    EvalItem e;
    e.query.text = text(field(item, "text"), "text");
    e.tier = parse_tier(text(field(item, "tier"), "tier"));
    e.truth = task_from_json(field(item, "truth"));
    if (const Json* k = optional_field(item, "keypoints")) e.query.keypoints = keypoints_from_json(*k);
    if (const Json* i = optional_field(item, "image")) e.query.image_path = text(*i, "image");
    if (const Json* h = optional_field(item, "hand_hint")) {
      e.query.handedness = parse_handedness(text(*h, "hand_hint"));
    }
    out.push_back(std::move(e));
  }
  return out;
}

Json to_json(const EvalReport& report) {
  Json tiers = Json::array();
  for (const auto& t : report.tiers) {
    tiers.push_back({{"tier", to_string(t.tier)},
                     {"items", t.items},
                     {"passes", t.passes},
                     {"accuracy", t.accuracy}});
  }
  Json absent = Json::array();
  for (auto t : report.absent_tiers) absent.push_back(to_string(t));
  Json items = Json::array();
  for (const auto& r : report.items) {
    Json row = {{"pass", r.pass}};
    row["predicted"] = r.predicted ? to_json(*r.predicted) : Json(nullptr);
    if (!r.error.empty()) row["error"] = r.error;
    items.push_back(std::move(row));
  }
  return {{"tiers", tiers}, {"absent_tiers", absent}, {"average", report.average}, {"items", items}};
}

Json to_json(const CannedPoseLibrary& lib) {
  Json out = Json::object();
  for (const auto& [name, entry] : lib.entries()) {
    Json e = Json::object();
    if (entry.left) e["left"] = to_json(*entry.left);
    if (entry.right) e["right"] = to_json(*entry.right);
    out[name] = std::move(e);
  }
  return out;
}

CannedPoseLibrary pose_library_from_json(const Json& j) {
  if (!j.is_object()) bad("pose library must map object names to poses");
  CannedPoseLibrary lib;
  for (const auto& [name, entry] : j.items()) {
    for (const char* side : {"left", "right"}) {
      const Json* p = optional_field(entry, side);
      if (!p) continue;
      HandPose pose = hand_pose_from_json(*p);
      if (to_string(pose.handedness) != side) {
        fail(ErrorCode::kHandednessMismatch,
             "pose stored under '" + name + "." + side + "' is a " +
                 std::string(to_string(pose.handedness)) + " hand");
      }
      lib.set(name, pose);
    }
  }
  return lib;
}

Json to_json(const ValidationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back(
        {{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}, {"limit", c.limit}});
  }
  return {{"pass", report.pass()}, {"checks", checks}};
}

Json to_json(const HandoverConfiguration& config) {
  Json object = {{"name", config.object.name}, {"points", rows_json(config.object.points)}};
  if (config.object.normals) object["normals"] = rows_json(*config.object.normals);

  Json attempts = Json::array();
  for (const auto& a : config.attempts) {
    attempts.push_back({{"index", a.index},
                        {"score", a.score},
                        {"min_distance", a.min_distance},
                        {"width_ok", a.width_ok},
                        {"clear", a.clear}});
  }
  return {
      {"schema", kConfigSchema},
      {"task", to_json(config.task)},
      {"object", object},
      {"hand_pose", to_json(config.hand_pose)},
      {"hand",
       {{"handedness", to_string(config.hand.handedness)},
        {"joints", rows_json(config.hand.joints)},
        {"vertices", rows_json(config.hand.vertices)}}},
      {"grasp", to_json(config.grasp)},
      {"grasp_index", config.grasp_index},
      {"grasp_score", config.grasp_score},
      {"fallback_used", config.fallback_used},
      {"attempts", attempts},
      {"hand_frame",
       {{"centre", vec_json(config.hand_frame.centre())},
        {"direction", vec_json(config.hand_frame.direction().vec())},
        {"normal", vec_json(config.hand_frame.normal().vec())}}},
      {"validation", to_json(config.validation)},
  };
}

HandoverConfiguration configuration_from_json(const Json& j) {
  const std::string schema = text(field(j, "schema"), "schema");
  if (schema != kConfigSchema) bad("unsupported configuration schema '" + schema + "'");

  const Json& obj = field(j, "object");
  ObjectCloud cloud{text(field(obj, "name"), "object name"), rows_from(field(obj, "points"), "points"),
                    std::nullopt};
  if (const Json* n = optional_field(obj, "normals")) cloud.normals = rows_from(*n, "normals");
  cloud.validate();

  const Json& hand = field(j, "hand");
  PosedHand posed;
  posed.handedness = parse_handedness(text(field(hand, "handedness"), "handedness"));
  posed.joints = keypoints_from_json(field(hand, "joints"));
  posed.vertices = rows_from(field(hand, "vertices"), "vertices");

  // recomputed from the stored hand so a re-save is bit-identical; the
  // stored copy only has to agree
  const Json& f = field(j, "hand_frame");
  const HandFrame frame = hand_frame_of(posed);
  if ((vec_from(field(f, "centre"), "centre") - frame.centre()).norm() > 1e-9 ||
      (vec_from(field(f, "direction"), "direction") - frame.direction().vec()).norm() > 1e-9 ||
      (vec_from(field(f, "normal"), "normal") - frame.normal().vec()).norm() > 1e-9) {
    fail(ErrorCode::kInvalidInput, "hand_frame does not match the stored hand");
  }

  std::vector<CandidateAttempt> attempts;
  if (const Json* a = optional_field(j, "attempts")) {
    for (const auto& x : *a) {
      attempts.push_back({field(x, "index").get<std::size_t>(), number(field(x, "score"), "score"),
                          number(field(x, "min_distance"), "min_distance"),
                          field(x, "width_ok").get<bool>(), field(x, "clear").get<bool>()});
    }
  }

  HandoverConfiguration config{task_from_json(field(j, "task")),
                               std::move(cloud),
                               hand_pose_from_json(field(j, "hand_pose")),
                               std::move(posed),
                               grasp_from_json(field(j, "grasp")),
                               field(j, "grasp_index").get<std::size_t>(),
                               number(field(j, "grasp_score"), "grasp_score"),
                               std::move(attempts),
                               field(j, "fallback_used").get<bool>(),
                               frame,
                               {}};
  if (const Json* v = optional_field(j, "validation")) {
    for (const auto& c : field(*v, "checks")) {
      config.validation.checks.push_back({text(field(c, "name"), "name"), field(c, "pass").get<bool>(),
                                          number(field(c, "measured"), "measured"),
                                          number(field(c, "limit"), "limit")});
    }
  }
  return config;
}

Json to_json(const EndEffectorTarget& target) {
  const auto q = target.orientation.wxyz();
  return {{"position", vec_json(target.position)},
          {"orientation_wxyz", q},
          {"matching", transform_json(target.matching)},
          {"diagnostics",
           {{"centre_error_m", target.diagnostics.centre_error},
            {"direction_dot", target.diagnostics.direction_dot},
            {"normal_angle_rad", target.diagnostics.normal_angle}}}};
}

Json to_json(const HandModel& model) {
  Json dirs = Json::array();
  for (const auto& d : model.shape_dirs()) dirs.push_back(pack_matrix(d));
  Json faces = Json::array();
  for (const auto& f : model.faces()) faces.push_back(f);
  return {{"format", kHandModelFormat},
          {"handedness", to_string(model.handedness())},
          {"num_vertices", model.num_vertices()},
          {"parents", model.parents()},
          {"template", pack_matrix(model.template_vertices())},
          {"weights", pack_matrix(model.weights())},
          {"regressor", pack_matrix(model.joint_regressor())},
          {"shape_dirs", dirs},
          {"faces", faces}};
}

HandModel hand_model_from_json(const Json& j) {
  const std::string format = text(field(j, "format"), "format");
  if (format != kHandModelFormat) bad("unsupported hand model format '" + format + "'");
  const auto v = static_cast<Eigen::Index>(number(field(j, "num_vertices"), "num_vertices"));
  if (v <= 0) bad("num_vertices must be positive");

  HandModel::Data d;
  d.handedness = parse_handedness(text(field(j, "handedness"), "handedness"));
  const Json& parents = field(j, "parents");
  if (!parents.is_array() || parents.size() != kNumJoints) bad("parents must list 16 joints");
  for (int k = 0; k < kNumJoints; ++k) d.parents[k] = parents[k].get<int>();

  d.template_vertices.resize(v, 3);
  unpack_matrix(field(j, "template"), d.template_vertices, "template");
  d.weights.resize(v, kNumJoints);
  unpack_matrix(field(j, "weights"), d.weights, "weights");
  d.joint_regressor.resize(kNumKeypoints, v);
  unpack_matrix(field(j, "regressor"), d.joint_regressor, "regressor");
  if (const Json* dirs = optional_field(j, "shape_dirs")) {
    for (const auto& x : *dirs) {
      VertexMatrix m(v, 3);
      unpack_matrix(x, m, "shape_dirs");
      d.shape_dirs.push_back(std::move(m));
    }
  }
  // float32 storage leaves weight rows summing to 1 only within ~1e-7.
  for (Eigen::Index i = 0; i < v; ++i) {
    const double s = d.weights.row(i).sum();
    if (std::abs(s - 1.0) > 1e-5) bad("weight row " + std::to_string(i) + " does not sum to 1");
    d.weights.row(i) /= s;
  }
  if (const Json* faces = optional_field(j, "faces")) {
    for (const auto& f : *faces) {
      if (!f.is_array() || f.size() != 3) bad("faces must be index triples");
      d.faces.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
    }
  }
  return HandModel::create(std::move(d));
}

Settings settings_from_json(const Json& j) {
  if (!j.is_object()) bad("settings file must be a JSON object");
  Settings s;
  if (const Json* x = optional_field(j, "lambda")) s.lambda = number(*x, "lambda");
  if (const Json* x = optional_field(j, "clearance")) s.clearance = number(*x, "clearance");
  if (const Json* x = optional_field(j, "cosine_mode")) {
    s.cosine_mode = parse_cosine_mode(text(*x, "cosine_mode"));
  }
  if (const Json* e = optional_field(j, "endpoint")) {
    if (const Json* x = optional_field(*e, "url")) s.endpoint = text(*x, "endpoint.url");
    if (const Json* x = optional_field(*e, "model")) s.model = text(*x, "endpoint.model");
    if (const Json* x = optional_field(*e, "timeout_ms")) {
      s.timeout_ms = static_cast<int>(number(*x, "endpoint.timeout_ms"));
    }
    if (const Json* x = optional_field(*e, "retries")) {
      s.retries = static_cast<int>(number(*x, "endpoint.retries"));
    }
  }
  return s;
}

}  // namespace handover
