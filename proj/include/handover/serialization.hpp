#pragma once

// JSON records for every structured file the tools read or write. Writers
// use insertion-ordered objects so output is byte-stable for fixed inputs.

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "handover/evaluation.hpp"
#include "handover/grasp.hpp"
#include "handover/intent.hpp"
#include "handover/pipeline.hpp"

namespace handover {

using Json = nlohmann::ordered_json;

inline constexpr const char* kConfigSchema = "handover-config/1";
inline constexpr const char* kHandModelFormat = "hand-model/1";

/// Whole-file helpers. IoError when unreadable/unwritable, InvalidInput on
/// malformed JSON.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
Json read_json_file(const std::filesystem::path& path);
/// Two-space indented, trailing newline.
std::string dump_json(const Json& j);

Json to_json(const TaskDescription& task);
TaskDescription task_from_json(const Json& j);

Json to_json(const HandPose& pose);
HandPose hand_pose_from_json(const Json& j);

/// 21 rows of [x, y, z].
Json keypoints_to_json(const KeypointMatrix& k);
KeypointMatrix keypoints_from_json(const Json& j);

/// Accepts a bare 21 x 3 array or {"keypoints": ..., "vertices": ...}.
Observation observation_from_json(const Json& j);

/// {"matrix": 16 row-major, "width_m", "source"}
Json to_json(const GraspCandidate& c);
GraspCandidate grasp_from_json(const Json& j, double max_width = kMaxGripperWidth);
/// Array of candidates; any width above `max_width` rejects the whole file.
std::vector<GraspCandidate> grasps_from_json(const Json& j, double max_width = kMaxGripperWidth);

Json to_json(const ToolCatalog& catalog);
/// Array of {name, synonyms?, use_cases?}.
ToolCatalog catalog_from_json(const Json& j);

Json to_json(const EvalItem& item);
/// Array of {text, tier, truth: {object, hand}, keypoints?, image?, hand_hint?}.
std::vector<EvalItem> corpus_from_json(const Json& j);
Json to_json(const EvalReport& report);

/// {object: {left?: HandPose, right?: HandPose}}
Json to_json(const CannedPoseLibrary& lib);
CannedPoseLibrary pose_library_from_json(const Json& j);

Json to_json(const ValidationReport& report);

Json to_json(const HandoverConfiguration& config);
/// Restores a configuration written by `to_json`. The posed hand is read
/// back verbatim, so no hand model is needed.
HandoverConfiguration configuration_from_json(const Json& j);

Json to_json(const EndEffectorTarget& target);

/// float32 arrays stored as little-endian base64.
Json to_json(const HandModel& model);
HandModel hand_model_from_json(const Json& j);

/// Defaults read from a settings file. Every field is optional.
struct Settings {
  std::optional<double> lambda;
  std::optional<double> clearance;
  std::optional<CosineMode> cosine_mode;
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
  std::optional<int> timeout_ms;
  std::optional<int> retries;
};

Settings settings_from_json(const Json& j);

}  // namespace handover
