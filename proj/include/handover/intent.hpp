#pragma once

// Handover intent: which object the person wants and which hand they offer.

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "handover/hand_model.hpp"

namespace handover {

struct ToolEntry {
  std::string name;
  std::vector<std::string> synonyms;
  std::vector<std::string> use_cases;
};

class ToolCatalog {
 public:
  ToolCatalog() = default;
  /// Throws InvalidInput on empty or duplicate canonical names.
  explicit ToolCatalog(std::vector<ToolEntry> entries);

  const std::vector<ToolEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  /// Canonical name whose name (or synonym, as fallback) equals `phrase`
  /// after normalization.
  std::optional<std::string> lookup(std::string_view phrase) const;
  bool contains(std::string_view canonical) const;

 private:
  std::vector<ToolEntry> entries_;
};

/// Lower-case, hyphens/underscores/punctuation to spaces, single spaces,
/// trimmed.
std::string normalize_phrase(std::string_view s);

struct TaskDescription {
  std::string object;
  Handedness handedness = Handedness::kRight;

  friend bool operator==(const TaskDescription&, const TaskDescription&) = default;
};

/// "Pass the <object> to <left|right> hand of human"
std::string render_task_description(const TaskDescription& task);

/// Case-insensitive; tolerates surrounding whitespace, quotes and a trailing
/// period. Errors: TemplateMismatch, UnknownObject.
TaskDescription parse_task_description(std::string_view raw, const ToolCatalog& catalog);

struct IntentQuery {
  std::string text;
  std::optional<KeypointMatrix> keypoints;
  std::optional<std::string> image_path;  // opaque; forwarded to the endpoint
  std::optional<Handedness> handedness;   // overrides keypoint classification
};

struct PromptOptions {
  std::string system_role =
      "You are the intent module of a robot arm that hands objects to a person. "
      "Decide which tool from the list the person needs and which of their hands "
      "(left or right) is reaching out to receive it.";
  std::string instruction =
      "Answer with exactly one line and nothing else, strictly following the template: "
      "Pass the <tool name> to <left or right> hand of human";
};

struct Prompt {
  std::string system;
  std::string user;

  std::string render() const;
};

/// Deterministic system/user dialogue listing every catalog tool once.
/// Errors: EmptyText.
Prompt build_prompt(const IntentQuery& query, const ToolCatalog& catalog,
                    const PromptOptions& options = {});

/// Offline resolver: exact name > synonym > use-case phrase, ties broken by
/// catalog order; handedness from the explicit hint or classified keypoints.
/// Errors: EmptyText, NoObjectResolved, MissingHandedness.
TaskDescription resolve_intent_rules(const IntentQuery& query, const ToolCatalog& catalog);

/// Chat-completion style endpoint.
struct EndpointConfig {
  std::string base_url;  // e.g. http://localhost:11434/v1
  std::string model = "gemma2:9b";
  std::chrono::milliseconds timeout{30000};
  int retries = 1;
  std::string token;  // bearer credential; never logged

  /// Applies HANDOVER_ENDPOINT and HANDOVER_API_TOKEN when set.
  void apply_env();
};

/// Returns the model's reply verbatim. Errors: Timeout, TransportError,
/// NonSuccessStatus, MalformedResponse. Retries only transport failures,
/// timeouts and 5xx responses, at most `retries` times.
std::string llm_infer(const EndpointConfig& endpoint, const Prompt& prompt,
                      const std::optional<std::string>& image_path = std::nullopt);

/// Request body sent by `llm_infer` (exposed for tests).
std::string chat_request_body(const EndpointConfig& endpoint, const Prompt& prompt,
                              const std::optional<std::string>& image_path);

}  // namespace handover
