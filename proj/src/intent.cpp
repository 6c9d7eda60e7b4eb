#include "handover/intent.hpp"

#include <cctype>
#include <regex>
#include <set>
#include <sstream>

namespace handover {

std::string normalize_phrase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char raw : s) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isalnum(c) || c == '\'') {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

ToolCatalog::ToolCatalog(std::vector<ToolEntry> entries) : entries_(std::move(entries)) {
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    const std::string key = normalize_phrase(e.name);
    if (key.empty()) fail(ErrorCode::kInvalidInput, "catalog entry with an empty name");
    if (!seen.insert(key).second) {
      fail(ErrorCode::kInvalidInput, "duplicate catalog name '" + e.name + "'");
    }
  }
}

std::optional<std::string> ToolCatalog::lookup(std::string_view phrase) const {
  const std::string key = normalize_phrase(phrase);
  for (const auto& e : entries_) {
    if (normalize_phrase(e.name) == key) return e.name;
  }
  for (const auto& e : entries_) {
    for (const auto& syn : e.synonyms) {
      if (normalize_phrase(syn) == key) return e.name;
    }
  }
  return std::nullopt;
}

bool ToolCatalog::contains(std::string_view canonical) const {
  for (const auto& e : entries_) {
    if (e.name == canonical) return true;
  }
  return false;
}

std::string render_task_description(const TaskDescription& task) {
  return "Pass the " + task.object + " to " + std::string(to_string(task.handedness)) +
         " hand of human";
}

TaskDescription parse_task_description(std::string_view raw, const ToolCatalog& catalog) {
  static const std::regex kTemplate(
      R"(^\s*["'`]?\s*pass\s+the\s+(.+?)\s+to\s+(?:the\s+)?(left|right)\s+hand\s+of\s+(?:the\s+)?human\s*\.?\s*["'`]?\s*\.?\s*$)",
      std::regex::icase);
  const std::string text(raw);
  std::smatch m;
  if (!std::regex_match(text, m, kTemplate)) {
    fail(ErrorCode::kTemplateMismatch, "reply does not follow the task template: '" + text + "'");
  }
  const std::string object = m[1].str();
  const auto canonical = catalog.lookup(object);
  if (!canonical) fail(ErrorCode::kUnknownObject, "object '" + object + "' is not in the catalog");
  return {*canonical, parse_handedness(m[2].str())};
}

std::string Prompt::render() const { return "[system]\n" + system + "\n\n[user]\n" + user + "\n"; }

Prompt build_prompt(const IntentQuery& query, const ToolCatalog& catalog,
                    const PromptOptions& options) {
  if (normalize_phrase(query.text).empty()) {
    fail(ErrorCode::kEmptyText, "intent query text is empty");
  }
  std::ostringstream user;
  user << "Available tools:\n";
  for (const auto& e : catalog.entries()) user << "- " << e.name << "\n";
  user << "\nRequest: \"" << query.text << "\"\n";
  if (query.handedness) {
    user << "Receiving hand: the person offers their " << to_string(*query.handedness)
         << " hand.\n";
  } else if (query.image_path) {
    user << "Receiving hand: see the attached image.\n";
  } else if (query.keypoints) {
    try {
      user << "Receiving hand: keypoint analysis indicates the "
           << to_string(classify_handedness(*query.keypoints)) << " hand.\n";
    } catch (const Error&) {
      user << "Receiving hand: unclear from the observation.\n";
    }
  }
  user << "\n" << options.instruction;
  return {options.system_role, user.str()};
}

namespace {

bool contains_phrase(const std::string& padded_text, std::string_view phrase) {
  const std::string p = normalize_phrase(phrase);
  if (p.empty()) return false;
  if (padded_text.find(" " + p + " ") != std::string::npos) return true;
  // simple plural
  return padded_text.find(" " + p + "s ") != std::string::npos ||
         padded_text.find(" " + p + "es ") != std::string::npos;
}

}  // namespace

TaskDescription resolve_intent_rules(const IntentQuery& query, const ToolCatalog& catalog) {
  const std::string text = normalize_phrase(query.text);
  if (text.empty()) fail(ErrorCode::kEmptyText, "intent query text is empty");
  const std::string padded = " " + text + " ";

  int best_score = 0;
  const ToolEntry* best = nullptr;
  for (const auto& e : catalog.entries()) {
    int score = 0;
    if (contains_phrase(padded, e.name)) {
      score = 3;
    } else {
      for (const auto& s : e.synonyms) {
        if (contains_phrase(padded, s)) score = 2;
      }
      if (score == 0) {
        for (const auto& u : e.use_cases) {
          if (contains_phrase(padded, u)) score = 1;
        }
      }
    }
    if (score > best_score) {
      best_score = score;
      best = &e;
    }
  }
  if (!best) fail(ErrorCode::kNoObjectResolved, "no catalog tool matches '" + query.text + "'");

  Handedness hand;
  if (query.handedness) {
    hand = *query.handedness;
  } else if (query.keypoints) {
    hand = classify_handedness(*query.keypoints);
  } else {
    fail(ErrorCode::kMissingHandedness, "query has neither keypoints nor a handedness hint");
  }
  return {best->name, hand};
}

}  // namespace handover
