#pragma once

// Three-tier accuracy evaluation of an intent resolver.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "handover/intent.hpp"

namespace handover {

enum class AmbiguityTier { kClear, kFoggy, kFuzzy };

inline constexpr std::array<AmbiguityTier, 3> kAllTiers{AmbiguityTier::kClear, AmbiguityTier::kFoggy,
                                                        AmbiguityTier::kFuzzy};

std::string_view to_string(AmbiguityTier t);
AmbiguityTier parse_tier(std::string_view s);

struct EvalItem {
  IntentQuery query;
  AmbiguityTier tier = AmbiguityTier::kClear;
  TaskDescription truth;
};

struct TierResult {
  AmbiguityTier tier;
  std::size_t items = 0;
  std::size_t passes = 0;
  double accuracy = 0.0;  // percent
};

struct ItemResult {
  bool pass = false;
  std::optional<TaskDescription> predicted;
  std::string error;  // error name when the resolver threw
};

struct EvalReport {
  std::vector<TierResult> tiers;             // present tiers, in clear/foggy/fuzzy order
  std::vector<AmbiguityTier> absent_tiers;
  double average = 0.0;                      // unweighted mean over present tiers
  std::vector<ItemResult> items;             // same order as the corpus
};

using IntentResolver = std::function<TaskDescription(const IntentQuery&)>;

/// Passes only when both the object and the hand match.
bool item_passes(const TaskDescription& predicted, const TaskDescription& truth);

/// Unweighted mean of per-tier accuracies.
double average_accuracy(std::span<const double> tier_accuracies);

/// Runs `resolver` over the corpus. Resolver exceptions count as failures.
/// With threads > 1 the resolver must be safe to call concurrently.
/// Errors: EmptyCorpus, UnknownObject (ground truth not in catalog).
EvalReport evaluate_corpus(std::span<const EvalItem> corpus, const IntentResolver& resolver,
                           const ToolCatalog& catalog, unsigned threads = 1);

/// "tier,items,passes,accuracy" rows followed by an "average" row.
std::string report_csv(const EvalReport& report);

}  // namespace handover
