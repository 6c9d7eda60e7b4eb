#include "handover/evaluation.hpp"

#include <cstdio>
#include <numeric>
#include <thread>

namespace handover {

std::string_view to_string(AmbiguityTier t) {
  switch (t) {
    case AmbiguityTier::kClear: return "clear";
    case AmbiguityTier::kFoggy: return "foggy";
    case AmbiguityTier::kFuzzy: return "fuzzy";
  }
  return "clear";
}

AmbiguityTier parse_tier(std::string_view s) {
  const std::string n = normalize_phrase(s);
  if (n == "clear") return AmbiguityTier::kClear;
  if (n == "foggy") return AmbiguityTier::kFoggy;
  if (n == "fuzzy") return AmbiguityTier::kFuzzy;
  fail(ErrorCode::kInvalidInput, "tier must be clear, foggy or fuzzy, got '" + std::string(s) + "'");
}

bool item_passes(const TaskDescription& predicted, const TaskDescription& truth) {
  return predicted.object == truth.object && predicted.handedness == truth.handedness;
}

double average_accuracy(std::span<const double> tier_accuracies) {
  if (tier_accuracies.empty()) return 0.0;
  return std::accumulate(tier_accuracies.begin(), tier_accuracies.end(), 0.0) /
         static_cast<double>(tier_accuracies.size());
}

EvalReport evaluate_corpus(std::span<const EvalItem> corpus, const IntentResolver& resolver,
                           const ToolCatalog& catalog, unsigned threads) {
  if (corpus.empty()) fail(ErrorCode::kEmptyCorpus, "evaluation corpus is empty");
  for (const auto& item : corpus) {
    if (!catalog.contains(item.truth.object)) {
      fail(ErrorCode::kUnknownObject,
           "ground-truth object '" + item.truth.object + "' is not in the catalog");
    }
  }

  EvalReport report;
  report.items.resize(corpus.size());
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      ItemResult& r = report.items[i];
      try {
        r.predicted = resolver(corpus[i].query);
        r.pass = item_passes(*r.predicted, corpus[i].truth);
      } catch (const Error& e) {
        r.error = std::string(e.name());
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(corpus.size())));
  if (threads == 1) {
    run(0, corpus.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (corpus.size() + threads - 1) / threads;
    for (std::size_t b = 0; b < corpus.size(); b += chunk) {
      pool.emplace_back(run, b, std::min(corpus.size(), b + chunk));
    }
  }

  std::vector<double> accuracies;
  for (AmbiguityTier tier : kAllTiers) {
    TierResult t{tier};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus[i].tier != tier) continue;
      ++t.items;
      if (report.items[i].pass) ++t.passes;
    }
    if (t.items == 0) {
      report.absent_tiers.push_back(tier);
      continue;
    }
    t.accuracy = 100.0 * static_cast<double>(t.passes) / static_cast<double>(t.items);
    accuracies.push_back(t.accuracy);
    report.tiers.push_back(t);
  }
  report.average = average_accuracy(accuracies);
  return report;
}

std::string report_csv(const EvalReport& report) {
  std::string out = "tier,items,passes,accuracy\n";
  char buf[128];
  for (const auto& t : report.tiers) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.4f\n", std::string(to_string(t.tier)).c_str(),
                  t.items, t.passes, t.accuracy);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "average,,,%.4f\n", report.average);
  out += buf;
  return out;
}

}  // namespace handover
