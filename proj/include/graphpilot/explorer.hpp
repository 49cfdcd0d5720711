#pragma once

#include <string>
#include <vector>

#include "graphpilot/app_model.hpp"

namespace graphpilot {

// One recorded interaction: the interface before, the action taken, and the
// interface after.
struct ExplorationStep {
  HtmlDoc html_before;
  Action action;
  HtmlDoc html_after;

  bool operator==(const ExplorationStep& other) const = default;
};

// An ordered run of steps ending in a stop step (element 0). Consecutive
// steps chain: step t's html_after equals step t+1's html_before.
struct Episode {
  std::vector<ExplorationStep> steps;

  bool operator==(const Episode& other) const = default;
};

struct ExplorationHistory {
  std::string app_id;
  std::vector<Episode> episodes;

  bool operator==(const ExplorationHistory& other) const = default;
};

struct HistoryCheck {
  bool ok = true;
  std::vector<std::string> problems;

  explicit operator bool() const { return ok; }
};

// Deterministic depth-first exploration. At each page the smallest untried
// element id is attempted next; inputs receive the fixed payload
// "sample_text". An episode ends with stop when the depth budget is hit or
// the current page has no untried element left. Episodes restart from
// start_page until max_episodes, full (page, element) coverage, or an episode
// that makes no progress.
ExplorationHistory explore(const AppSpec& app, int max_depth, int max_episodes);

inline constexpr const char* kExploreTextPayload = "sample_text";

// Replays every step on the simulator and checks the episode invariants
// (chaining, terminal stop, episodes start at start_page). Problems are
// listed with episode/step indices instead of being thrown.
HistoryCheck check_history(const AppSpec& app, const ExplorationHistory& history);

// History file round-trip (the interchange format consumed by the KG builder;
// traces from external crawlers can be ingested if they conform).
std::string serialize_history(const ExplorationHistory& history);
ExplorationHistory deserialize_history(const std::string& text);

}  // namespace graphpilot
