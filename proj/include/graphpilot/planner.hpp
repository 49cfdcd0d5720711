#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "graphpilot/generator.hpp"
#include "graphpilot/kg.hpp"
#include "graphpilot/sequence.hpp"
#include "graphpilot/validator.hpp"

namespace graphpilot {

// Serves HTML requests; typically backed by render_html on the live app.
using HtmlProvider = std::function<HtmlDoc(const PageRef&)>;

// One online planning session: prompt -> generate -> (serve HTML requests)
// -> validate -> refine, bounded by max_iterations. Single-threaded
// start-to-finish; many sessions may share one immutable graph.
struct PlanSession {
  std::string task_description;
  const KnowledgeGraph* kg = nullptr;
  PageRef current_page;
  SequenceGenerator* generator = nullptr;
  int max_iterations = 3;
  int max_html_requests = 2;  // per iteration
  HtmlProvider html_provider;  // absent: HTML requests fail their iteration

  // Ablation switches for the harness.
  bool omit_transitions = false;
  bool skip_validation = false;
  bool reject_html_requests = false;
};

struct PlanMetrics {
  int queries = 0;
  int validation_rounds = 0;
  int html_requests = 0;
  int iterations = 0;
  std::int64_t wall_ns = 0;  // generator calls only; simulator time excluded
};

struct PlanOutcome {
  bool success = false;
  ActionSequence sequence;      // validated when success (unless skip_validation)
  std::string failure_reason;   // set when !success
  ValidationReport last_report;  // from the most recent validation round
  PlanMetrics metrics;
};

// Runs the refinement loop. A draft with a non-empty report, a response
// parse error, or a generator error each consume one iteration; only the
// most recent report is fed back. HTML requests are served within the same
// iteration, each re-call counting as one more query.
PlanOutcome plan(PlanSession& session);

// Replays a successful outcome on the simulator, asserting every observed
// page matches the declared one. Returns the final page; throws
// ExecutionDivergence on any mismatch (knowledge graph / app drift).
PageRef execute_plan(const AppSpec& app, const PlanOutcome& outcome);
PageRef execute_sequence(const AppSpec& app, const ActionSequence& sequence);

std::string serialize_outcome(const PlanOutcome& outcome);

}  // namespace graphpilot
