#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graphpilot/kg.hpp"
#include "graphpilot/prompt.hpp"
#include "graphpilot/sequence.hpp"

namespace graphpilot {

// A generator either proposes a complete draft or asks for the HTML of a
// page to get more context.
struct GeneratorResponse {
  enum class Kind { kDraft, kHtmlRequest };

  Kind kind = Kind::kDraft;
  ActionSequence draft;    // when kind == kDraft
  PageRef requested_page;  // when kind == kHtmlRequest

  static GeneratorResponse make_draft(ActionSequence sequence);
  static GeneratorResponse make_html_request(PageRef page);

  bool is_draft() const { return kind == Kind::kDraft; }
};

// Counts generator queries and the wall-clock latency of each.
struct QueryMeter {
  int query_count = 0;
  std::vector<std::int64_t> latencies_ns;

  std::int64_t total_ns() const;
};

// Monotonic time source in nanoseconds. Injectable so seeded bench runs can
// use a fixed-step clock and stay byte-reproducible.
using Clock = std::function<std::int64_t()>;

Clock steady_clock_now();
// Advances by step_ns on every call; with one start/stop pair per query,
// every query reads exactly step_ns.
Clock fixed_step_clock(std::int64_t step_ns);

// The LLM seat. Every generate() call is metered, including ones that throw.
class SequenceGenerator {
 public:
  SequenceGenerator();
  virtual ~SequenceGenerator() = default;

  GeneratorResponse generate(const PromptText& prompt);

  const QueryMeter& meter() const { return meter_; }
  void set_clock(Clock clock) { clock_ = std::move(clock); }

 protected:
  virtual GeneratorResponse run(const PromptText& prompt) = 0;

 private:
  QueryMeter meter_;
  Clock clock_;
};

// Parses generator output. Grammar: either a line `REQUEST_HTML <page_id>`,
// or an ANALYSIS free-text block followed by numbered STEP lines terminated
// by a stop step. STEP lines are strict (numbering, e_i_j/page agreement,
// action/element/payload coherence); anything before the first STEP or
// REQUEST_HTML line and anything after the stop step is ignored.
GeneratorResponse parse_response(const std::string& text);

// Inverse of parse_response for drafts: "ANALYSIS:" block then STEP lines.
std::string serialize_response(const ActionSequence& draft,
                               const std::string& analysis = "");

// A task goal for the deterministic test backends: reach `page`, then
// interact with `element_id` (0 means just stop there), typing `payload`
// when the interaction is a text input.
struct TaskGoal {
  PageRef page;
  int element_id = 0;
  std::optional<std::string> payload;
};

// Deterministic "perfect LLM": breadth-first shortest path over the graph's
// transition rules from p_curr to the goal page (ties broken by smallest
// element id), then the goal interaction, then stop. Throws Unreachable when
// the graph has no path or lacks the goal element.
GeneratorResponse oracle_generate(const KnowledgeGraph& kg, const TaskGoal& goal,
                                  const PageRef& p_curr);

class OracleGenerator : public SequenceGenerator {
 public:
  OracleGenerator(const KnowledgeGraph& kg, TaskGoal goal, PageRef p_curr)
      : kg_(&kg), goal_(std::move(goal)), p_curr_(std::move(p_curr)) {}

 protected:
  GeneratorResponse run(const PromptText&) override {
    return oracle_generate(*kg_, goal_, p_curr_);
  }

 private:
  const KnowledgeGraph* kg_;
  TaskGoal goal_;
  PageRef p_curr_;
};

// Replays canned raw response texts in order; used for fault injection.
// Throws ScriptExhausted when asked for more responses than scripted.
class ScriptedGenerator : public SequenceGenerator {
 public:
  explicit ScriptedGenerator(std::vector<std::string> script);

  // Prompts seen so far, in call order; lets tests inspect feedback content.
  const std::vector<PromptText>& prompts_received() const { return prompts_; }

 protected:
  GeneratorResponse run(const PromptText& prompt) override;

 private:
  std::vector<std::string> script_;
  std::size_t next_ = 0;
  std::vector<PromptText> prompts_;
};

// A mock that plans like the oracle but can only see what the prompt says:
// it parses the current page and the transitions block out of the prompt
// text and searches over those edges alone. With no usable route it falls
// back to a stop-only draft. Exists to make the no-transition-rules ablation
// measurable.
class PromptReadingGenerator : public SequenceGenerator {
 public:
  explicit PromptReadingGenerator(TaskGoal goal) : goal_(std::move(goal)) {}

 protected:
  GeneratorResponse run(const PromptText& prompt) override;

 private:
  TaskGoal goal_;
};

}  // namespace graphpilot
