#include "graphpilot/planner.hpp"

#include "graphpilot/errors.hpp"
#include "graphpilot/prompt.hpp"
#include "json.hpp"

namespace graphpilot {

using nlohmann::json;

PlanOutcome plan(PlanSession& session) {
  if (session.kg == nullptr || session.generator == nullptr)
    throw ConfigError("plan session needs a knowledge graph and a generator");
  if (session.max_iterations < 1) throw ConfigError("max_iterations must be >= 1");

  PlanOutcome outcome;
  const QueryMeter& meter = session.generator->meter();
  const std::size_t meter_start = meter.latencies_ns.size();

  ValidationReport last_report;
  std::optional<ActionSequence> prior_draft;

  for (int iter = 1; iter <= session.max_iterations; ++iter) {
    outcome.metrics.iterations = iter;

    PromptContext ctx;
    ctx.task_description = session.task_description;
    ctx.kg = session.kg;
    ctx.current_page = session.current_page;
    ctx.invalid_steps = last_report.violations;
    ctx.prior_draft = prior_draft;
    ctx.omit_transitions = session.omit_transitions;

    int served_this_iteration = 0;
    while (true) {
      GeneratorResponse response;
      try {
        response = session.generator->generate(generate_prompt(ctx));
      } catch (const ResponseParseError& e) {
        outcome.failure_reason = e.what();
        break;  // iteration consumed
      } catch (const GeneratorError& e) {
        outcome.failure_reason = e.what();
        break;
      }

      if (!response.is_draft()) {
        if (session.reject_html_requests) {
          outcome.failure_reason = "html requests are disabled";
          break;
        }
        if (served_this_iteration >= session.max_html_requests) {
          outcome.failure_reason = "html request budget exceeded";
          break;
        }
        if (!session.html_provider) {
          outcome.failure_reason = "no html provider configured";
          break;
        }
        try {
          ctx.requested_html = session.html_provider(response.requested_page);
        } catch (const Error& e) {
          outcome.failure_reason = e.what();
          break;
        }
        served_this_iteration += 1;
        outcome.metrics.html_requests += 1;
        continue;  // re-query within the same iteration
      }

      if (session.skip_validation) {
        outcome.success = true;
        outcome.sequence = std::move(response.draft);
      } else {
        outcome.metrics.validation_rounds += 1;
        ValidationReport report =
            validate(response.draft, *session.kg, session.current_page);
        outcome.last_report = report;
        if (report.valid()) {
          outcome.success = true;
          outcome.sequence = std::move(response.draft);
        } else {
          last_report = std::move(report);
          prior_draft = std::move(response.draft);
          outcome.failure_reason = "draft has invalid steps";
        }
      }
      break;
    }

    if (outcome.success) break;
  }

  if (!outcome.success && outcome.failure_reason.empty())
    outcome.failure_reason = "max iterations reached";
  else if (!outcome.success)
    outcome.failure_reason = "max iterations reached: " + outcome.failure_reason;

  outcome.metrics.queries =
      static_cast<int>(meter.latencies_ns.size() - meter_start);
  for (std::size_t i = meter_start; i < meter.latencies_ns.size(); ++i)
    outcome.metrics.wall_ns += meter.latencies_ns[i];
  return outcome;
}

PageRef execute_sequence(const AppSpec& app, const ActionSequence& sequence) {
  if (sequence.steps.empty())
    throw ExecutionDivergence("sequence is empty");

  PageRef current = sequence.steps.front().page;
  for (std::size_t i = 0; i < sequence.steps.size(); ++i) {
    const SequenceStep& step = sequence.steps[i];
    if (current != step.page)
      throw ExecutionDivergence("step " + std::to_string(i + 1) + " declares page " +
                                step.page + " but the simulator is on " + current);
    PageRef landed;
    try {
      landed = apply_action(app, current, step.action);
    } catch (const Error& e) {
      throw ExecutionDivergence("step " + std::to_string(i + 1) + ": " + e.what());
    }
    if (landed != step.next_page)
      throw ExecutionDivergence("step " + std::to_string(i + 1) + " declares next page " +
                                step.next_page + " but the simulator landed on " + landed);
    current = landed;
  }
  return current;
}

PageRef execute_plan(const AppSpec& app, const PlanOutcome& outcome) {
  if (!outcome.success)
    throw std::logic_error("execute_plan requires a successful outcome");
  return execute_sequence(app, outcome.sequence);
}

std::string serialize_outcome(const PlanOutcome& outcome) {
  json doc;
  doc["success"] = outcome.success;
  if (outcome.success) {
    doc["sequence"] = json::parse(serialize_sequence(outcome.sequence));
  } else {
    doc["failure_reason"] = outcome.failure_reason;
    doc["last_report"] = json::parse(serialize_report(outcome.last_report));
  }
  doc["metrics"] = {{"queries", outcome.metrics.queries},
                    {"validation_rounds", outcome.metrics.validation_rounds},
                    {"html_requests", outcome.metrics.html_requests},
                    {"iterations", outcome.metrics.iterations},
                    {"wall_ms", outcome.metrics.wall_ns / 1e6}};
  return doc.dump(2) + "\n";
}

}  // namespace graphpilot
