#include "graphpilot/validator.hpp"

#include <algorithm>

#include "graphpilot/errors.hpp"
#include "json.hpp"

namespace graphpilot {

using nlohmann::json;

const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::kBadStart: return "BAD_START";
    case ViolationCode::kUnknownPage: return "UNKNOWN_PAGE";
    case ViolationCode::kUnknownElement: return "UNKNOWN_ELEMENT";
    case ViolationCode::kTransitionMismatch: return "TRANSITION_MISMATCH";
    case ViolationCode::kDiscontinuity: return "DISCONTINUITY";
    case ViolationCode::kBadTerminal: return "BAD_TERMINAL";
    case ViolationCode::kMissingTextPayload: return "MISSING_TEXT_PAYLOAD";
    case ViolationCode::kActionElementMismatch: return "ACTION_ELEMENT_MISMATCH";
  }
  return "?";
}

ViolationCode violation_code_from_string(const std::string& s) {
  static const std::pair<const char*, ViolationCode> table[] = {
      {"BAD_START", ViolationCode::kBadStart},
      {"UNKNOWN_PAGE", ViolationCode::kUnknownPage},
      {"UNKNOWN_ELEMENT", ViolationCode::kUnknownElement},
      {"TRANSITION_MISMATCH", ViolationCode::kTransitionMismatch},
      {"DISCONTINUITY", ViolationCode::kDiscontinuity},
      {"BAD_TERMINAL", ViolationCode::kBadTerminal},
      {"MISSING_TEXT_PAYLOAD", ViolationCode::kMissingTextPayload},
      {"ACTION_ELEMENT_MISMATCH", ViolationCode::kActionElementMismatch},
  };
  for (const auto& [name, code] : table) {
    if (s == name) return code;
  }
  throw ParseError("unknown violation code '" + s + "'");
}

bool ValidationReport::has(int step_index, ViolationCode code) const {
  for (const auto& v : violations) {
    if (v.step_index == step_index && v.code == code) return true;
  }
  return false;
}

ValidationReport validate(const ActionSequence& sequence, const KnowledgeGraph& kg,
                          const PageRef& p_curr) {
  ValidationReport report;
  auto flag = [&](int index, ViolationCode code, const std::string& message) {
    for (const auto& v : report.violations) {
      if (v.step_index == index && v.code == code) return;
    }
    report.violations.push_back({index, code, message});
  };

  const auto& steps = sequence.steps;
  if (steps.empty()) {
    flag(1, ViolationCode::kBadTerminal, "sequence is empty");
    return report;
  }

  if (steps.front().page != p_curr)
    flag(1, ViolationCode::kBadStart,
         "sequence starts at " + steps.front().page + " but the current page is " + p_curr);

  for (std::size_t i = 0; i < steps.size(); ++i) {
    const int index = static_cast<int>(i) + 1;
    const SequenceStep& step = steps[i];
    const bool interaction =
        step.action.type == ActionType::kClick || step.action.type == ActionType::kText;

    if (kg.page_facts.find(step.page) == kg.page_facts.end())
      flag(index, ViolationCode::kUnknownPage,
           "page " + step.page + " is not in the knowledge graph");

    if (step.action.type == ActionType::kStop && step.action.element_id != 0)
      flag(index, ViolationCode::kActionElementMismatch,
           "stop must use element 0, got " + std::to_string(step.action.element_id));
    if (interaction && step.action.element_id == 0)
      flag(index, ViolationCode::kActionElementMismatch,
           std::string(to_string(step.action.type)) + " requires an element");
    if (step.action.type == ActionType::kText && !step.action.text_payload)
      flag(index, ViolationCode::kMissingTextPayload, "text action has no payload");

    if (interaction && step.action.element_id > 0) {
      const KnowledgeGraph::ElementKey key{step.page, step.action.element_id};
      if (kg.element_facts.find(key) == kg.element_facts.end()) {
        flag(index, ViolationCode::kUnknownElement,
             "no element fact for element " + std::to_string(step.action.element_id) +
                 " on " + step.page);
      } else {
        auto it = kg.transitions.find(key);
        if (it != kg.transitions.end() && it->second != step.next_page)
          flag(index, ViolationCode::kTransitionMismatch,
               "declared next page " + step.next_page +
                   " but the knowledge graph records " + it->second);
      }
    }

    // stop never changes the page; a mid-sequence stop declaring a jump
    // breaks execution equivalence just like a wrong transition.
    if (step.action.type == ActionType::kStop && i + 1 < steps.size() &&
        step.next_page != step.page)
      flag(index, ViolationCode::kTransitionMismatch,
           "stop stays on " + step.page + " but declares " + step.next_page);

    if (i + 1 < steps.size() && step.next_page != steps[i + 1].page)
      flag(index + 1, ViolationCode::kDiscontinuity,
           "step " + std::to_string(index) + " ends on " + step.next_page +
               " but step " + std::to_string(index + 1) + " starts on " +
               steps[i + 1].page);
  }

  const SequenceStep& last = steps.back();
  if (last.action.type != ActionType::kStop || last.action.element_id != 0 ||
      last.next_page != last.page)
    flag(static_cast<int>(steps.size()), ViolationCode::kBadTerminal,
         "sequence must end with a stop step resting on its page");

  std::sort(report.violations.begin(), report.violations.end(),
            [](const Violation& a, const Violation& b) {
              if (a.step_index != b.step_index) return a.step_index < b.step_index;
              return static_cast<int>(a.code) < static_cast<int>(b.code);
            });
  return report;
}

std::string serialize_report(const ValidationReport& report) {
  json doc = json::array();
  for (const auto& v : report.violations) {
    doc.push_back({{"step", v.step_index},
                   {"code", to_string(v.code)},
                   {"message", v.message}});
  }
  return doc.dump(2) + "\n";
}

ValidationReport deserialize_report(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  ValidationReport report;
  try {
    for (const auto& j : doc) {
      report.violations.push_back({j.at("step").get<int>(),
                                   violation_code_from_string(j.at("code").get<std::string>()),
                                   j.at("message").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  return report;
}

}  // namespace graphpilot
