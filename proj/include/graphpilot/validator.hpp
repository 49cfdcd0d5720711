#pragma once

#include <string>
#include <vector>

#include "graphpilot/kg.hpp"
#include "graphpilot/sequence.hpp"

namespace graphpilot {

// Disjoint structural-violation conditions; a single step may carry several.
enum class ViolationCode {
  kBadStart,               // first step's page differs from the current page
  kUnknownPage,            // step's page has no page fact in the graph
  kUnknownElement,         // no element fact for (page, element)
  kTransitionMismatch,     // declared next page differs from the recorded rule
  kDiscontinuity,          // previous step's next page differs from this page
  kBadTerminal,            // last step is not a stop resting on its own page
  kMissingTextPayload,     // text action without a payload
  kActionElementMismatch,  // stop with an element, or interaction with element 0
};

const char* to_string(ViolationCode code);
ViolationCode violation_code_from_string(const std::string& s);

struct Violation {
  int step_index = 0;  // 1-based
  ViolationCode code = ViolationCode::kBadStart;
  std::string message;

  bool operator==(const Violation& other) const = default;
};

// Empty iff the sequence is valid. Entries are sorted by step index, then
// code; at most one entry per (index, code).
struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
  bool has(int step_index, ViolationCode code) const;
};

// Checks every step of the sequence against the knowledge graph's transition
// rules starting from p_curr, reporting all violations in one pass. Pure.
ValidationReport validate(const ActionSequence& sequence, const KnowledgeGraph& kg,
                          const PageRef& p_curr);

// Harness log form: [{"step": int, "code": str, "message": str}].
std::string serialize_report(const ValidationReport& report);
ValidationReport deserialize_report(const std::string& text);

}  // namespace graphpilot
