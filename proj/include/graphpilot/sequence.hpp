#pragma once

#include <string>
#include <vector>

#include "graphpilot/app_model.hpp"

namespace graphpilot {

// One planned step: the page it starts on, the action, and the page the
// action is declared to land on.
struct SequenceStep {
  PageRef page;
  Action action;
  PageRef next_page;

  bool operator==(const SequenceStep& other) const = default;
};

// A complete plan for a task. Well-formed sequences end with a stop step
// (element 0) whose next_page equals its page; the validator reports
// sequences that do not.
struct ActionSequence {
  std::vector<SequenceStep> steps;

  bool operator==(const ActionSequence& other) const = default;
};

// Renders the STEP lines of the response grammar:
//   STEP <k>: page=p<i> action=<a> element=<e_i_j|0> [text="<payload>"] next=p<m>
// Element refs use the e_<i>_<j> notation, so pages must be canonical.
std::string serialize_draft_steps(const ActionSequence& sequence);

// Sequence file round trip: {"steps": [{"page", "action", "element",
// "text"?, "next"}]}.
std::string serialize_sequence(const ActionSequence& sequence);
ActionSequence deserialize_sequence(const std::string& text);

}  // namespace graphpilot
