#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphpilot/kg.hpp"
#include "graphpilot/sequence.hpp"
#include "graphpilot/validator.hpp"

namespace graphpilot {

// Everything the prompt generator needs for one generator call. invalid_steps
// non-empty requires prior_draft so the feedback can show what to repair.
struct PromptContext {
  std::string task_description;
  const KnowledgeGraph* kg = nullptr;
  std::vector<Violation> invalid_steps;
  PageRef current_page;
  std::optional<ActionSequence> prior_draft;
  std::optional<HtmlDoc> requested_html;
  bool omit_transitions = false;  // ablation switch: drop the transitions block
};

// Assembled prompt. Sections appear in fixed order: [BACKGROUND], [TASK],
// [CURRENT PAGE], [KNOWLEDGE GRAPH], optional [CURRENT HTML], optional
// [FEEDBACK], [OUTPUT FORMAT]. Stable contract; golden tests pin the bytes.
struct PromptText {
  std::string text;

  bool operator==(const PromptText& other) const = default;
};

// ("p1", 1) -> "e_1_1". Throws BadPageRef unless the page id has the
// canonical "p<i>" form.
std::string format_element_ref(const PageRef& page, int element_id);

// Three blocks, sorted by page then element, byte-stable:
//   Page functions:    "p<i>: <function>" per line
//   Element functions: "e_<i>_<j>: <function>" per line
//   Transitions:       "(e_<i>_<j>, p<k>)" per line
// With include_transitions=false the transitions block is omitted entirely.
std::string serialize_kg_for_prompt(const KnowledgeGraph& kg,
                                    bool include_transitions = true);

PromptText generate_prompt(const PromptContext& ctx);

}  // namespace graphpilot
