#include "graphpilot/prompt.hpp"

#include <sstream>

#include "graphpilot/errors.hpp"

namespace graphpilot {

namespace {

constexpr const char* kBackground =
    "You are a GUI automation agent for a mobile app. You will be given a\n"
    "user task, the app's knowledge graph, and the current page. Pages are\n"
    "named p0, p1, ... and the element with id j on page p_i is written\n"
    "e_i_j. The action space is {click, text, stop}. A transition rule\n"
    "(e_i_j, p_k) means that interacting with element e_i_j jumps to page\n"
    "p_k. Plan the complete sequence of actions that completes the task,\n"
    "starting from the current page and ending with a stop step on the\n"
    "final page. Only use elements and transitions that appear in the\n"
    "knowledge graph.";

constexpr const char* kOutputFormat =
    "Reply with a line 'ANALYSIS:' followed by your reasoning, then one\n"
    "line per step:\n"
    "STEP <k>: page=p<i> action=<click|text|stop> element=<e_i_j|0> [text=\"<payload>\"] next=p<m>\n"
    "Steps are numbered from 1. The final step must use action=stop with\n"
    "element=0 and next equal to its own page. If the knowledge graph does\n"
    "not give you enough context to continue, reply instead with the\n"
    "single line: REQUEST_HTML <page_id>";

}  // namespace

std::string format_element_ref(const PageRef& page, int element_id) {
  return "e_" + std::to_string(page_index(page)) + "_" + std::to_string(element_id);
}

std::string serialize_kg_for_prompt(const KnowledgeGraph& kg, bool include_transitions) {
  // Pull map entries into page-then-element order (canonical ids sort
  // numerically, so p10 comes after p2).
  std::vector<const std::pair<const PageRef, std::string>*> pages;
  for (const auto& entry : kg.page_facts) pages.push_back(&entry);
  std::sort(pages.begin(), pages.end(),
            [](auto* a, auto* b) { return page_ref_less(a->first, b->first); });

  std::vector<const std::pair<const KnowledgeGraph::ElementKey, std::string>*> elems;
  for (const auto& entry : kg.element_facts) elems.push_back(&entry);
  std::vector<const std::pair<const KnowledgeGraph::ElementKey, PageRef>*> trans;
  for (const auto& entry : kg.transitions) trans.push_back(&entry);
  auto key_less = [](const KnowledgeGraph::ElementKey& a,
                     const KnowledgeGraph::ElementKey& b) {
    if (a.first != b.first) return page_ref_less(a.first, b.first);
    return a.second < b.second;
  };
  std::sort(elems.begin(), elems.end(),
            [&](auto* a, auto* b) { return key_less(a->first, b->first); });
  std::sort(trans.begin(), trans.end(),
            [&](auto* a, auto* b) { return key_less(a->first, b->first); });

  std::ostringstream out;
  out << "Page functions:\n";
  for (auto* entry : pages) out << entry->first << ": " << entry->second << "\n";
  out << "\nElement functions:\n";
  for (auto* entry : elems) {
    out << format_element_ref(entry->first.first, entry->first.second) << ": "
        << entry->second << "\n";
  }
  if (include_transitions) {
    out << "\nTransitions:\n";
    for (auto* entry : trans) {
      out << "(" << format_element_ref(entry->first.first, entry->first.second) << ", "
          << entry->second << ")\n";
    }
  }
  return out.str();
}

PromptText generate_prompt(const PromptContext& ctx) {
  if (ctx.kg == nullptr) throw ConfigError("prompt context has no knowledge graph");
  if (!ctx.invalid_steps.empty() && !ctx.prior_draft)
    throw ConfigError("feedback requires the prior draft");

  std::ostringstream out;
  out << "[BACKGROUND]\n" << kBackground << "\n\n";
  out << "[TASK]\n" << ctx.task_description << "\n\n";
  out << "[CURRENT PAGE]\n" << ctx.current_page << "\n\n";
  out << "[KNOWLEDGE GRAPH]\n"
      << serialize_kg_for_prompt(*ctx.kg, !ctx.omit_transitions) << "\n";
  if (ctx.requested_html) {
    out << "[CURRENT HTML]\n" << ctx.requested_html->canonical_text << "\n\n";
  }
  if (!ctx.invalid_steps.empty()) {
    out << "[FEEDBACK]\n"
        << "Your previous draft contained invalid steps:\n";
    for (const auto& v : ctx.invalid_steps) {
      out << "step " << v.step_index << " invalid: " << to_string(v.code) << " - "
          << v.message << "\n";
    }
    out << "Previous draft:\n" << serialize_draft_steps(*ctx.prior_draft) << "\n";
  }
  out << "[OUTPUT FORMAT]\n" << kOutputFormat << "\n";
  return PromptText{out.str()};
}

}  // namespace graphpilot
