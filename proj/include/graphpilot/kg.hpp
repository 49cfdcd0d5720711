#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphpilot/app_model.hpp"
#include "graphpilot/explorer.hpp"

namespace graphpilot {

// Per-app knowledge graph: one function description per page, one per
// (page, element), and the element-to-page transition rules. Facts are never
// overwritten once defined. Immutable and freely shareable once built.
struct KnowledgeGraph {
  using ElementKey = std::pair<PageRef, int>;

  std::string app_id;
  std::map<PageRef, std::string> page_facts;
  std::map<ElementKey, std::string> element_facts;
  std::map<ElementKey, PageRef> transitions;

  bool operator==(const KnowledgeGraph& other) const = default;
};

// Produces the natural-language function descriptions recorded in the graph.
// prev_html/prev_action are absent on the first step of an episode.
class Annotator {
 public:
  virtual ~Annotator() = default;

  virtual std::string describe_page(const HtmlDoc* prev_html, const Action* prev_action,
                                    const HtmlDoc& curr_html, const Action& curr_action,
                                    const HtmlDoc& next_html) = 0;
  virtual std::string describe_element(const HtmlDoc& curr_html, const Action& curr_action,
                                       const HtmlDoc& next_html) = 0;
};

// Deterministic templated descriptions derived from the canonical HTML; no
// LLM involved. Page: "Page <id>: '<title>' with <k> elements". Element:
// "Element <id> '<label>' on <page>: leads to <target>".
class StubAnnotator : public Annotator {
 public:
  std::string describe_page(const HtmlDoc* prev_html, const Action* prev_action,
                            const HtmlDoc& curr_html, const Action& curr_action,
                            const HtmlDoc& next_html) override;
  std::string describe_element(const HtmlDoc& curr_html, const Action& curr_action,
                               const HtmlDoc& next_html) override;
};

// Folds an exploration history into a knowledge graph, episode by episode in
// order, adding page facts, element facts and transitions the first time each
// key is seen. Page ids come from a registry shared across all episodes.
// Throws HistoryError if the episode invariants do not hold and
// AnnotatorError (tagged with the step index) if the annotator fails.
KnowledgeGraph build_kg(const ExplorationHistory& history, Annotator& annotator);

// Returns the recorded target page for (page, element), or nullopt.
std::optional<PageRef> query_transition(const KnowledgeGraph& kg, const PageRef& page,
                                        int element_id);

struct MergeResult {
  KnowledgeGraph kg;
  // One entry per key present in both inputs with different values; the
  // first argument's value is kept.
  std::vector<std::string> conflicts;
};

// Union of facts from two graphs for the same app; on conflicting keys, a
// wins and the conflict is logged. Throws AppMismatch.
MergeResult merge_kg(const KnowledgeGraph& a, const KnowledgeGraph& b);

// JSON round trip with deterministic ordering (page id, then element id).
std::string serialize_kg(const KnowledgeGraph& kg);
KnowledgeGraph deserialize_kg(const std::string& text);

// Graphviz export: page and element nodes, transition edges labeled by the
// interacting element.
std::string export_dot(const KnowledgeGraph& kg);

// Ordering used everywhere KG entries are listed: canonical "p<n>" ids sort
// numerically, anything else after them lexicographically.
bool page_ref_less(const PageRef& a, const PageRef& b);

}  // namespace graphpilot
