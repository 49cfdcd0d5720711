#include "graphpilot/kg.hpp"

#include <algorithm>
#include <sstream>

#include "graphpilot/errors.hpp"
#include "json.hpp"

namespace graphpilot {

using nlohmann::json;

bool page_ref_less(const PageRef& a, const PageRef& b) {
  const bool ca = is_canonical_page_ref(a);
  const bool cb = is_canonical_page_ref(b);
  if (ca && cb) return page_index(a) < page_index(b);
  if (ca != cb) return ca;
  return a < b;
}

std::string StubAnnotator::describe_page(const HtmlDoc*, const Action*,
                                         const HtmlDoc& curr_html, const Action&,
                                         const HtmlDoc&) {
  const CanonicalPage page = parse_canonical_html(curr_html.canonical_text);
  return "Page " + page.page_id + ": '" + page.title + "' with " +
         std::to_string(page.elements.size()) + " elements";
}

std::string StubAnnotator::describe_element(const HtmlDoc& curr_html,
                                            const Action& curr_action,
                                            const HtmlDoc& next_html) {
  const CanonicalPage page = parse_canonical_html(curr_html.canonical_text);
  const CanonicalPage next = parse_canonical_html(next_html.canonical_text);
  for (const auto& elem : page.elements) {
    if (elem.element_id == curr_action.element_id) {
      return "Element " + std::to_string(elem.element_id) + " '" + elem.label +
             "' on " + page.page_id + ": leads to " + next.page_id;
    }
  }
  throw AnnotatorError("element " + std::to_string(curr_action.element_id) +
                       " not present on page " + page.page_id);
}

namespace {

void check_episode_shape(const Episode& episode, std::size_t ep) {
  const auto& steps = episode.steps;
  if (steps.empty())
    throw HistoryError("episode " + std::to_string(ep) + " is empty");
  for (std::size_t t = 0; t + 1 < steps.size(); ++t) {
    if (steps[t].html_after != steps[t + 1].html_before)
      throw HistoryError("episode " + std::to_string(ep) + " step " +
                         std::to_string(t + 1) + " does not chain");
  }
  const Action& last = steps.back().action;
  if (last.type != ActionType::kStop || last.element_id != 0)
    throw HistoryError("episode " + std::to_string(ep) +
                       " does not end with a stop step");
}

}  // namespace

KnowledgeGraph build_kg(const ExplorationHistory& history, Annotator& annotator) {
  KnowledgeGraph kg;
  kg.app_id = history.app_id;
  PageRegistry registry;  // shared across episodes so page ids stay stable

  for (std::size_t ep = 0; ep < history.episodes.size(); ++ep) {
    const auto& steps = history.episodes[ep].steps;
    check_episode_shape(history.episodes[ep], ep);
    const std::size_t last = steps.size() - 1;

    for (std::size_t t = 0; t <= last; ++t) {
      const ExplorationStep& step = steps[t];
      const PageRef p_curr = page_id(registry, step.html_before);
      const PageRef p_next =
          t == last ? p_curr : page_id(registry, step.html_after);

      auto annotate = [&](auto&& call) -> std::string {
        try {
          return call();
        } catch (const AnnotatorError&) {
          throw;
        } catch (const std::exception& e) {
          throw AnnotatorError("episode " + std::to_string(ep) + " step " +
                               std::to_string(t + 1) + ": " + e.what());
        }
      };

      if (kg.page_facts.find(p_curr) == kg.page_facts.end()) {
        const ExplorationStep* prev = t > 0 ? &steps[t - 1] : nullptr;
        kg.page_facts[p_curr] = annotate([&] {
          return annotator.describe_page(prev ? &prev->html_before : nullptr,
                                         prev ? &prev->action : nullptr,
                                         step.html_before, step.action,
                                         step.html_after);
        });
      }

      const int element = t == last ? 0 : step.action.element_id;
      if (element != 0) {
        const KnowledgeGraph::ElementKey key{p_curr, element};
        if (kg.element_facts.find(key) == kg.element_facts.end()) {
          kg.element_facts[key] = annotate([&] {
            return annotator.describe_element(step.html_before, step.action,
                                              step.html_after);
          });
          kg.transitions[key] = p_next;
        }
      }
    }
  }
  return kg;
}

std::optional<PageRef> query_transition(const KnowledgeGraph& kg, const PageRef& page,
                                        int element_id) {
  auto it = kg.transitions.find({page, element_id});
  if (it == kg.transitions.end()) return std::nullopt;
  return it->second;
}

MergeResult merge_kg(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  if (a.app_id != b.app_id) throw AppMismatch(a.app_id, b.app_id);

  MergeResult result;
  result.kg = a;
  for (const auto& [page, fact] : b.page_facts) {
    auto [it, inserted] = result.kg.page_facts.emplace(page, fact);
    if (!inserted && it->second != fact)
      result.conflicts.push_back("page fact " + page);
  }
  for (const auto& [key, fact] : b.element_facts) {
    auto [it, inserted] = result.kg.element_facts.emplace(key, fact);
    if (!inserted && it->second != fact)
      result.conflicts.push_back("element fact " + key.first + "/" +
                                 std::to_string(key.second));
  }
  for (const auto& [key, target] : b.transitions) {
    auto [it, inserted] = result.kg.transitions.emplace(key, target);
    if (!inserted && it->second != target)
      result.conflicts.push_back("transition " + key.first + "/" +
                                 std::to_string(key.second) + " -> " + it->second +
                                 " vs " + target);
  }
  return result;
}

namespace {

template <typename Map>
std::vector<typename Map::const_iterator> sorted_entries(const Map& map) {
  std::vector<typename Map::const_iterator> its;
  for (auto it = map.begin(); it != map.end(); ++it) its.push_back(it);
  std::sort(its.begin(), its.end(), [](auto a, auto b) {
    if constexpr (std::is_same_v<typename Map::key_type, PageRef>) {
      return page_ref_less(a->first, b->first);
    } else {
      if (a->first.first != b->first.first)
        return page_ref_less(a->first.first, b->first.first);
      return a->first.second < b->first.second;
    }
  });
  return its;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string element_node_name(const PageRef& page, int element_id) {
  if (is_canonical_page_ref(page))
    return "e_" + std::to_string(page_index(page)) + "_" + std::to_string(element_id);
  return page + "_e" + std::to_string(element_id);
}

}  // namespace

std::string serialize_kg(const KnowledgeGraph& kg) {
  json doc;
  doc["app_id"] = kg.app_id;

  doc["page_facts"] = json::array();
  for (auto it : sorted_entries(kg.page_facts)) {
    doc["page_facts"].push_back({{"page", it->first}, {"function", it->second}});
  }
  doc["element_facts"] = json::array();
  for (auto it : sorted_entries(kg.element_facts)) {
    doc["element_facts"].push_back({{"page", it->first.first},
                                    {"element", it->first.second},
                                    {"function", it->second}});
  }
  doc["transitions"] = json::array();
  for (auto it : sorted_entries(kg.transitions)) {
    doc["transitions"].push_back({{"page", it->first.first},
                                  {"element", it->first.second},
                                  {"target", it->second}});
  }
  return doc.dump(2) + "\n";
}

KnowledgeGraph deserialize_kg(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("knowledge graph: ") + e.what());
  }
  KnowledgeGraph kg;
  try {
    kg.app_id = doc.at("app_id").get<std::string>();
    for (const auto& j : doc.at("page_facts")) {
      kg.page_facts[j.at("page").get<std::string>()] =
          j.at("function").get<std::string>();
    }
    for (const auto& j : doc.at("element_facts")) {
      kg.element_facts[{j.at("page").get<std::string>(), j.at("element").get<int>()}] =
          j.at("function").get<std::string>();
    }
    for (const auto& j : doc.at("transitions")) {
      kg.transitions[{j.at("page").get<std::string>(), j.at("element").get<int>()}] =
          j.at("target").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("knowledge graph: ") + e.what());
  }
  for (const auto& [key, target] : kg.transitions) {
    if (kg.element_facts.find(key) == kg.element_facts.end())
      throw ParseError("knowledge graph: transition " + key.first + "/" +
                       std::to_string(key.second) + " has no element fact");
  }
  return kg;
}

std::string export_dot(const KnowledgeGraph& kg) {
  std::ostringstream out;
  out << "digraph knowledge_graph {\n";
  out << "  rankdir=LR;\n";
  for (auto it : sorted_entries(kg.page_facts)) {
    out << "  \"" << dot_escape(it->first) << "\" [shape=box, label=\""
        << dot_escape(it->first) << "\\n" << dot_escape(it->second) << "\"];\n";
  }
  for (auto it : sorted_entries(kg.element_facts)) {
    const std::string node = element_node_name(it->first.first, it->first.second);
    out << "  \"" << dot_escape(node) << "\" [shape=ellipse, label=\""
        << dot_escape(node) << "\\n" << dot_escape(it->second) << "\"];\n";
    out << "  \"" << dot_escape(it->first.first) << "\" -> \"" << dot_escape(node)
        << "\" [style=dotted, arrowhead=none];\n";
  }
  for (auto it : sorted_entries(kg.transitions)) {
    out << "  \"" << dot_escape(it->first.first) << "\" -> \""
        << dot_escape(it->second) << "\" [label=\""
        << dot_escape(element_node_name(it->first.first, it->first.second))
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace graphpilot
