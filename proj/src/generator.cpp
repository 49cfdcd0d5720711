#include "graphpilot/generator.hpp"

#include <deque>
#include <map>
#include <regex>
#include <sstream>

#include "graphpilot/errors.hpp"

namespace graphpilot {

GeneratorResponse GeneratorResponse::make_draft(ActionSequence sequence) {
  GeneratorResponse r;
  r.kind = Kind::kDraft;
  r.draft = std::move(sequence);
  return r;
}

GeneratorResponse GeneratorResponse::make_html_request(PageRef page) {
  GeneratorResponse r;
  r.kind = Kind::kHtmlRequest;
  r.requested_page = std::move(page);
  return r;
}

std::int64_t QueryMeter::total_ns() const {
  std::int64_t total = 0;
  for (auto ns : latencies_ns) total += ns;
  return total;
}

Clock steady_clock_now() {
  return [] {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
}

Clock fixed_step_clock(std::int64_t step_ns) {
  auto ticks = std::make_shared<std::int64_t>(0);
  return [ticks, step_ns] { return ++*ticks * step_ns; };
}

SequenceGenerator::SequenceGenerator() : clock_(steady_clock_now()) {}

GeneratorResponse SequenceGenerator::generate(const PromptText& prompt) {
  const std::int64_t start = clock_();
  auto record = [&] {
    meter_.query_count += 1;
    meter_.latencies_ns.push_back(clock_() - start);
  };
  try {
    GeneratorResponse response = run(prompt);
    record();
    return response;
  } catch (...) {
    record();
    throw;
  }
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool is_blank(const std::string& s) {
  return s.find_first_not_of(" \t") == std::string::npos;
}

const std::regex kStepRe(
    R"(^STEP (\d+): page=(\S+) action=(click|text|stop) element=(\S+)(?: text="([^"]*)")? next=(\S+)$)");
const std::regex kRequestRe(R"(^REQUEST_HTML (\S+)\s*$)");
const std::regex kElementRefRe(R"(^e_(\d+)_(\d+)$)");

SequenceStep parse_step_line(const std::string& line, int line_no, int expected_index) {
  std::smatch m;
  if (!std::regex_match(line, m, kStepRe))
    throw ResponseParseError(line_no, "malformed STEP line");

  if (std::stoi(m[1]) != expected_index)
    throw ResponseParseError(line_no, "expected step number " +
                                          std::to_string(expected_index) + ", got " +
                                          m[1].str());

  SequenceStep step;
  step.page = m[2];
  if (!is_canonical_page_ref(step.page))
    throw ResponseParseError(line_no, "page '" + step.page + "' is not of the form p<i>");
  step.next_page = m[6];
  if (!is_canonical_page_ref(step.next_page))
    throw ResponseParseError(line_no,
                             "next page '" + step.next_page + "' is not of the form p<m>");

  const std::string action = m[3];
  const std::string element = m[4];
  const bool has_text = m[5].matched;

  if (action == "stop") {
    if (element != "0")
      throw ResponseParseError(line_no, "stop requires element=0");
    if (has_text) throw ResponseParseError(line_no, "stop takes no text payload");
    if (step.next_page != step.page)
      throw ResponseParseError(line_no, "stop must keep next equal to its page");
    step.action = Action::stop();
    return step;
  }

  std::smatch em;
  if (!std::regex_match(element, em, kElementRefRe))
    throw ResponseParseError(line_no, "element '" + element + "' is not of the form e_i_j");
  if (std::stoi(em[1]) != page_index(step.page))
    throw ResponseParseError(line_no, "element ref '" + element +
                                          "' does not belong to page " + step.page);
  const int element_id = std::stoi(em[2]);
  if (element_id <= 0) throw ResponseParseError(line_no, "element id must be positive");

  if (action == "click") {
    if (has_text) throw ResponseParseError(line_no, "click takes no text payload");
    step.action = Action::click(element_id);
  } else {  // text
    if (!has_text) throw ResponseParseError(line_no, "text action requires text=\"...\"");
    step.action = Action::text(element_id, m[5]);
  }
  return step;
}

}  // namespace

GeneratorResponse parse_response(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);

  std::size_t i = 0;
  // Free text (the ANALYSIS block) runs until the first actionable line.
  for (; i < lines.size(); ++i) {
    if (lines[i].rfind("STEP ", 0) == 0 || lines[i].rfind("REQUEST_HTML", 0) == 0) break;
  }
  if (i == lines.size())
    throw ResponseParseError(static_cast<int>(lines.size()),
                             "no STEP or REQUEST_HTML line found");

  if (lines[i].rfind("REQUEST_HTML", 0) == 0) {
    std::smatch m;
    if (!std::regex_match(lines[i], m, kRequestRe))
      throw ResponseParseError(static_cast<int>(i) + 1, "malformed REQUEST_HTML line");
    const PageRef page = m[1];
    if (!is_canonical_page_ref(page))
      throw ResponseParseError(static_cast<int>(i) + 1,
                               "requested page '" + page + "' is not of the form p<n>");
    return GeneratorResponse::make_html_request(page);
  }

  ActionSequence draft;
  int expected = 1;
  for (; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    SequenceStep step = parse_step_line(lines[i], static_cast<int>(i) + 1, expected++);
    const bool is_stop = step.action.type == ActionType::kStop;
    draft.steps.push_back(std::move(step));
    if (is_stop) return GeneratorResponse::make_draft(std::move(draft));
  }
  throw ResponseParseError(static_cast<int>(lines.size()),
                           "draft does not end with a stop step");
}

std::string serialize_response(const ActionSequence& draft, const std::string& analysis) {
  std::string out = "ANALYSIS:\n";
  if (!analysis.empty()) {
    out += analysis;
    if (analysis.back() != '\n') out += '\n';
  }
  out += serialize_draft_steps(draft);
  return out;
}

namespace {

// (page, element) -> target edges grouped per page, elements ascending, for
// deterministic BFS tie-breaking.
using EdgeMap = std::map<PageRef, std::vector<std::pair<int, PageRef>>>;

EdgeMap group_edges(const std::map<KnowledgeGraph::ElementKey, PageRef>& transitions) {
  EdgeMap edges;
  for (const auto& [key, target] : transitions) {
    edges[key.first].push_back({key.second, target});
  }
  for (auto& [page, out] : edges) std::sort(out.begin(), out.end());
  return edges;
}

// Shortest (page, element) path from -> to; empty when from == to.
std::optional<std::vector<SequenceStep>> bfs_path(const EdgeMap& edges,
                                                  const PageRef& from,
                                                  const PageRef& to) {
  std::map<PageRef, std::pair<PageRef, int>> parent;  // page -> (prev page, element)
  std::deque<PageRef> queue{from};
  std::map<PageRef, bool> seen{{from, true}};

  while (!queue.empty() && !seen.count(to)) {
    const PageRef page = queue.front();
    queue.pop_front();
    auto it = edges.find(page);
    if (it == edges.end()) continue;
    for (const auto& [element, target] : it->second) {
      if (seen.count(target)) continue;
      seen[target] = true;
      parent[target] = {page, element};
      queue.push_back(target);
    }
  }
  if (!seen.count(to)) return std::nullopt;

  std::vector<SequenceStep> path;
  PageRef at = to;
  while (at != from) {
    const auto& [prev, element] = parent.at(at);
    path.push_back({prev, Action::click(element), at});
    at = prev;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

ActionSequence assemble_goal_sequence(const EdgeMap& edges,
                                      const std::vector<SequenceStep>& path,
                                      const TaskGoal& goal) {
  ActionSequence draft;
  draft.steps = path;
  PageRef final_page = goal.page;
  if (goal.element_id != 0) {
    auto it = edges.find(goal.page);
    const PageRef* target = nullptr;
    if (it != edges.end()) {
      for (const auto& [element, t] : it->second) {
        if (element == goal.element_id) target = &t;
      }
    }
    if (target == nullptr)
      throw Unreachable("goal element " + std::to_string(goal.element_id) +
                        " on " + goal.page + " has no transition rule");
    const Action action = goal.payload ? Action::text(goal.element_id, *goal.payload)
                                       : Action::click(goal.element_id);
    draft.steps.push_back({goal.page, action, *target});
    final_page = *target;
  }
  draft.steps.push_back({final_page, Action::stop(), final_page});
  return draft;
}

}  // namespace

GeneratorResponse oracle_generate(const KnowledgeGraph& kg, const TaskGoal& goal,
                                  const PageRef& p_curr) {
  if (kg.page_facts.find(p_curr) == kg.page_facts.end())
    throw Unreachable("current page " + p_curr + " is not in the knowledge graph");

  const EdgeMap edges = group_edges(kg.transitions);
  auto path = bfs_path(edges, p_curr, goal.page);
  if (!path) throw Unreachable("no path from " + p_curr + " to " + goal.page);
  return GeneratorResponse::make_draft(assemble_goal_sequence(edges, *path, goal));
}

ScriptedGenerator::ScriptedGenerator(std::vector<std::string> script)
    : script_(std::move(script)) {
  if (script_.empty()) throw ConfigError("scripted generator needs a non-empty script");
}

GeneratorResponse ScriptedGenerator::run(const PromptText& prompt) {
  prompts_.push_back(prompt);
  if (next_ >= script_.size()) throw ScriptExhausted();
  return parse_response(script_[next_++]);
}

GeneratorResponse PromptReadingGenerator::run(const PromptText& prompt) {
  const std::vector<std::string> lines = split_lines(prompt.text);

  PageRef current;
  EdgeMap edges;
  const std::regex transition_re(R"(^\(e_(\d+)_(\d+), (p\d+)\)$)");
  bool in_transitions = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i] == "[CURRENT PAGE]" && i + 1 < lines.size()) {
      current = lines[i + 1];
      continue;
    }
    if (lines[i] == "Transitions:") {
      in_transitions = true;
      continue;
    }
    if (in_transitions) {
      std::smatch m;
      if (std::regex_match(lines[i], m, transition_re)) {
        edges[make_page_ref(std::stoi(m[1]))].push_back(
            {std::stoi(m[2]), m[3].str()});
      } else {
        in_transitions = false;
      }
    }
  }
  for (auto& [page, out] : edges) std::sort(out.begin(), out.end());

  if (current.empty())
    throw GeneratorError("prompt has no [CURRENT PAGE] section");

  // Without usable transitions the best this mock can do is stay put.
  auto stay_put = [&] {
    ActionSequence draft;
    draft.steps.push_back({current, Action::stop(), current});
    return GeneratorResponse::make_draft(std::move(draft));
  };

  auto path = bfs_path(edges, current, goal_.page);
  if (!path) return stay_put();
  try {
    return GeneratorResponse::make_draft(assemble_goal_sequence(edges, *path, goal_));
  } catch (const Unreachable&) {
    return stay_put();
  }
}

}  // namespace graphpilot
