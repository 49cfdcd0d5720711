#include "graphpilot/explorer.hpp"

#include <set>
#include <utility>

#include "graphpilot/errors.hpp"
#include "json.hpp"

namespace graphpilot {

using nlohmann::json;

namespace {

Action probe_action(const ElementSpec& elem) {
  return elem.kind == ElementKind::kInput
             ? Action::text(elem.element_id, kExploreTextPayload)
             : Action::click(elem.element_id);
}

}  // namespace

ExplorationHistory explore(const AppSpec& app, int max_depth, int max_episodes) {
  if (max_depth < 1 || max_episodes < 1)
    throw ConfigError("explore budgets must be positive");

  ExplorationHistory history;
  history.app_id = app.app_id;

  std::set<std::pair<PageRef, int>> tried;
  const std::size_t total = app.element_count();

  for (int ep = 0; ep < max_episodes && tried.size() < total; ++ep) {
    Episode episode;
    const std::size_t tried_before = tried.size();
    PageRef current = app.start_page;

    for (int depth = 0; depth < max_depth; ++depth) {
      const PageSpec& page = app.page_or_throw(current);
      const ElementSpec* next = nullptr;
      for (const auto& elem : page.elements) {  // ascending element_id
        if (tried.find({current, elem.element_id}) == tried.end()) {
          next = &elem;
          break;
        }
      }
      if (next == nullptr) break;  // page fully tried

      const Action action = probe_action(*next);
      const PageRef landed = apply_action(app, current, action);
      episode.steps.push_back(
          {render_html(app, current), action, render_html(app, landed)});
      tried.insert({current, next->element_id});
      current = landed;
    }

    HtmlDoc here = render_html(app, current);
    episode.steps.push_back({here, Action::stop(), here});
    history.episodes.push_back(std::move(episode));

    // A no-progress episode means start_page is exhausted and every further
    // episode would be identical.
    if (tried.size() == tried_before) break;
  }
  return history;
}

HistoryCheck check_history(const AppSpec& app, const ExplorationHistory& history) {
  HistoryCheck check;
  auto fail = [&](std::size_t ep, std::size_t step, const std::string& what) {
    check.ok = false;
    check.problems.push_back("episode " + std::to_string(ep) + " step " +
                             std::to_string(step + 1) + ": " + what);
  };

  if (history.app_id != app.app_id) {
    check.ok = false;
    check.problems.push_back("history app_id '" + history.app_id +
                             "' does not match app '" + app.app_id + "'");
    return check;
  }

  const std::string start_html = render_html(app, app.start_page).canonical_text;

  for (std::size_t ep = 0; ep < history.episodes.size(); ++ep) {
    const auto& steps = history.episodes[ep].steps;
    if (steps.empty()) {
      fail(ep, 0, "episode is empty");
      continue;
    }
    if (steps.front().html_before.canonical_text != start_html)
      fail(ep, 0, "episode does not start at the app's start page");

    for (std::size_t t = 0; t < steps.size(); ++t) {
      const auto& step = steps[t];
      PageRef before;
      try {
        step.action.check();
        before = parse_canonical_html(step.html_before.canonical_text).page_id;
        const PageRef landed = apply_action(app, before, step.action);
        const HtmlDoc expect = render_html(app, landed);
        if (step.html_after.canonical_text != expect.canonical_text)
          fail(ep, t, "html_after does not match the simulator result");
        if (render_html(app, before).canonical_text != step.html_before.canonical_text)
          fail(ep, t, "html_before does not match the simulator rendering");
      } catch (const Error& e) {
        fail(ep, t, e.what());
        continue;
      }
      if (t + 1 < steps.size() &&
          step.html_after.canonical_text != steps[t + 1].html_before.canonical_text)
        fail(ep, t, "html_after does not chain into the next step");
    }

    const auto& last = steps.back();
    if (last.action.type != ActionType::kStop || last.action.element_id != 0)
      fail(ep, steps.size() - 1, "terminal step must be stop with element 0");
  }
  return check;
}

namespace {

json action_to_json(const Action& action) {
  json j;
  j["type"] = to_string(action.type);
  j["element"] = action.element_id;
  if (action.text_payload) j["text"] = *action.text_payload;
  return j;
}

Action action_from_json(const json& j) {
  Action action;
  action.type = action_type_from_string(j.at("type").get<std::string>());
  action.element_id = j.at("element").get<int>();
  if (j.contains("text")) action.text_payload = j.at("text").get<std::string>();
  action.check();
  return action;
}

}  // namespace

std::string serialize_history(const ExplorationHistory& history) {
  json doc;
  doc["app_id"] = history.app_id;
  doc["episodes"] = json::array();
  for (const auto& episode : history.episodes) {
    json je = json::array();
    for (const auto& step : episode.steps) {
      json js;
      js["html_before"] = step.html_before.canonical_text;
      js["action"] = action_to_json(step.action);
      js["html_after"] = step.html_after.canonical_text;
      je.push_back(std::move(js));
    }
    doc["episodes"].push_back(std::move(je));
  }
  return doc.dump(2) + "\n";
}

ExplorationHistory deserialize_history(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("history: ") + e.what());
  }
  ExplorationHistory history;
  try {
    history.app_id = doc.at("app_id").get<std::string>();
    for (const auto& je : doc.at("episodes")) {
      Episode episode;
      for (const auto& js : je) {
        ExplorationStep step;
        step.html_before.canonical_text = js.at("html_before").get<std::string>();
        step.action = action_from_json(js.at("action"));
        step.html_after.canonical_text = js.at("html_after").get<std::string>();
        step.html_before.source_page =
            parse_canonical_html(step.html_before.canonical_text).page_id;
        step.html_after.source_page =
            parse_canonical_html(step.html_after.canonical_text).page_id;
        episode.steps.push_back(std::move(step));
      }
      history.episodes.push_back(std::move(episode));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("history: ") + e.what());
  }
  return history;
}

}  // namespace graphpilot
