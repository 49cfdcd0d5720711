#include "graphpilot/app_model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "graphpilot/errors.hpp"
#include "json.hpp"

namespace graphpilot {

using nlohmann::json;

const char* to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::kButton: return "button";
    case ElementKind::kInput: return "input";
    case ElementKind::kCheckbox: return "checkbox";
  }
  return "?";
}

const char* to_string(ActionType type) {
  switch (type) {
    case ActionType::kClick: return "click";
    case ActionType::kText: return "text";
    case ActionType::kStop: return "stop";
  }
  return "?";
}

ElementKind element_kind_from_string(const std::string& s) {
  if (s == "button") return ElementKind::kButton;
  if (s == "input") return ElementKind::kInput;
  if (s == "checkbox") return ElementKind::kCheckbox;
  throw ParseError("unknown element kind '" + s + "'");
}

ActionType action_type_from_string(const std::string& s) {
  if (s == "click") return ActionType::kClick;
  if (s == "text") return ActionType::kText;
  if (s == "stop") return ActionType::kStop;
  throw ParseError("unknown action type '" + s + "'");
}

const ElementSpec* PageSpec::find_element(int element_id) const {
  for (const auto& e : elements) {
    if (e.element_id == element_id) return &e;
  }
  return nullptr;
}

const PageSpec* AppSpec::find_page(const PageRef& page) const {
  for (const auto& p : pages) {
    if (p.page_id == page) return &p;
  }
  return nullptr;
}

const PageSpec& AppSpec::page_or_throw(const PageRef& page) const {
  const PageSpec* p = find_page(page);
  if (p == nullptr) throw UnknownPage(page);
  return *p;
}

std::size_t AppSpec::element_count() const {
  std::size_t n = 0;
  for (const auto& p : pages) n += p.elements.size();
  return n;
}

Action Action::click(int element_id) {
  Action a;
  a.type = ActionType::kClick;
  a.element_id = element_id;
  a.check();
  return a;
}

Action Action::text(int element_id, std::string payload) {
  Action a;
  a.type = ActionType::kText;
  a.element_id = element_id;
  a.text_payload = std::move(payload);
  a.check();
  return a;
}

Action Action::stop() { return Action{}; }

void Action::check() const {
  switch (type) {
    case ActionType::kStop:
      if (element_id != 0 || text_payload.has_value())
        throw ActionKindMismatch("stop requires element 0 and no payload");
      break;
    case ActionType::kClick:
      if (element_id <= 0 || text_payload.has_value())
        throw ActionKindMismatch("click requires element > 0 and no payload");
      break;
    case ActionType::kText:
      if (element_id <= 0 || !text_payload.has_value())
        throw ActionKindMismatch("text requires element > 0 and a payload");
      break;
  }
}

std::uint64_t fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

// Titles and labels are embedded verbatim in the canonical template, so
// characters that would break its structure are rejected at load time.
void check_embeddable(const std::string& s, const std::string& path) {
  if (s.find_first_of("\"<>") != std::string::npos)
    throw SpecError(path, "text may not contain '\"', '<' or '>'");
}

void validate_app(const AppSpec& app) {
  if (app.app_id.empty()) throw SpecError("app_id", "must be non-empty");
  if (app.pages.empty()) throw SpecError("pages", "must be non-empty");

  std::set<PageRef> ids;
  for (std::size_t i = 0; i < app.pages.size(); ++i) {
    const auto& page = app.pages[i];
    const std::string ppath = "pages[" + std::to_string(i) + "]";
    if (page.page_id.empty()) throw SpecError(ppath + ".page_id", "must be non-empty");
    if (!ids.insert(page.page_id).second)
      throw SpecError(ppath + ".page_id", "duplicate page id '" + page.page_id + "'");
    check_embeddable(page.title, ppath + ".title");

    std::set<int> eids;
    for (std::size_t k = 0; k < page.elements.size(); ++k) {
      const auto& elem = page.elements[k];
      const std::string epath = ppath + ".elements[" + std::to_string(k) + "]";
      if (elem.element_id <= 0)
        throw SpecError(epath + ".element_id", "must be a positive integer");
      if (!eids.insert(elem.element_id).second)
        throw SpecError(epath + ".element_id",
                        "duplicate element id " + std::to_string(elem.element_id));
      check_embeddable(elem.label, epath + ".label");
    }
  }

  if (ids.find(app.start_page) == ids.end())
    throw SpecError("start_page", "page '" + app.start_page + "' not in pages");

  for (std::size_t i = 0; i < app.pages.size(); ++i) {
    const auto& page = app.pages[i];
    for (std::size_t k = 0; k < page.elements.size(); ++k) {
      const auto& elem = page.elements[k];
      if (ids.find(elem.target_page) == ids.end())
        throw SpecError("pages[" + std::to_string(i) + "].elements[" +
                            std::to_string(k) + "].target_page",
                        "page '" + elem.target_page + "' not in pages");
    }
  }

  // Distinct pages must render distinctly, otherwise PageID would alias them.
  std::set<std::string> renderings;
  for (std::size_t i = 0; i < app.pages.size(); ++i) {
    if (!renderings.insert(render_html(app, app.pages[i].page_id).canonical_text).second)
      throw SpecError("pages[" + std::to_string(i) + "]",
                      "renders identically to another page");
  }
}

}  // namespace

AppSpec load_app_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("app spec: ") + e.what());
  }

  AppSpec app;
  try {
    app.app_id = doc.at("app_id").get<std::string>();
    app.start_page = doc.at("start_page").get<std::string>();
    for (const auto& jp : doc.at("pages")) {
      PageSpec page;
      page.page_id = jp.at("page_id").get<std::string>();
      page.title = jp.at("title").get<std::string>();
      if (jp.contains("elements")) {
        for (const auto& je : jp.at("elements")) {
          ElementSpec elem;
          elem.element_id = je.at("element_id").get<int>();
          elem.kind = element_kind_from_string(je.at("kind").get<std::string>());
          elem.label = je.at("label").get<std::string>();
          elem.target_page = je.at("target_page").get<std::string>();
          page.elements.push_back(std::move(elem));
        }
      }
      std::sort(page.elements.begin(), page.elements.end(),
                [](const ElementSpec& a, const ElementSpec& b) {
                  return a.element_id < b.element_id;
                });
      app.pages.push_back(std::move(page));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("app spec: ") + e.what());
  }

  validate_app(app);
  return app;
}

std::string serialize_app_spec(const AppSpec& app) {
  json doc;
  doc["app_id"] = app.app_id;
  doc["start_page"] = app.start_page;
  doc["pages"] = json::array();
  for (const auto& page : app.pages) {
    json jp;
    jp["page_id"] = page.page_id;
    jp["title"] = page.title;
    jp["elements"] = json::array();
    for (const auto& elem : page.elements) {
      json je;
      je["element_id"] = elem.element_id;
      je["kind"] = to_string(elem.kind);
      je["label"] = elem.label;
      je["target_page"] = elem.target_page;
      jp["elements"].push_back(std::move(je));
    }
    doc["pages"].push_back(std::move(jp));
  }
  return doc.dump(2) + "\n";
}

HtmlDoc render_html(const AppSpec& app, const PageRef& page) {
  const PageSpec& spec = app.page_or_throw(page);
  std::string out = "<div page=\"" + spec.page_id + "\" title=\"" + spec.title + "\">";
  for (const auto& elem : spec.elements) {
    if (elem.kind == ElementKind::kInput) {
      out += "<input id=\"" + std::to_string(elem.element_id) + "\" hint=\"" +
             elem.label + "\"></input>";
    } else {
      out += "<button id=\"" + std::to_string(elem.element_id) + "\">" +
             elem.label + "</button>";
    }
  }
  out += "</div>";
  return HtmlDoc{std::move(out), spec.page_id};
}

PageRef apply_action(const AppSpec& app, const PageRef& page, const Action& action) {
  action.check();
  const PageSpec& spec = app.page_or_throw(page);
  if (action.type == ActionType::kStop) return spec.page_id;

  const ElementSpec* elem = spec.find_element(action.element_id);
  if (elem == nullptr) throw UnknownElement(page, action.element_id);
  if (elem->accepted_action() != action.type)
    throw ActionKindMismatch("element " + std::to_string(elem->element_id) + " on " +
                             page + " is a " + to_string(elem->kind) + ", got " +
                             to_string(action.type));
  return elem->target_page;
}

PageRef PageRegistry::assign(const HtmlDoc& html) {
  const std::uint64_t digest = fnv1a_digest(html.canonical_text);
  auto it = by_digest_.find(digest);
  if (it != by_digest_.end()) {
    if (it->second.canonical_text != html.canonical_text)
      throw Error("page digest collision; distinct renderings share a digest");
    return it->second.id;
  }
  PageRef id = make_page_ref(next_index_++);
  by_digest_.emplace(digest, Entry{html.canonical_text, id});
  return id;
}

PageRef page_id(PageRegistry& registry, const HtmlDoc& html) {
  return registry.assign(html);
}

namespace {

// Consumes `token` from s at pos or throws.
void expect(const std::string& s, std::size_t& pos, const std::string& token) {
  if (s.compare(pos, token.size(), token) != 0)
    throw ParseError("canonical html: expected '" + token + "' at offset " +
                     std::to_string(pos));
  pos += token.size();
}

std::string until(const std::string& s, std::size_t& pos, char delim) {
  std::size_t end = s.find(delim, pos);
  if (end == std::string::npos)
    throw ParseError("canonical html: unterminated field");
  std::string out = s.substr(pos, end - pos);
  pos = end;
  return out;
}

}  // namespace

CanonicalPage parse_canonical_html(const std::string& text) {
  CanonicalPage page;
  std::size_t pos = 0;
  expect(text, pos, "<div page=\"");
  page.page_id = until(text, pos, '"');
  expect(text, pos, "\" title=\"");
  page.title = until(text, pos, '"');
  expect(text, pos, "\">");
  while (text.compare(pos, 5, "</div") != 0) {
    CanonicalPage::Element elem;
    if (text.compare(pos, 12, "<button id=\"") == 0) {
      pos += 12;
      elem.element_id = std::stoi(until(text, pos, '"'));
      expect(text, pos, "\">");
      elem.label = until(text, pos, '<');
      expect(text, pos, "</button>");
    } else if (text.compare(pos, 11, "<input id=\"") == 0) {
      pos += 11;
      elem.element_id = std::stoi(until(text, pos, '"'));
      expect(text, pos, "\" hint=\"");
      elem.label = until(text, pos, '"');
      elem.is_input = true;
      expect(text, pos, "\"></input>");
    } else {
      throw ParseError("canonical html: unknown tag at offset " + std::to_string(pos));
    }
    page.elements.push_back(std::move(elem));
  }
  expect(text, pos, "</div>");
  if (pos != text.size()) throw ParseError("canonical html: trailing bytes");
  return page;
}

bool is_canonical_page_ref(const PageRef& page) {
  if (page.size() < 2 || page[0] != 'p') return false;
  if (page.size() > 1 && page[1] == '0' && page.size() != 2) return false;  // no p01
  for (std::size_t i = 1; i < page.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(page[i]))) return false;
  }
  return true;
}

int page_index(const PageRef& page) {
  if (!is_canonical_page_ref(page)) throw BadPageRef(page);
  return std::stoi(page.substr(1));
}

PageRef make_page_ref(int index) { return "p" + std::to_string(index); }

}  // namespace graphpilot
