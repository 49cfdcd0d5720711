#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace graphpilot {

// Pages are referred to by their id string. Canonical ids have the form
// "p<n>"; the helpers below parse and format that shape.
using PageRef = std::string;

enum class ElementKind { kButton, kInput, kCheckbox };

enum class ActionType { kClick, kText, kStop };

const char* to_string(ElementKind kind);
const char* to_string(ActionType type);
ElementKind element_kind_from_string(const std::string& s);
ActionType action_type_from_string(const std::string& s);

// An interactive element on a page. Inputs accept text, buttons and
// checkboxes accept click. target_page may equal the owning page (self-loop).
struct ElementSpec {
  int element_id = 0;  // positive; 0 is reserved for "no element"
  ElementKind kind = ElementKind::kButton;
  std::string label;
  PageRef target_page;

  ActionType accepted_action() const {
    return kind == ElementKind::kInput ? ActionType::kText : ActionType::kClick;
  }
};

struct PageSpec {
  PageRef page_id;
  std::string title;
  std::vector<ElementSpec> elements;  // kept sorted by element_id

  const ElementSpec* find_element(int element_id) const;
};

// A deterministic page/element state machine: every element always leads to
// the same page. Immutable after load_app_spec.
struct AppSpec {
  std::string app_id;
  PageRef start_page;
  std::vector<PageSpec> pages;

  const PageSpec* find_page(const PageRef& page) const;
  const PageSpec& page_or_throw(const PageRef& page) const;
  std::size_t element_count() const;
};

// One action in the {click, text, stop} space. element_id 0 means no element
// and is only legal for stop.
struct Action {
  ActionType type = ActionType::kStop;
  int element_id = 0;
  std::optional<std::string> text_payload;

  static Action click(int element_id);
  static Action text(int element_id, std::string payload);
  static Action stop();

  // Throws ActionKindMismatch if the field combination is not one of the
  // three legal shapes.
  void check() const;

  bool operator==(const Action& other) const = default;
};

// Canonical rendering of one page. canonical_text is bit-exact: rendering the
// same page of the same app twice yields identical bytes.
struct HtmlDoc {
  std::string canonical_text;
  PageRef source_page;

  bool operator==(const HtmlDoc& other) const = default;
};

// Assigns stable "p<n>" ids to interface renderings, keyed by a digest of the
// canonical bytes, in first-seen order starting at 0. Not thread-safe; give
// each session its own registry or serialize calls externally.
class PageRegistry {
 public:
  PageRef assign(const HtmlDoc& html);
  std::size_t size() const { return by_digest_.size(); }

 private:
  struct Entry {
    std::string canonical_text;  // retained to detect digest collisions
    PageRef id;
  };
  std::map<std::uint64_t, Entry> by_digest_;
  int next_index_ = 0;
};

// Parsed form of a canonical rendering, used by annotators and test backends.
struct CanonicalPage {
  PageRef page_id;
  std::string title;
  struct Element {
    int element_id = 0;
    bool is_input = false;
    std::string label;  // button text or input hint
  };
  std::vector<Element> elements;
};

// --- operations ------------------------------------------------------------

// Parses and validates an app-spec JSON document (see README for the shape).
// Throws ParseError on malformed JSON, SpecError on semantic violations.
AppSpec load_app_spec(const std::string& text);
std::string serialize_app_spec(const AppSpec& app);

// Canonical rendering: `<div page="<id>" title="<title>">` then each element
// in ascending id order (button/checkbox -> <button>, input -> <input>), no
// whitespace between tags. Throws UnknownPage.
HtmlDoc render_html(const AppSpec& app, const PageRef& page);

// Executes one action: stop returns the page unchanged; click/text on an
// element returns that element's target page. Deterministic. Throws
// UnknownPage, UnknownElement, ActionKindMismatch.
PageRef apply_action(const AppSpec& app, const PageRef& page, const Action& action);

// PageID: returns the registry id for this rendering, assigning the next
// "p<n>" on first sight. Idempotent per digest.
PageRef page_id(PageRegistry& registry, const HtmlDoc& html);

// Parses our own canonical template back into structure. Strict; throws
// ParseError on any deviation from the template.
CanonicalPage parse_canonical_html(const std::string& canonical_text);

// "p<n>" -> n. Throws BadPageRef for anything else.
int page_index(const PageRef& page);
bool is_canonical_page_ref(const PageRef& page);
PageRef make_page_ref(int index);

std::uint64_t fnv1a_digest(const std::string& bytes);

}  // namespace graphpilot
