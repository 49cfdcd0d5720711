#include "graphpilot/sequence.hpp"

#include <sstream>

#include "graphpilot/errors.hpp"
#include "json.hpp"

namespace graphpilot {

using nlohmann::json;

std::string serialize_draft_steps(const ActionSequence& sequence) {
  std::ostringstream out;
  for (std::size_t t = 0; t < sequence.steps.size(); ++t) {
    const SequenceStep& step = sequence.steps[t];
    out << "STEP " << (t + 1) << ": page=" << step.page
        << " action=" << to_string(step.action.type) << " element=";
    if (step.action.element_id == 0) {
      out << "0";
    } else {
      out << "e_" << page_index(step.page) << "_" << step.action.element_id;
    }
    if (step.action.text_payload) out << " text=\"" << *step.action.text_payload << "\"";
    out << " next=" << step.next_page << "\n";
  }
  return out.str();
}

std::string serialize_sequence(const ActionSequence& sequence) {
  json doc;
  doc["steps"] = json::array();
  for (const auto& step : sequence.steps) {
    json js;
    js["page"] = step.page;
    js["action"] = to_string(step.action.type);
    js["element"] = step.action.element_id;
    if (step.action.text_payload) js["text"] = *step.action.text_payload;
    js["next"] = step.next_page;
    doc["steps"].push_back(std::move(js));
  }
  return doc.dump(2) + "\n";
}

ActionSequence deserialize_sequence(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("sequence: ") + e.what());
  }
  ActionSequence sequence;
  try {
    for (const auto& js : doc.at("steps")) {
      SequenceStep step;
      step.page = js.at("page").get<std::string>();
      step.action.type = action_type_from_string(js.at("action").get<std::string>());
      step.action.element_id = js.at("element").get<int>();
      if (js.contains("text")) step.action.text_payload = js.at("text").get<std::string>();
      step.next_page = js.at("next").get<std::string>();
      sequence.steps.push_back(std::move(step));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("sequence: ") + e.what());
  }
  return sequence;
}

}  // namespace graphpilot
