#pragma once

#include <string>

#include "graphpilot/generator.hpp"
#include "graphpilot/kg.hpp"

namespace graphpilot {

// Chat-completions-style endpoint configuration. The API key is read from
// the environment at call time (kApiKeyEnv), never stored in files.
struct HttpConfig {
  std::string endpoint_url;  // e.g. http://127.0.0.1:8080/v1/chat/completions
  std::string model = "gpt-4o";
  int timeout_ms = 30000;
  int max_retries = 3;
  int backoff_ms = 250;  // doubles per retry
};

inline constexpr const char* kApiKeyEnv = "GRAPHPILOT_API_KEY";

// Sends one user message and returns the first choice's message content.
// Retries transport-level failures (connect errors, timeouts, 5xx) with
// exponential backoff; 401/403 raise AuthError, other 4xx TransportError.
// A body that is not a chat completion raises ResponseParseError.
std::string chat_complete(const HttpConfig& config, const std::string& user_content);

// The LLM seat over HTTP. One generate() call is one metered query, timed
// across the whole retry sequence.
class HttpGenerator : public SequenceGenerator {
 public:
  explicit HttpGenerator(HttpConfig config) : config_(std::move(config)) {}

 protected:
  GeneratorResponse run(const PromptText& prompt) override;

 private:
  HttpConfig config_;
};

// LLM-backed page/element descriptions for the offline build. Responses are
// used verbatim (trimmed); determinism is documented-best-effort.
class HttpAnnotator : public Annotator {
 public:
  explicit HttpAnnotator(HttpConfig config) : config_(std::move(config)) {}

  std::string describe_page(const HtmlDoc* prev_html, const Action* prev_action,
                            const HtmlDoc& curr_html, const Action& curr_action,
                            const HtmlDoc& next_html) override;
  std::string describe_element(const HtmlDoc& curr_html, const Action& curr_action,
                               const HtmlDoc& next_html) override;

 private:
  HttpConfig config_;
};

}  // namespace graphpilot
