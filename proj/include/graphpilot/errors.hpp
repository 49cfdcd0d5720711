#pragma once

#include <stdexcept>
#include <string>

namespace graphpilot {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input document (JSON syntax, missing fields, bad shapes).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

// Structurally valid app-spec document that violates a semantic rule.
// `path` points at the offending field, e.g. "pages[2].elements[0].target_page".
class SpecError : public Error {
 public:
  SpecError(const std::string& path, const std::string& what)
      : Error("spec error at " + path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class UnknownPage : public Error {
 public:
  explicit UnknownPage(const std::string& page)
      : Error("unknown page: " + page) {}
};

class UnknownElement : public Error {
 public:
  UnknownElement(const std::string& page, int element_id)
      : Error("unknown element " + std::to_string(element_id) + " on page " + page) {}
};

class ActionKindMismatch : public Error {
 public:
  explicit ActionKindMismatch(const std::string& what)
      : Error("action kind mismatch: " + what) {}
};

// Page id not of the canonical "p<n>" form.
class BadPageRef : public Error {
 public:
  explicit BadPageRef(const std::string& page)
      : Error("bad page ref: '" + page + "' (expected p<n>)") {}
};

class HistoryError : public Error {
 public:
  explicit HistoryError(const std::string& what) : Error("history error: " + what) {}
};

class AnnotatorError : public Error {
 public:
  explicit AnnotatorError(const std::string& what) : Error("annotator error: " + what) {}
};

class AppMismatch : public Error {
 public:
  AppMismatch(const std::string& a, const std::string& b)
      : Error("app mismatch: '" + a + "' vs '" + b + "'") {}
};

// Generator response text that does not match the response grammar.
class ResponseParseError : public Error {
 public:
  ResponseParseError(int line, const std::string& reason)
      : Error("response parse error at line " + std::to_string(line) + ": " + reason),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Base for failures raised by sequence generator backends.
class GeneratorError : public Error {
 public:
  explicit GeneratorError(const std::string& what) : Error(what) {}
};

class Unreachable : public GeneratorError {
 public:
  explicit Unreachable(const std::string& what)
      : GeneratorError("unreachable: " + what) {}
};

class ScriptExhausted : public GeneratorError {
 public:
  ScriptExhausted() : GeneratorError("scripted generator: script exhausted") {}
};

class TransportError : public GeneratorError {
 public:
  explicit TransportError(const std::string& what)
      : GeneratorError("transport error: " + what) {}
};

class AuthError : public GeneratorError {
 public:
  explicit AuthError(const std::string& what)
      : GeneratorError("auth error: " + what) {}
};

// A validated sequence did not replay on the simulator as declared.
class ExecutionDivergence : public Error {
 public:
  explicit ExecutionDivergence(const std::string& what)
      : Error("execution divergence: " + what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config error: " + what) {}
};

}  // namespace graphpilot
