#ifndef CMDKIT_DSL_HPP
#define CMDKIT_DSL_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "cmdkit/model.hpp"

namespace cmdkit {

struct SourceSpan {
  std::string file;
  int line = 1;    // 1-based
  int column = 1;  // 1-based
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, std::string expected, std::string found)
      : std::runtime_error(span.file + ":" + std::to_string(span.line) + ":" +
                           std::to_string(span.column) + ": expected " +
                           expected + ", found " + found),
        span_(std::move(span)),
        expected_(std::move(expected)) {}

  const SourceSpan& span() const { return span_; }
  const std::string& expected() const { return expected_; }

 private:
  SourceSpan span_;
  std::string expected_;
};

// Parses the model DSL. Call-site ordinals are assigned in source order per
// method. Resolution problems are reported by validate(), not here.
ProgramModel parse_model(const std::string& text,
                         const std::string& file_name = "<input>");

// Canonical form: classes and members in model order, one statement per
// line, LF line endings. parse_model(serialize_model(m)) is structurally
// equal to m.
std::string serialize_model(const ProgramModel& model);

}  // namespace cmdkit

#endif
