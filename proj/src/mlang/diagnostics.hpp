#pragma once

#include <string>

#include "mlang/token.hpp"

namespace llmrepl::mlang {

// Parse/lex failure, rendered the way the interpreter's history shows it:
//   SyntaxError('unterminated string literal (detected at line 1)',
//               ('<unknown>', 1, 105, '<offending line>\n', 1, 105))
struct SyntaxDiagnostic {
  std::string reason;  // bare reason text, e.g. "invalid syntax"
  Span span;
  std::string line_text;  // the offending source line, without newline
  int end_line = 1;
  int end_col = 1;

  // Full tuple-style rendering (the `message` field of the spec).
  std::string message() const;
};

// Python-repr style quoting for a text value: single quotes preferred,
// double quotes when the text contains ' but no ".
std::string repr_quote(const std::string& text);

}  // namespace llmrepl::mlang
