#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mlang/diagnostics.hpp"
#include "mlang/token.hpp"

namespace llmrepl::mlang {

using TokenizeResult = std::variant<std::vector<Token>, SyntaxDiagnostic>;

// Turns one block of source into a token stream. Never throws: every
// malformed input comes back as a SyntaxDiagnostic. Newlines inside
// brackets are joined; indentation produces Indent/Dedent tokens with
// tabs expanded to the next multiple of 8.
TokenizeResult tokenize(const std::string& text);

}  // namespace llmrepl::mlang
