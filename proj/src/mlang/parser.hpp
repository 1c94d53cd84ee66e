#pragma once

#include <string>
#include <variant>

#include "mlang/ast.hpp"
#include "mlang/diagnostics.hpp"

namespace llmrepl::mlang {

using ParseResult = std::variant<StmtPtr, SyntaxDiagnostic>;

// Parses one block of source into exactly one top-level statement.
// Grammar violations (including more than one statement) come back as a
// SyntaxDiagnostic; this function never throws on bad input.
ParseResult parse_block(const std::string& text);

// Parses a single expression (used by tests and tooling).
std::variant<ExprPtr, SyntaxDiagnostic> parse_expression(const std::string& text);

}  // namespace llmrepl::mlang
