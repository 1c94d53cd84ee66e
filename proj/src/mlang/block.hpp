#pragma once

#include <string>
#include <vector>

namespace llmrepl::mlang {

// One REPL input block: a single simple statement, or one compound
// statement with its continuation lines.
struct SourceBlock {
  enum class Origin { Llm, Demo, Test };
  std::string text;
  Origin origin = Origin::Llm;
  int line_offset = 0;
};

// Incremental scan state across the physical lines of a block. Tracks
// bracket depth and string literals; a single-quoted string left open at
// end of line marks the scan broken (that is a parse error, not a
// continuation).
struct BlockScan {
  int bracket_depth = 0;
  bool in_triple = false;
  char triple_quote = '\0';
  bool broken = false;
  char last_code_char = '\0';

  void feed_line(const std::string& line);
  // True while the logical line is still open (brackets or triple string).
  bool continuing() const { return !broken && (in_triple || bracket_depth > 0); }
};

std::vector<std::string> split_lines(const std::string& text);
bool is_blank_line(const std::string& line);
int indent_width(const std::string& line);  // tabs advance to multiples of 8

// True iff the partial text can be finalized as one block: a simple
// statement line (brackets balanced, not a compound header), or a compound
// header whose continuation has been closed by a blank or dedented line.
bool is_block_complete(const std::string& partial_text);

// True when the first logical line is a compound header (ends with ':'
// outside strings/brackets, ignoring a trailing comment).
bool is_compound_header(const std::string& text);

// Renders the transcript echo of a block: ">>> " on the first line,
// "... " on continuations, and a lone "..." terminator after a compound
// body, exactly as history transcripts show them.
std::string render_echo(const std::string& block_text);

// Removes one level of ">>> " / "... " transcript decoration from a line.
// Bare ">>>" / "..." markers become empty lines.
std::string strip_decoration(const std::string& line);

// Strips the longest common leading whitespace shared by all non-blank
// lines, so uniformly indented blocks parse cleanly.
std::string dedent_common(const std::string& text);

}  // namespace llmrepl::mlang
