#include "mlang/block.hpp"

#include <algorithm>

namespace llmrepl::mlang {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  lines.push_back(current);
  return lines;
}

bool is_blank_line(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

int indent_width(const std::string& line) {
  int w = 0;
  for (char c : line) {
    if (c == ' ') ++w;
    else if (c == '\t') w = (w / 8 + 1) * 8;
    else break;
  }
  return w;
}

void BlockScan::feed_line(const std::string& line) {
  if (broken) return;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (in_triple) {
      if (c == triple_quote &&
          line.compare(i, 3, std::string(3, triple_quote)) == 0) {
        in_triple = false;
        last_code_char = triple_quote;
        i += 3;
        continue;
      }
      if (c == '\\') ++i;
      ++i;
      continue;
    }
    if (c == '#') return;  // comment to end of line
    if (c == '\'' || c == '"') {
      if (line.compare(i, 3, std::string(3, c)) == 0) {
        in_triple = true;
        triple_quote = c;
        i += 3;
        continue;
      }
      ++i;
      while (i < line.size() && line[i] != c) {
        if (line[i] == '\\') ++i;
        ++i;
      }
      if (i >= line.size()) {
        broken = true;  // unterminated single-line string
        return;
      }
      ++i;  // closing quote
      last_code_char = c;
      continue;
    }
    if (c == '(' || c == '[' || c == '{') ++bracket_depth;
    if (c == ')' || c == ']' || c == '}')
      bracket_depth = std::max(0, bracket_depth - 1);
    if (c != ' ' && c != '\t') last_code_char = c;
    ++i;
  }
}

bool is_compound_header(const std::string& text) {
  BlockScan scan;
  for (const std::string& line : split_lines(text)) {
    scan.feed_line(line);
    if (!scan.continuing()) break;  // first logical line ended
  }
  return !scan.broken && !scan.continuing() && scan.last_code_char == ':';
}

bool is_block_complete(const std::string& partial_text) {
  std::vector<std::string> lines = split_lines(partial_text);
  std::size_t first = 0;
  while (first < lines.size() && is_blank_line(lines[first])) ++first;
  if (first == lines.size()) return false;

  BlockScan scan;
  std::size_t i = first;
  scan.feed_line(lines[i]);
  while (scan.continuing()) {
    ++i;
    if (i >= lines.size()) return false;  // open bracket / triple string
    scan.feed_line(lines[i]);
  }
  if (scan.broken) return true;  // a parse error, but a finalized block
  bool compound = scan.last_code_char == ':';
  if (!compound) return true;

  int header_indent = indent_width(lines[first]);
  bool saw_body = false;
  ++i;
  for (; i < lines.size(); ++i) {
    if (scan.continuing()) {
      scan.feed_line(lines[i]);
      continue;
    }
    if (is_blank_line(lines[i])) {
      if (saw_body) return true;  // a blank line closes the body
      continue;
    }
    if (indent_width(lines[i]) <= header_indent) return saw_body;
    scan.feed_line(lines[i]);
    saw_body = true;
  }
  return false;  // body still open at end of text
}

std::string render_echo(const std::string& block_text) {
  std::string text = block_text;
  while (!text.empty() && (text.back() == '\n' || text.back() == ' '))
    text.pop_back();
  std::vector<std::string> lines = split_lines(text);
  std::string out = ">>> " + lines[0];
  for (std::size_t i = 1; i < lines.size(); ++i) out += "\n... " + lines[i];
  if (lines.size() > 1 && is_compound_header(text)) out += "\n...";
  return out;
}

std::string strip_decoration(const std::string& line) {
  if (line.rfind(">>> ", 0) == 0) return line.substr(4);
  if (line.rfind("... ", 0) == 0) return line.substr(4);
  if (line == ">>>" || line == "...") return "";
  return line;
}

std::string dedent_common(const std::string& text) {
  std::vector<std::string> lines = split_lines(text);
  std::size_t common = std::string::npos;
  for (const std::string& line : lines) {
    if (is_blank_line(line)) continue;
    common = std::min(common, line.find_first_not_of(" \t"));
  }
  if (common == std::string::npos || common == 0) return text;
  std::string prefix;
  bool first_set = false;
  for (const std::string& line : lines) {
    if (is_blank_line(line)) continue;
    std::string p = line.substr(0, common);
    if (!first_set) {
      prefix = p;
      first_set = true;
    } else if (p != prefix) {
      return text;
    }
  }
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += is_blank_line(lines[i]) ? lines[i] : lines[i].substr(common);
  }
  return out;
}

}  // namespace llmrepl::mlang
