#include "gateway/extract.hpp"

#include "mlang/block.hpp"

namespace llmrepl::gateway {

namespace {

using namespace llmrepl::mlang;

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  return out;
}

ExtractResult accumulate(std::vector<std::string> acc,
                         const std::vector<std::string>& raw_lines) {
  BlockScan scan;
  bool compound = false;
  bool saw_body = false;
  int header_indent = 0;
  for (const std::string& line : acc) scan.feed_line(line);
  if (!acc.empty()) {
    header_indent = indent_width(acc.front());
    if (!scan.continuing())
      compound = !scan.broken && scan.last_code_char == ':';
    saw_body = acc.size() > 1 && compound;
  }

  ExtractResult result;
  for (const std::string& raw : raw_lines) {
    bool decorated_prompt = raw.rfind(">>> ", 0) == 0 || raw == ">>>";
    std::string line = strip_decoration(raw);
    if (acc.empty()) {
      if (is_blank_line(line)) continue;
      if (line.rfind("```", 0) == 0) continue;  // markdown fences
      acc.push_back(line);
      scan.feed_line(line);
      header_indent = indent_width(line);
      if (scan.continuing()) continue;
      if (scan.broken || scan.last_code_char != ':') {
        // one finalized simple statement; trailing text is discarded
        result.text = join(acc);
        result.complete = true;
        result.empty = false;
        return result;
      }
      compound = true;
      continue;
    }
    if (scan.continuing()) {  // open bracket / triple string
      if (decorated_prompt) break;
      acc.push_back(line);
      scan.feed_line(line);
      if (!scan.continuing() && !compound) {
        if (scan.broken || scan.last_code_char != ':') {
          result.text = join(acc);
          result.complete = true;
          result.empty = false;
          return result;
        }
        compound = true;
      }
      continue;
    }
    // a compound body in progress
    if (is_blank_line(line)) {
      if (saw_body) break;  // blank closes the body
      continue;
    }
    if (decorated_prompt) break;  // next prompt line closes the block
    if (indent_width(line) <= header_indent) break;  // dedent closes it
    acc.push_back(line);
    scan.feed_line(line);
    saw_body = true;
  }
  result.text = join(acc);
  result.empty = acc.empty();
  if (result.empty) return result;
  // at end of completion: a compound with at least one body line closes
  result.complete = compound ? saw_body && !scan.continuing()
                             : !scan.continuing();
  return result;
}

}  // namespace

ExtractResult extract_block(const std::string& completion) {
  return accumulate({}, mlang::split_lines(completion));
}

ExtractResult extend_block(const std::string& partial,
                           const std::string& continuation) {
  return accumulate(mlang::split_lines(partial),
                    mlang::split_lines(continuation));
}

}  // namespace llmrepl::gateway
