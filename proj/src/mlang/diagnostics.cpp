#include "mlang/diagnostics.hpp"

#include <sstream>

namespace llmrepl::mlang {

std::string repr_quote(const std::string& text) {
  bool has_single = text.find('\'') != std::string::npos;
  bool has_double = text.find('"') != std::string::npos;
  char quote = (has_single && !has_double) ? '"' : '\'';
  std::string out;
  out.push_back(quote);
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c == quote) {
          out.push_back('\\');
          out.push_back(c);
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back(quote);
  return out;
}

std::string SyntaxDiagnostic::message() const {
  std::ostringstream os;
  os << "SyntaxError(" << repr_quote(reason) << ", ('<unknown>', " << span.line
     << ", " << span.col << ", " << repr_quote(line_text + "\n") << ", "
     << end_line << ", " << end_col << "))";
  return os.str();
}

}  // namespace llmrepl::mlang
