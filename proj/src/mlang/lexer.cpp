#include "mlang/lexer.hpp"

#include <cctype>
#include <unordered_map>

namespace llmrepl::mlang {

namespace {

const std::unordered_map<std::string, Tok>& keyword_table() {
  static const std::unordered_map<std::string, Tok> table = {
      {"for", Tok::KwFor},       {"in", Tok::KwIn},
      {"if", Tok::KwIf},         {"elif", Tok::KwElif},
      {"else", Tok::KwElse},     {"while", Tok::KwWhile},
      {"and", Tok::KwAnd},       {"or", Tok::KwOr},
      {"not", Tok::KwNot},       {"True", Tok::KwTrue},
      {"False", Tok::KwFalse},   {"None", Tok::KwNone},
      {"break", Tok::KwBreak},   {"continue", Tok::KwContinue},
  };
  return table;
}

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;  // expanded column of src[pos]
  int bracket_depth = 0;
  std::vector<int> indent_stack{0};
  std::vector<Token> out;
  std::optional<SyntaxDiagnostic> diag;
  bool at_line_start = true;

  explicit Lexer(const std::string& s) : src(s) {}

  bool eof() const { return pos >= src.size(); }
  char cur() const { return src[pos]; }
  char peek(std::size_t n = 1) const {
    return pos + n < src.size() ? src[pos + n] : '\0';
  }

  void advance() {
    if (eof()) return;
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else if (src[pos] == '\t') {
      col = ((col - 1) / 8 + 1) * 8 + 1;
    } else {
      ++col;
    }
    ++pos;
  }

  std::string line_text_at(int want_line) const {
    int l = 1;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= src.size(); ++i) {
      if (i == src.size() || src[i] == '\n') {
        if (l == want_line) return src.substr(start, i - start);
        start = i + 1;
        ++l;
      }
    }
    return "";
  }

  void fail(const std::string& reason, Span where) {
    if (diag) return;
    SyntaxDiagnostic d;
    d.reason = reason;
    d.span = where;
    d.line_text = line_text_at(where.line);
    d.end_line = line;
    d.end_col = col;
    diag = d;
  }

  void push(Tok kind, Span span, std::string text = "") {
    Token t;
    t.kind = kind;
    t.span = span;
    t.text = std::move(text);
    out.push_back(std::move(t));
  }

  Span here() const { return Span{pos, pos, line, col}; }

  // Measures the indentation of the current line and emits Indent/Dedent.
  bool handle_indent() {
    int indent = 0;
    std::size_t scan = pos;
    int scan_col = 1;
    while (scan < src.size() && (src[scan] == ' ' || src[scan] == '\t')) {
      scan_col = src[scan] == '\t' ? ((scan_col - 1) / 8 + 1) * 8 + 1
                                   : scan_col + 1;
      ++scan;
    }
    indent = scan_col - 1;
    if (scan >= src.size() || src[scan] == '\n' || src[scan] == '#') {
      // Blank (or comment-only continuation) lines do not change indentation.
      // A comment-only line at depth participates normally below when it is
      // the very first line; interior blank lines are skipped by the caller.
      if (scan >= src.size() || src[scan] == '\n') return true;
    }
    if (indent > indent_stack.back()) {
      indent_stack.push_back(indent);
      push(Tok::Indent, here());
    } else {
      while (indent < indent_stack.back()) {
        indent_stack.pop_back();
        push(Tok::Dedent, here());
      }
      if (indent != indent_stack.back()) {
        fail("unindent does not match any outer indentation level", here());
        return false;
      }
    }
    return true;
  }

  void lex_string(bool fstring, Span start_span) {
    char quote = cur();
    bool triple = peek(1) == quote && peek(2) == quote;
    std::size_t content_begin;
    advance();
    if (triple) {
      advance();
      advance();
    }
    content_begin = pos;
    std::string value;
    while (true) {
      if (eof() || (!triple && cur() == '\n')) {
        fail("unterminated string literal (detected at line " +
                 std::to_string(start_span.line) + ")",
             start_span);
        return;
      }
      if (cur() == quote) {
        if (!triple) break;
        if (peek(1) == quote && peek(2) == quote) break;
        value.push_back(cur());
        advance();
        continue;
      }
      if (cur() == '\\' && pos + 1 < src.size()) {
        char esc = src[pos + 1];
        switch (esc) {
          case 'n': value.push_back('\n'); break;
          case 't': value.push_back('\t'); break;
          case 'r': value.push_back('\r'); break;
          case '\\': value.push_back('\\'); break;
          case '\'': value.push_back('\''); break;
          case '"': value.push_back('"'); break;
          case '\n':
            // line continuation inside a string literal
            break;
          default:
            value.push_back('\\');
            value.push_back(esc);
        }
        advance();
        advance();
        continue;
      }
      value.push_back(cur());
      advance();
    }
    std::size_t content_end = pos;
    advance();
    if (triple) {
      advance();
      advance();
    }
    Token t;
    t.kind = Tok::Str;
    t.span = Span{start_span.begin, pos, start_span.line, start_span.col};
    t.text = src.substr(start_span.begin, pos - start_span.begin);
    t.is_fstring = fstring;
    // f-string interpolation happens at parse time over the raw content,
    // so the raw (unescaped) slice is kept alongside the decoded value.
    t.str_value = fstring ? src.substr(content_begin, content_end - content_begin)
                          : value;
    out.push_back(std::move(t));
  }

  void lex_number() {
    Span start = here();
    bool is_float = false;
    while (!eof() && std::isdigit(static_cast<unsigned char>(cur()))) advance();
    if (!eof() && cur() == '.' &&
        std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_float = true;
      advance();
      while (!eof() && std::isdigit(static_cast<unsigned char>(cur()))) advance();
    } else if (!eof() && cur() == '.' && !is_name_start(peek(1)) &&
               peek(1) != '.') {
      // trailing-dot float like "70."
      is_float = true;
      advance();
    }
    if (!eof() && (cur() == 'e' || cur() == 'E')) {
      std::size_t save_pos = pos;
      int save_col = col;
      advance();
      if (!eof() && (cur() == '+' || cur() == '-')) advance();
      if (!eof() && std::isdigit(static_cast<unsigned char>(cur()))) {
        is_float = true;
        while (!eof() && std::isdigit(static_cast<unsigned char>(cur())))
          advance();
      } else {
        pos = save_pos;  // not an exponent; leave 'e' for the name lexer
        col = save_col;
      }
    }
    Token t;
    t.span = Span{start.begin, pos, start.line, start.col};
    t.text = src.substr(start.begin, pos - start.begin);
    try {
      if (is_float) {
        t.kind = Tok::Float;
        t.float_value = std::stod(t.text);
      } else {
        t.kind = Tok::Int;
        t.int_value = std::stoll(t.text);
      }
    } catch (const std::exception&) {
      fail("numeric literal out of range", start);
      return;
    }
    out.push_back(std::move(t));
  }

  void lex_line_tokens() {
    while (!eof() && cur() != '\n') {
      if (diag) return;
      char c = cur();
      if (c == ' ' || c == '\t') {
        advance();
        continue;
      }
      Span start = here();
      if (c == '#') {
        std::size_t begin = pos;
        while (!eof() && cur() != '\n') advance();
        if (bracket_depth == 0) {
          Token t;
          t.kind = Tok::Comment;
          t.span = Span{begin, pos, start.line, start.col};
          t.text = src.substr(begin, pos - begin);
          t.str_value = t.text;
          out.push_back(std::move(t));
        }
        continue;
      }
      if (is_name_start(c)) {
        if ((c == 'f' || c == 'F') && (peek(1) == '\'' || peek(1) == '"')) {
          advance();
          lex_string(true, start);
          continue;
        }
        std::size_t begin = pos;
        while (!eof() && is_name_char(cur())) advance();
        std::string word = src.substr(begin, pos - begin);
        auto it = keyword_table().find(word);
        Token t;
        t.kind = it != keyword_table().end() ? it->second : Tok::Name;
        t.span = Span{begin, pos, start.line, start.col};
        t.text = std::move(word);
        out.push_back(std::move(t));
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        if (c == '.') {
          // ".5" style float
          Span s = here();
          advance();
          while (!eof() && std::isdigit(static_cast<unsigned char>(cur())))
            advance();
          Token t;
          t.kind = Tok::Float;
          t.span = Span{s.begin, pos, s.line, s.col};
          t.text = src.substr(s.begin, pos - s.begin);
          t.float_value = std::stod("0" + t.text);
          out.push_back(std::move(t));
        } else {
          lex_number();
        }
        continue;
      }
      if (c == '\'' || c == '"') {
        lex_string(false, start);
        continue;
      }
      auto two = [&](char a, char b) {
        return cur() == a && peek(1) == b;
      };
      if (two('=', '=')) { push(Tok::Eq, start, "=="); advance(); advance(); continue; }
      if (two('!', '=')) { push(Tok::Ne, start, "!="); advance(); advance(); continue; }
      if (two('<', '=')) { push(Tok::Le, start, "<="); advance(); advance(); continue; }
      if (two('>', '=')) { push(Tok::Ge, start, ">="); advance(); advance(); continue; }
      if (two('+', '=')) { push(Tok::PlusAssign, start, "+="); advance(); advance(); continue; }
      if (two('-', '=')) { push(Tok::MinusAssign, start, "-="); advance(); advance(); continue; }
      Tok kind;
      switch (c) {
        case '(': kind = Tok::LParen; ++bracket_depth; break;
        case ')': kind = Tok::RParen; --bracket_depth; break;
        case '[': kind = Tok::LBracket; ++bracket_depth; break;
        case ']': kind = Tok::RBracket; --bracket_depth; break;
        case '{': kind = Tok::LBrace; ++bracket_depth; break;
        case '}': kind = Tok::RBrace; --bracket_depth; break;
        case ',': kind = Tok::Comma; break;
        case ':': kind = Tok::Colon; break;
        case '.': kind = Tok::Dot; break;
        case '=': kind = Tok::Assign; break;
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '/': kind = Tok::Slash; break;
        case '<': kind = Tok::Lt; break;
        case '>': kind = Tok::Gt; break;
        default:
          fail("invalid syntax", start);
          return;
      }
      if (bracket_depth < 0) {
        fail("unmatched ')'", start);
        return;
      }
      push(kind, Span{start.begin, pos + 1, start.line, start.col},
           std::string(1, c));
      advance();
    }
  }

  TokenizeResult run() {
    while (!eof() && !diag) {
      // at the start of a physical line
      std::size_t line_scan = pos;
      bool blank = true;
      while (line_scan < src.size() && src[line_scan] != '\n') {
        if (src[line_scan] != ' ' && src[line_scan] != '\t') {
          blank = false;
          break;
        }
        ++line_scan;
      }
      if (blank) {
        while (!eof() && cur() != '\n') advance();
        if (!eof()) advance();
        continue;
      }
      if (bracket_depth == 0) {
        if (!handle_indent()) break;
        lex_line_tokens();
        if (diag) break;
        if (bracket_depth == 0) push(Tok::Newline, here());
      } else {
        lex_line_tokens();
        if (diag) break;
      }
      if (!eof() && cur() == '\n') advance();
    }
    if (diag) return *diag;
    if (bracket_depth > 0) {
      fail("unexpected end of input (unclosed bracket)", here());
      return *diag;
    }
    while (indent_stack.size() > 1) {
      indent_stack.pop_back();
      push(Tok::Dedent, here());
    }
    push(Tok::End, here());
    return out;
  }
};

}  // namespace

TokenizeResult tokenize(const std::string& text) {
  Lexer lexer(text);
  return lexer.run();
}

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Name: return "name";
    case Tok::Int: return "integer";
    case Tok::Float: return "float";
    case Tok::Str: return "string";
    case Tok::Comment: return "comment";
    case Tok::Newline: return "newline";
    case Tok::Indent: return "indent";
    case Tok::Dedent: return "dedent";
    case Tok::End: return "end of input";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::Assign: return "'='";
    case Tok::PlusAssign: return "'+='";
    case Tok::MinusAssign: return "'-='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Lt: return "'<'";
    case Tok::Gt: return "'>'";
    case Tok::Le: return "'<='";
    case Tok::Ge: return "'>='";
    case Tok::Eq: return "'=='";
    case Tok::Ne: return "'!='";
    case Tok::KwFor: return "'for'";
    case Tok::KwIn: return "'in'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElif: return "'elif'";
    case Tok::KwElse: return "'else'";
    case Tok::KwWhile: return "'while'";
    case Tok::KwAnd: return "'and'";
    case Tok::KwOr: return "'or'";
    case Tok::KwNot: return "'not'";
    case Tok::KwTrue: return "'True'";
    case Tok::KwFalse: return "'False'";
    case Tok::KwNone: return "'None'";
    case Tok::KwBreak: return "'break'";
    case Tok::KwContinue: return "'continue'";
  }
  return "?";
}

}  // namespace llmrepl::mlang
