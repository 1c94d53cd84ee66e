#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace llmrepl::mlang {

// Half-open byte range into the block text, plus the 1-based line/column of
// its first byte. Columns are counted in expanded (tab = 8) positions.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 1;
  int col = 1;
};

enum class Tok {
  Name,
  Int,
  Float,
  Str,
  Comment,
  Newline,
  Indent,
  Dedent,
  End,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Colon,
  Dot,
  Assign,
  PlusAssign,
  MinusAssign,
  Plus,
  Minus,
  Star,
  Slash,
  Lt,
  Gt,
  Le,
  Ge,
  Eq,
  Ne,
  KwFor,
  KwIn,
  KwIf,
  KwElif,
  KwElse,
  KwWhile,
  KwAnd,
  KwOr,
  KwNot,
  KwTrue,
  KwFalse,
  KwNone,
  KwBreak,
  KwContinue,
};

struct Token {
  Tok kind = Tok::End;
  Span span;
  std::string text;       // raw source slice
  std::string str_value;  // decoded value for Str; comment text for Comment
  bool is_fstring = false;
  long long int_value = 0;
  double float_value = 0.0;
};

const char* tok_name(Tok t);

}  // namespace llmrepl::mlang
