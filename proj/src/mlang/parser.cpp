#include "mlang/parser.hpp"

#include <cassert>

#include "mlang/block.hpp"
#include "mlang/lexer.hpp"

namespace llmrepl::mlang {

namespace {

struct ParseError {
  std::string reason;
  Span span;
};

[[noreturn]] void err(std::string reason, Span span) {
  throw ParseError{std::move(reason), span};
}

ExprPtr make_expr(Span span, auto node) {
  auto e = std::make_unique<Expr>();
  e->span = span;
  e->node = std::move(node);
  return e;
}

StmtPtr make_stmt(Span span, auto node) {
  auto s = std::make_unique<Stmt>();
  s->span = span;
  s->node = std::move(node);
  return s;
}

Span join(Span a, Span b) {
  Span s = a;
  s.end = b.end > a.end ? b.end : a.end;
  return s;
}

class Parser {
 public:
  Parser(const std::string& src, std::vector<Token> toks)
      : src_(src), toks_(std::move(toks)) {}

  StmtPtr parse_single_block() {
    skip_newlines();
    if (at(Tok::End)) err("empty block", cur().span);
    StmtPtr stmt = parse_statement();
    skip_newlines();
    if (!at(Tok::End))
      err("expected a single statement per block", cur().span);
    return stmt;
  }

  ExprPtr parse_full_expression() {
    skip_newlines();
    ExprPtr e = parse_testlist();
    skip_newlines();
    if (!at(Tok::End)) err("invalid syntax", cur().span);
    return e;
  }

 private:
  const std::string& src_;
  std::vector<Token> toks_;
  std::size_t p_ = 0;
  int loop_depth_ = 0;

  const Token& cur() const { return toks_[p_]; }
  const Token& peek(std::size_t n = 1) const {
    std::size_t i = p_ + n;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool accept(Tok k) {
    if (at(k)) {
      ++p_;
      return true;
    }
    return false;
  }
  Token take() { return toks_[p_++]; }
  Token expect(Tok k, const char* what) {
    if (!at(k)) err(std::string("expected ") + what, cur().span);
    return take();
  }
  void skip_newlines() {
    while (at(Tok::Newline)) ++p_;
  }

  // ---- statements ----

  StmtPtr parse_statement() {
    switch (cur().kind) {
      case Tok::KwFor: return parse_for();
      case Tok::KwWhile: return parse_while();
      case Tok::KwIf: return parse_if();
      default: return parse_simple_line();
    }
  }

  // One simple statement plus its optional trailing comment and newline.
  StmtPtr parse_simple_line() {
    Span start = cur().span;
    StmtPtr stmt;
    if (at(Tok::Comment)) {
      Token c = take();
      stmt = make_stmt(c.span, CommentStmt{c.str_value});
    } else if (at(Tok::KwBreak)) {
      Token t = take();
      if (loop_depth_ == 0) err("'break' outside loop", t.span);
      stmt = make_stmt(t.span, BreakStmt{});
    } else if (at(Tok::KwContinue)) {
      Token t = take();
      if (loop_depth_ == 0) err("'continue' not properly in loop", t.span);
      stmt = make_stmt(t.span, ContinueStmt{});
    } else {
      ExprPtr first = parse_testlist();
      if (at(Tok::Assign)) {
        take();
        Target target = to_target(std::move(first));
        ExprPtr value = parse_testlist();
        Span span = join(start, value->span);
        stmt = make_stmt(span, AssignStmt{std::move(target), std::move(value)});
      } else if (at(Tok::PlusAssign) || at(Tok::MinusAssign)) {
        BinOp op = at(Tok::PlusAssign) ? BinOp::Add : BinOp::Sub;
        Token t = take();
        Target target = to_target(std::move(first));
        if (target.kind == Target::Kind::Tuple)
          err("invalid augmented assignment target", t.span);
        ExprPtr value = parse_testlist();
        Span span = join(start, value->span);
        stmt = make_stmt(span,
                         AugAssignStmt{std::move(target), op, std::move(value)});
      } else {
        Span span = first->span;
        stmt = make_stmt(span, ExprStmt{std::move(first)});
      }
    }
    if (at(Tok::Comment)) stmt->trailing_comment = take().text;
    if (at(Tok::Newline)) take();
    return stmt;
  }

  std::vector<std::string> parse_name_pattern() {
    std::vector<std::string> names;
    names.push_back(expect(Tok::Name, "a name").text);
    while (accept(Tok::Comma))
      names.push_back(expect(Tok::Name, "a name").text);
    return names;
  }

  StmtPtr parse_for() {
    Span start = take().span;  // 'for'
    std::vector<std::string> names = parse_name_pattern();
    expect(Tok::KwIn, "'in'");
    ExprPtr iterable = parse_expr();
    expect(Tok::Colon, "':'");
    ++loop_depth_;
    std::vector<StmtPtr> body = parse_suite();
    --loop_depth_;
    Span span = body.empty() ? start : join(start, body.back()->span);
    return make_stmt(span,
                     ForStmt{std::move(names), std::move(iterable), std::move(body)});
  }

  StmtPtr parse_while() {
    Span start = take().span;  // 'while'
    if (!at(Tok::KwTrue)) err("only 'while True' loops are supported", cur().span);
    take();
    expect(Tok::Colon, "':'");
    ++loop_depth_;
    std::vector<StmtPtr> body = parse_suite();
    --loop_depth_;
    Span span = body.empty() ? start : join(start, body.back()->span);
    return make_stmt(span, WhileTrueStmt{std::move(body)});
  }

  StmtPtr parse_if() {
    Span start = cur().span;
    IfStmt node;
    take();  // 'if'
    {
      IfStmt::Arm arm;
      arm.cond = parse_expr();
      expect(Tok::Colon, "':'");
      arm.body = parse_suite();
      node.arms.push_back(std::move(arm));
    }
    while (at(Tok::KwElif)) {
      take();
      IfStmt::Arm arm;
      arm.cond = parse_expr();
      expect(Tok::Colon, "':'");
      arm.body = parse_suite();
      node.arms.push_back(std::move(arm));
    }
    if (at(Tok::KwElse)) {
      take();
      expect(Tok::Colon, "':'");
      IfStmt::Arm arm;
      arm.body = parse_suite();
      node.arms.push_back(std::move(arm));
    }
    Span span = start;
    if (!node.arms.empty() && !node.arms.back().body.empty())
      span = join(start, node.arms.back().body.back()->span);
    return make_stmt(span, std::move(node));
  }

  // A suite is either a simple statement on the header line or an
  // indented body of one or more statements.
  std::vector<StmtPtr> parse_suite() {
    std::vector<StmtPtr> body;
    if (!at(Tok::Newline) && !at(Tok::Comment)) {
      body.push_back(parse_simple_line());
      return body;
    }
    std::string header_comment;
    if (at(Tok::Comment)) header_comment = take().text;
    expect(Tok::Newline, "an indented block");
    expect(Tok::Indent, "an indented block");
    while (!at(Tok::Dedent) && !at(Tok::End)) {
      if (at(Tok::Newline)) {
        take();
        continue;
      }
      body.push_back(parse_statement());
    }
    accept(Tok::Dedent);
    if (body.empty()) err("expected an indented block", cur().span);
    return body;
  }

  Target to_target(ExprPtr e) {
    Target t;
    t.span = e->span;
    if (is<NameExpr>(*e)) {
      t.kind = Target::Kind::Name;
      t.name = as<NameExpr>(*e).id;
      return t;
    }
    if (is<TupleExpr>(*e)) {
      t.kind = Target::Kind::Tuple;
      for (auto& item : std::get<TupleExpr>(e->node).items) {
        if (!is<NameExpr>(*item))
          err("tuple assignment targets may contain names only", item->span);
        t.names.push_back(as<NameExpr>(*item).id);
      }
      if (t.names.empty()) err("cannot assign to ()", e->span);
      return t;
    }
    if (is<IndexExpr>(*e)) {
      auto node = std::get<IndexExpr>(std::move(e->node));
      t.kind = Target::Kind::Index;
      t.object = std::move(node.object);
      t.index = std::move(node.index);
      return t;
    }
    if (is<AttrExpr>(*e)) {
      auto node = std::get<AttrExpr>(std::move(e->node));
      t.kind = Target::Kind::Attr;
      t.object = std::move(node.object);
      t.attr = node.attr;
      return t;
    }
    err("cannot assign to expression", e->span);
  }

  // ---- expressions ----

  // testlist: expr (',' expr)* — an unparenthesised tuple when more than one.
  ExprPtr parse_testlist() {
    ExprPtr first = parse_expr();
    if (!at(Tok::Comma)) return first;
    TupleExpr tuple;
    Span span = first->span;
    tuple.items.push_back(std::move(first));
    while (accept(Tok::Comma)) {
      if (!starts_expression()) break;  // trailing comma
      tuple.items.push_back(parse_expr());
      span = join(span, tuple.items.back()->span);
    }
    return make_expr(span, std::move(tuple));
  }

  bool starts_expression() const {
    switch (cur().kind) {
      case Tok::Name:
      case Tok::Int:
      case Tok::Float:
      case Tok::Str:
      case Tok::LParen:
      case Tok::LBracket:
      case Tok::LBrace:
      case Tok::Minus:
      case Tok::Plus:
      case Tok::KwNot:
      case Tok::KwTrue:
      case Tok::KwFalse:
      case Tok::KwNone:
        return true;
      default:
        return false;
    }
  }

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    if (!at(Tok::KwOr)) return lhs;
    BoolExpr node{BoolOpKind::Or, {}};
    Span span = lhs->span;
    node.operands.push_back(std::move(lhs));
    while (accept(Tok::KwOr)) {
      node.operands.push_back(parse_and());
      span = join(span, node.operands.back()->span);
    }
    return make_expr(span, std::move(node));
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    if (!at(Tok::KwAnd)) return lhs;
    BoolExpr node{BoolOpKind::And, {}};
    Span span = lhs->span;
    node.operands.push_back(std::move(lhs));
    while (accept(Tok::KwAnd)) {
      node.operands.push_back(parse_not());
      span = join(span, node.operands.back()->span);
    }
    return make_expr(span, std::move(node));
  }

  ExprPtr parse_not() {
    if (at(Tok::KwNot) && peek().kind != Tok::KwIn) {
      Span start = take().span;
      ExprPtr operand = parse_not();
      Span span = join(start, operand->span);
      return make_expr(span, UnaryExpr{UnOp::Not, std::move(operand)});
    }
    return parse_comparison();
  }

  ExprPtr parse_comparison() {
    ExprPtr first = parse_arith();
    CompareExpr node;
    Span span = first->span;
    bool any = false;
    while (true) {
      CmpOp op;
      if (at(Tok::Lt)) op = CmpOp::Lt;
      else if (at(Tok::Gt)) op = CmpOp::Gt;
      else if (at(Tok::Le)) op = CmpOp::Le;
      else if (at(Tok::Ge)) op = CmpOp::Ge;
      else if (at(Tok::Eq)) op = CmpOp::Eq;
      else if (at(Tok::Ne)) op = CmpOp::Ne;
      else if (at(Tok::KwIn)) op = CmpOp::In;
      else if (at(Tok::KwNot) && peek().kind == Tok::KwIn) op = CmpOp::NotIn;
      else break;
      take();
      if (op == CmpOp::NotIn) take();  // the 'in'
      if (!any) {
        node.first = std::move(first);
        any = true;
      }
      node.rest.emplace_back(op, parse_arith());
      span = join(span, node.rest.back().second->span);
    }
    if (!any) return first;
    return make_expr(span, std::move(node));
  }

  ExprPtr parse_arith() {
    ExprPtr lhs = parse_term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
      take();
      ExprPtr rhs = parse_term();
      Span span = join(lhs->span, rhs->span);
      lhs = make_expr(span, BinaryExpr{op, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      BinOp op = at(Tok::Star) ? BinOp::Mul : BinOp::Div;
      take();
      ExprPtr rhs = parse_unary();
      Span span = join(lhs->span, rhs->span);
      lhs = make_expr(span, BinaryExpr{op, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at(Tok::Minus) || at(Tok::Plus)) {
      UnOp op = at(Tok::Minus) ? UnOp::Neg : UnOp::Pos;
      Span start = take().span;
      ExprPtr operand = parse_unary();
      Span span = join(start, operand->span);
      return make_expr(span, UnaryExpr{op, std::move(operand)});
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_atom();
    while (true) {
      if (at(Tok::LParen)) {
        take();
        CallExpr call;
        call.callee = std::move(e);
        if (!at(Tok::RParen)) {
          call.args.push_back(parse_expr());
          while (accept(Tok::Comma)) {
            if (at(Tok::RParen)) break;
            call.args.push_back(parse_expr());
          }
        }
        Token close = expect(Tok::RParen, "')'");
        Span span = join(call.callee->span, close.span);
        e = make_expr(span, std::move(call));
      } else if (at(Tok::LBracket)) {
        take();
        ExprPtr index = parse_expr();
        Token close = expect(Tok::RBracket, "']'");
        Span span = join(e->span, close.span);
        e = make_expr(span, IndexExpr{std::move(e), std::move(index)});
      } else if (at(Tok::Dot)) {
        take();
        Token name = expect(Tok::Name, "an attribute name");
        Span span = join(e->span, name.span);
        e = make_expr(span, AttrExpr{std::move(e), name.text});
      } else {
        return e;
      }
    }
  }

  ExprPtr parse_atom() {
    switch (cur().kind) {
      case Tok::Name: {
        Token t = take();
        return make_expr(t.span, NameExpr{t.text});
      }
      case Tok::Int: {
        Token t = take();
        return make_expr(t.span, IntLit{t.int_value});
      }
      case Tok::Float: {
        Token t = take();
        return make_expr(t.span, FloatLit{t.float_value});
      }
      case Tok::Str: {
        Token t = take();
        if (t.is_fstring) return parse_fstring(t);
        return make_expr(t.span, TextLit{t.str_value});
      }
      case Tok::KwTrue: {
        Token t = take();
        return make_expr(t.span, BoolLit{true});
      }
      case Tok::KwFalse: {
        Token t = take();
        return make_expr(t.span, BoolLit{false});
      }
      case Tok::KwNone: {
        Token t = take();
        return make_expr(t.span, NoneLit{});
      }
      case Tok::LParen: return parse_paren();
      case Tok::LBracket: return parse_list_or_comp();
      case Tok::LBrace: return parse_map();
      default:
        err("invalid syntax", cur().span);
    }
  }

  ExprPtr parse_paren() {
    Span start = take().span;
    if (at(Tok::RParen)) {
      Token close = take();
      return make_expr(join(start, close.span), TupleExpr{});
    }
    ExprPtr first = parse_expr();
    if (at(Tok::RParen)) {
      Token close = take();
      first->span = join(start, close.span);
      return first;  // grouping parens
    }
    TupleExpr tuple;
    tuple.items.push_back(std::move(first));
    while (accept(Tok::Comma)) {
      if (at(Tok::RParen)) break;
      tuple.items.push_back(parse_expr());
    }
    Token close = expect(Tok::RParen, "')'");
    return make_expr(join(start, close.span), std::move(tuple));
  }

  ExprPtr parse_list_or_comp() {
    Span start = take().span;
    if (at(Tok::RBracket)) {
      Token close = take();
      return make_expr(join(start, close.span), ListExpr{});
    }
    ExprPtr first = parse_expr();
    if (at(Tok::KwFor)) {
      take();
      CompExpr comp;
      comp.element = std::move(first);
      comp.names = parse_name_pattern();
      expect(Tok::KwIn, "'in'");
      comp.iterable = parse_or();
      if (accept(Tok::KwIf)) comp.cond = parse_expr();
      Token close = expect(Tok::RBracket, "']'");
      return make_expr(join(start, close.span), std::move(comp));
    }
    ListExpr list;
    list.items.push_back(std::move(first));
    while (accept(Tok::Comma)) {
      if (at(Tok::RBracket)) break;
      list.items.push_back(parse_expr());
    }
    Token close = expect(Tok::RBracket, "']'");
    return make_expr(join(start, close.span), std::move(list));
  }

  ExprPtr parse_map() {
    Span start = take().span;
    MapExpr map;
    if (!at(Tok::RBrace)) {
      do {
        if (at(Tok::RBrace)) break;
        ExprPtr key = parse_expr();
        expect(Tok::Colon, "':'");
        ExprPtr value = parse_expr();
        map.items.emplace_back(std::move(key), std::move(value));
      } while (accept(Tok::Comma));
    }
    Token close = expect(Tok::RBrace, "'}'");
    return make_expr(join(start, close.span), std::move(map));
  }

  // ---- f-strings ----

  ExprPtr parse_fstring(const Token& t) {
    // raw content starts after the 'f' prefix and the opening quote(s)
    std::size_t quote_len =
        (t.text.size() >= 7 && t.text[2] == t.text[1] && t.text[3] == t.text[1])
            ? 3
            : 1;
    std::size_t content_offset = t.span.begin + 1 + quote_len;
    const std::string& raw = t.str_value;
    FStringExpr node;
    std::string literal;
    std::size_t i = 0;
    auto flush_piece = [&](ExprPtr expr) {
      FStringExpr::Piece piece;
      piece.literal = decode_escapes(literal);
      piece.expr = std::move(expr);
      node.pieces.push_back(std::move(piece));
      literal.clear();
    };
    while (i < raw.size()) {
      char c = raw[i];
      if (c == '{' && i + 1 < raw.size() && raw[i + 1] == '{') {
        literal += '{';
        i += 2;
        continue;
      }
      if (c == '}' && i + 1 < raw.size() && raw[i + 1] == '}') {
        literal += '}';
        i += 2;
        continue;
      }
      if (c == '}') {
        err("f-string: single '}' is not allowed",
            Span{content_offset + i, content_offset + i + 1, t.span.line,
                 t.span.col});
      }
      if (c == '{') {
        std::size_t open = i + 1;
        int depth = 1;
        std::size_t j = open;
        char in_quote = '\0';
        while (j < raw.size() && depth > 0) {
          char d = raw[j];
          if (in_quote != '\0') {
            if (d == '\\') ++j;
            else if (d == in_quote) in_quote = '\0';
          } else if (d == '\'' || d == '"') {
            in_quote = d;
          } else if (d == '{' || d == '[' || d == '(') {
            ++depth;
          } else if (d == '}' || d == ']' || d == ')') {
            --depth;
          }
          ++j;
        }
        if (depth != 0)
          err("f-string: expecting '}'",
              Span{content_offset + i, content_offset + raw.size(),
                   t.span.line, t.span.col});
        std::string inner = raw.substr(open, j - 1 - open);
        if (inner.empty())
          err("f-string: empty expression not allowed",
              Span{content_offset + i, content_offset + j, t.span.line,
                   t.span.col});
        flush_piece(parse_embedded(inner, t.span));
        i = j;
        continue;
      }
      literal += c;
      ++i;
    }
    if (!literal.empty() || node.pieces.empty()) flush_piece(nullptr);
    return make_expr(t.span, std::move(node));
  }

  static std::string decode_escapes(const std::string& raw) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 1 < raw.size()) {
        char esc = raw[i + 1];
        switch (esc) {
          case 'n': out += '\n'; ++i; continue;
          case 't': out += '\t'; ++i; continue;
          case 'r': out += '\r'; ++i; continue;
          case '\\': out += '\\'; ++i; continue;
          case '\'': out += '\''; ++i; continue;
          case '"': out += '"'; ++i; continue;
          default: break;
        }
      }
      out += raw[i];
    }
    return out;
  }

  ExprPtr parse_embedded(const std::string& inner, Span outer) {
    TokenizeResult toks = tokenize(inner);
    if (auto* diag = std::get_if<SyntaxDiagnostic>(&toks))
      err(diag->reason, outer);
    Parser sub(inner, std::get<std::vector<Token>>(std::move(toks)));
    ExprPtr e;
    try {
      e = sub.parse_full_expression();
    } catch (const ParseError& pe) {
      err("f-string: " + pe.reason, outer);
    }
    reanchor(*e, outer);
    return e;
  }

  // Embedded expressions carry spans relative to the inner text; pin them
  // to the surrounding literal so parent/child span nesting holds.
  static void reanchor(Expr& e, Span outer) {
    e.span = outer;
    std::visit(
        [&](auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, FStringExpr>) {
            for (auto& piece : node.pieces)
              if (piece.expr) reanchor(*piece.expr, outer);
          } else if constexpr (std::is_same_v<T, ListExpr> ||
                               std::is_same_v<T, TupleExpr>) {
            for (auto& item : node.items) reanchor(*item, outer);
          } else if constexpr (std::is_same_v<T, MapExpr>) {
            for (auto& [k, v] : node.items) {
              reanchor(*k, outer);
              reanchor(*v, outer);
            }
          } else if constexpr (std::is_same_v<T, CompExpr>) {
            reanchor(*node.element, outer);
            reanchor(*node.iterable, outer);
            if (node.cond) reanchor(*node.cond, outer);
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            reanchor(*node.operand, outer);
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            reanchor(*node.lhs, outer);
            reanchor(*node.rhs, outer);
          } else if constexpr (std::is_same_v<T, BoolExpr>) {
            for (auto& op : node.operands) reanchor(*op, outer);
          } else if constexpr (std::is_same_v<T, CompareExpr>) {
            reanchor(*node.first, outer);
            for (auto& [op, rhs] : node.rest) reanchor(*rhs, outer);
          } else if constexpr (std::is_same_v<T, CallExpr>) {
            reanchor(*node.callee, outer);
            for (auto& a : node.args) reanchor(*a, outer);
          } else if constexpr (std::is_same_v<T, AttrExpr>) {
            reanchor(*node.object, outer);
          } else if constexpr (std::is_same_v<T, IndexExpr>) {
            reanchor(*node.object, outer);
            reanchor(*node.index, outer);
          }
        },
        e.node);
  }
};

std::string line_text_of(const std::string& src, int line) {
  int l = 1;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= src.size(); ++i) {
    if (i == src.size() || src[i] == '\n') {
      if (l == line) return src.substr(start, i - start);
      start = i + 1;
      ++l;
    }
  }
  return "";
}

SyntaxDiagnostic diag_from(const ParseError& pe, const std::string& src) {
  SyntaxDiagnostic d;
  d.reason = pe.reason;
  d.span = pe.span;
  d.line_text = line_text_of(src, pe.span.line);
  d.end_line = pe.span.line;
  d.end_col = pe.span.col;
  return d;
}

}  // namespace

ParseResult parse_block(const std::string& text) {
  // tolerate uniformly indented blocks (LLM output is inconsistent)
  std::string source = dedent_common(text);
  TokenizeResult toks = tokenize(source);
  if (auto* diag = std::get_if<SyntaxDiagnostic>(&toks)) return *diag;
  Parser parser(source, std::get<std::vector<Token>>(std::move(toks)));
  try {
    return parser.parse_single_block();
  } catch (const ParseError& pe) {
    return diag_from(pe, source);
  }
}

std::variant<ExprPtr, SyntaxDiagnostic> parse_expression(const std::string& text) {
  TokenizeResult toks = tokenize(text);
  if (auto* diag = std::get_if<SyntaxDiagnostic>(&toks)) return *diag;
  Parser parser(text, std::get<std::vector<Token>>(std::move(toks)));
  try {
    return parser.parse_full_expression();
  } catch (const ParseError& pe) {
    return diag_from(pe, text);
  }
}

}  // namespace llmrepl::mlang
