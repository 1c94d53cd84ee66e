#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mlang/token.hpp"

namespace llmrepl::mlang {

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

enum class BinOp { Add, Sub, Mul, Div };
enum class UnOp { Neg, Pos, Not };
enum class CmpOp { Lt, Gt, Le, Ge, Eq, Ne, In, NotIn };
enum class BoolOpKind { And, Or };

struct NameExpr {
  std::string id;
};
struct IntLit {
  long long value;
};
struct FloatLit {
  double value;
};
struct TextLit {
  std::string value;
};
struct BoolLit {
  bool value;
};
struct NoneLit {};

// f'...{expr}...': alternating literal pieces and embedded expressions.
struct FStringExpr {
  struct Piece {
    std::string literal;  // decoded literal text before the expression
    ExprPtr expr;         // may be null for the trailing piece
  };
  std::vector<Piece> pieces;
};

struct ListExpr {
  std::vector<ExprPtr> items;
};
struct TupleExpr {
  std::vector<ExprPtr> items;
};
struct MapExpr {
  std::vector<std::pair<ExprPtr, ExprPtr>> items;
};

// One-clause list comprehension with optional condition:
//   [element for names in iterable if cond]
struct CompExpr {
  ExprPtr element;
  std::vector<std::string> names;  // loop pattern, 1 = plain name, n = tuple
  ExprPtr iterable;
  ExprPtr cond;  // may be null
};

struct UnaryExpr {
  UnOp op;
  ExprPtr operand;
};
struct BinaryExpr {
  BinOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct BoolExpr {
  BoolOpKind op;
  std::vector<ExprPtr> operands;
};
struct CompareExpr {
  ExprPtr first;
  std::vector<std::pair<CmpOp, ExprPtr>> rest;  // chained
};
struct CallExpr {
  ExprPtr callee;
  std::vector<ExprPtr> args;
};
struct AttrExpr {
  ExprPtr object;
  std::string attr;
};
struct IndexExpr {
  ExprPtr object;
  ExprPtr index;
};

struct Expr {
  Span span;
  std::variant<NameExpr, IntLit, FloatLit, TextLit, BoolLit, NoneLit,
               FStringExpr, ListExpr, TupleExpr, MapExpr, CompExpr, UnaryExpr,
               BinaryExpr, BoolExpr, CompareExpr, CallExpr, AttrExpr, IndexExpr>
      node;
};

// Assignment target. Tuple patterns may contain names only.
struct Target {
  enum class Kind { Name, Tuple, Index, Attr };
  Kind kind = Kind::Name;
  std::string name;                 // Name
  std::vector<std::string> names;   // Tuple
  ExprPtr object;                   // Index / Attr base
  ExprPtr index;                    // Index
  std::string attr;                 // Attr
  Span span;
};

struct AssignStmt {
  Target target;
  ExprPtr value;
};
struct AugAssignStmt {
  Target target;  // Name or Index only
  BinOp op;
  ExprPtr value;
};
struct ExprStmt {
  ExprPtr value;
};
struct ForStmt {
  std::vector<std::string> names;
  ExprPtr iterable;
  std::vector<StmtPtr> body;
};
struct WhileTrueStmt {
  std::vector<StmtPtr> body;
};
struct IfStmt {
  struct Arm {
    ExprPtr cond;  // null for the else arm
    std::vector<StmtPtr> body;
  };
  std::vector<Arm> arms;
};
struct BreakStmt {};
struct ContinueStmt {};
struct CommentStmt {
  std::string text;
};

struct Stmt {
  Span span;
  std::string trailing_comment;  // verbatim, including '#'; empty if none
  std::variant<AssignStmt, AugAssignStmt, ExprStmt, ForStmt, WhileTrueStmt,
               IfStmt, BreakStmt, ContinueStmt, CommentStmt>
      node;
};

template <class T>
bool is(const Expr& e) {
  return std::holds_alternative<T>(e.node);
}
template <class T>
const T& as(const Expr& e) {
  return std::get<T>(e.node);
}
template <class T>
bool is(const Stmt& s) {
  return std::holds_alternative<T>(s.node);
}
template <class T>
const T& as(const Stmt& s) {
  return std::get<T>(s.node);
}

}  // namespace llmrepl::mlang
