#include "interp/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mlang/diagnostics.hpp"

namespace llmrepl::interp {

namespace {

using namespace llmrepl::mlang;

struct SuspendSignal {
  Effect effect;
};
struct FaultSignal {
  std::string diagnostic;
};
struct BreakSignal {};
struct ContinueSignal {};

[[noreturn]] void fault(const std::string& kind, const std::string& msg) {
  throw FaultSignal{kind + "(" + repr_quote(msg) + ")"};
}

[[noreturn]] void budget_fault() {
  throw FaultSignal{"RuntimeBudgetExceeded"};
}

const std::set<std::string>& pure_builtins() {
  static const std::set<std::string> names = {
      "len", "range", "max",  "min",   "sorted",
      "abs", "str",   "int",  "float", "enumerate"};
  return names;
}

const std::set<std::string>& context_builtins() {
  static const std::set<std::string> names = {"act",     "answer",    "get_args",
                                              "get_obs", "print", "print_page"};
  return names;
}

class Evaluator {
 public:
  Evaluator(const Scope& snapshot, CallLedger& ledger)
      : scope_(snapshot.snapshot()), ledger_(ledger) {}

  ExecOutcome run(const Stmt& stmt) {
    ExecOutcome out;
    try {
      exec(stmt, /*top_level=*/true);
      out.status = ExecOutcome::Status::Completed;
      if (echo_ && !echo_->is_none()) out.echo = std::move(echo_);
      out.scope = std::move(scope_);
    } catch (const SuspendSignal& s) {
      out.status = ExecOutcome::Status::Suspended;
      out.effect = s.effect;
    } catch (const FaultSignal& f) {
      out.status = ExecOutcome::Status::Failed;
      out.diagnostic = f.diagnostic;
    } catch (const BreakSignal&) {
      out.status = ExecOutcome::Status::Failed;
      out.diagnostic = "SyntaxError('break outside loop')";
    } catch (const ContinueSignal&) {
      out.status = ExecOutcome::Status::Failed;
      out.diagnostic = "SyntaxError('continue outside loop')";
    }
    out.fresh_stdout = std::move(fresh_stdout_);
    return out;
  }

 private:
  Scope scope_;
  CallLedger& ledger_;
  std::map<std::string, int> counters_;
  std::vector<std::string> fresh_stdout_;
  std::optional<Value> echo_;
  long long steps_ = 0;

  void tick() {
    if (++steps_ > kStepBudget) budget_fault();
  }

  // ---- statements ----

  void exec(const Stmt& stmt, bool top_level = false) {
    tick();
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, AssignStmt>) {
            Value v = eval(*node.value);
            assign(node.target, std::move(v));
          } else if constexpr (std::is_same_v<T, AugAssignStmt>) {
            exec_aug_assign(node);
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            Value v = eval(*node.value);
            if (top_level) echo_ = std::move(v);
          } else if constexpr (std::is_same_v<T, ForStmt>) {
            exec_for(node);
          } else if constexpr (std::is_same_v<T, WhileTrueStmt>) {
            while (true) {
              tick();
              try {
                for (const StmtPtr& s : node.body) exec(*s);
              } catch (const BreakSignal&) {
                break;
              } catch (const ContinueSignal&) {
                continue;
              }
            }
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            for (const auto& arm : node.arms) {
              if (!arm.cond || eval(*arm.cond).truthy()) {
                for (const StmtPtr& s : arm.body) exec(*s);
                break;
              }
            }
          } else if constexpr (std::is_same_v<T, BreakStmt>) {
            throw BreakSignal{};
          } else if constexpr (std::is_same_v<T, ContinueStmt>) {
            throw ContinueSignal{};
          } else if constexpr (std::is_same_v<T, CommentStmt>) {
            // no-op
          }
        },
        stmt.node);
  }

  void exec_for(const ForStmt& node) {
    Value iterable = eval(*node.iterable);
    std::vector<Value> items = iterate(iterable);
    for (Value& item : items) {
      tick();
      bind_pattern(node.names, item);
      try {
        for (const StmtPtr& s : node.body) exec(*s);
      } catch (const BreakSignal&) {
        break;
      } catch (const ContinueSignal&) {
        continue;
      }
    }
  }

  std::vector<Value> iterate(const Value& v) {
    if (v.is<std::shared_ptr<ListObj>>())
      return v.as<std::shared_ptr<ListObj>>()->items;
    if (v.is<std::shared_ptr<TupleObj>>())
      return v.as<std::shared_ptr<TupleObj>>()->items;
    if (v.is<std::string>()) {
      std::vector<Value> chars;
      for (char c : v.as<std::string>())
        chars.push_back(Value::text(std::string(1, c)));
      return chars;
    }
    if (v.is<std::shared_ptr<MapObj>>()) {
      std::vector<Value> keys;
      for (const auto& [k, _] : v.as<std::shared_ptr<MapObj>>()->entries)
        keys.push_back(k);
      return keys;
    }
    fault("TypeError",
          std::string("'") + v.type_name() + "' object is not iterable");
  }

  void bind_pattern(const std::vector<std::string>& names, const Value& item) {
    if (names.size() == 1) {
      scope_.bind(names[0], item);
      return;
    }
    std::vector<Value> parts = unpack(item, names.size());
    for (std::size_t i = 0; i < names.size(); ++i)
      scope_.bind(names[i], std::move(parts[i]));
  }

  std::vector<Value> unpack(const Value& v, std::size_t want) {
    const std::vector<Value>* items = nullptr;
    if (v.is<std::shared_ptr<ListObj>>())
      items = &v.as<std::shared_ptr<ListObj>>()->items;
    else if (v.is<std::shared_ptr<TupleObj>>())
      items = &v.as<std::shared_ptr<TupleObj>>()->items;
    if (!items)
      fault("TypeError", std::string("cannot unpack non-iterable ") +
                             v.type_name() + " object");
    if (items->size() < want)
      fault("ValueError", "not enough values to unpack (expected " +
                              std::to_string(want) + ", got " +
                              std::to_string(items->size()) + ")");
    if (items->size() > want)
      fault("ValueError",
            "too many values to unpack (expected " + std::to_string(want) + ")");
    return *items;
  }

  void assign(const Target& target, Value v) {
    switch (target.kind) {
      case Target::Kind::Name:
        scope_.bind(target.name, std::move(v));
        return;
      case Target::Kind::Tuple: {
        std::vector<Value> parts = unpack(v, target.names.size());
        for (std::size_t i = 0; i < target.names.size(); ++i)
          scope_.bind(target.names[i], std::move(parts[i]));
        return;
      }
      case Target::Kind::Index: {
        Value obj = eval(*target.object);
        Value idx = eval(*target.index);
        if (obj.is<std::shared_ptr<ListObj>>()) {
          auto& items = obj.as<std::shared_ptr<ListObj>>()->items;
          items[list_index(idx, items.size())] = std::move(v);
          return;
        }
        if (obj.is<std::shared_ptr<MapObj>>()) {
          if (!value_key_ok(idx))
            fault("TypeError",
                  std::string("unhashable key type: '") + idx.type_name() + "'");
          auto& map = *obj.as<std::shared_ptr<MapObj>>();
          if (Value* slot = map.find(idx)) {
            *slot = std::move(v);
          } else {
            map.entries.emplace_back(std::move(idx), std::move(v));
          }
          return;
        }
        fault("TypeError", std::string("'") + obj.type_name() +
                               "' object does not support item assignment");
      }
      case Target::Kind::Attr: {
        Value obj = eval(*target.object);
        fault("AttributeError", std::string("'") + obj.type_name() +
                                    "' object has no attribute '" +
                                    target.attr + "'");
      }
    }
  }

  // x += e and d[k] += e; the subscript base and index evaluate once.
  void exec_aug_assign(const AugAssignStmt& node) {
    if (node.target.kind == Target::Kind::Name) {
      const Value* current = scope_.lookup(node.target.name);
      if (!current)
        fault("REPLNameError", "name '" + node.target.name + "' not defined.");
      Value lhs = *current;
      Value rhs = eval(*node.value);
      scope_.bind(node.target.name, binary_op(node.op, lhs, rhs));
      return;
    }
    if (node.target.kind == Target::Kind::Index) {
      Value obj = eval(*node.target.object);
      Value idx = eval(*node.target.index);
      Value lhs = subscript(obj, idx);
      Value rhs = eval(*node.value);
      Value result = binary_op(node.op, lhs, rhs);
      if (obj.is<std::shared_ptr<ListObj>>()) {
        auto& items = obj.as<std::shared_ptr<ListObj>>()->items;
        items[list_index(idx, items.size())] = std::move(result);
        return;
      }
      if (obj.is<std::shared_ptr<MapObj>>()) {
        *obj.as<std::shared_ptr<MapObj>>()->find(idx) = std::move(result);
        return;
      }
    }
    fault("TypeError", "invalid augmented assignment target");
  }

  std::size_t list_index(const Value& idx, std::size_t size) {
    if (!idx.is<long long>() && !idx.is<bool>())
      fault("TypeError", std::string("list indices must be integers, not ") +
                             idx.type_name());
    long long i = idx.is<bool>() ? (idx.as<bool>() ? 1 : 0) : idx.as<long long>();
    if (i < 0) i += static_cast<long long>(size);
    if (i < 0 || i >= static_cast<long long>(size))
      fault("IndexError", "list index out of range");
    return static_cast<std::size_t>(i);
  }

  // ---- expressions ----

  Value eval(const Expr& expr) {
    tick();
    return std::visit(
        [&](const auto& node) -> Value {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, NameExpr>) {
            return eval_name(node.id);
          } else if constexpr (std::is_same_v<T, IntLit>) {
            return Value::integer(node.value);
          } else if constexpr (std::is_same_v<T, FloatLit>) {
            return Value::real(node.value);
          } else if constexpr (std::is_same_v<T, TextLit>) {
            return Value::text(node.value);
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            return Value::boolean(node.value);
          } else if constexpr (std::is_same_v<T, NoneLit>) {
            return Value::none();
          } else if constexpr (std::is_same_v<T, FStringExpr>) {
            std::string out;
            for (const auto& piece : node.pieces) {
              out += piece.literal;
              if (piece.expr)
                out += render_value(eval(*piece.expr), RenderContext::Print);
            }
            return Value::text(std::move(out));
          } else if constexpr (std::is_same_v<T, ListExpr>) {
            std::vector<Value> items;
            items.reserve(node.items.size());
            for (const ExprPtr& item : node.items) items.push_back(eval(*item));
            return Value::list(std::move(items));
          } else if constexpr (std::is_same_v<T, TupleExpr>) {
            std::vector<Value> items;
            items.reserve(node.items.size());
            for (const ExprPtr& item : node.items) items.push_back(eval(*item));
            return Value::tuple(std::move(items));
          } else if constexpr (std::is_same_v<T, MapExpr>) {
            Value map = Value::map();
            auto& entries = map.as<std::shared_ptr<MapObj>>()->entries;
            for (const auto& [k, v] : node.items) {
              Value key = eval(*k);
              if (!value_key_ok(key))
                fault("TypeError", std::string("unhashable key type: '") +
                                       key.type_name() + "'");
              Value value = eval(*v);
              if (Value* slot = map.as<std::shared_ptr<MapObj>>()->find(key))
                *slot = std::move(value);
              else
                entries.emplace_back(std::move(key), std::move(value));
            }
            return map;
          } else if constexpr (std::is_same_v<T, CompExpr>) {
            return eval_comprehension(node);
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            return eval_unary(node);
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            Value lhs = eval(*node.lhs);
            Value rhs = eval(*node.rhs);
            return binary_op(node.op, lhs, rhs);
          } else if constexpr (std::is_same_v<T, BoolExpr>) {
            return eval_boolop(node);
          } else if constexpr (std::is_same_v<T, CompareExpr>) {
            return eval_compare(node);
          } else if constexpr (std::is_same_v<T, CallExpr>) {
            return eval_call(node);
          } else if constexpr (std::is_same_v<T, AttrExpr>) {
            Value obj = eval_attr_base(*node.object);
            fault_attr_access(obj, node.attr);
          } else if constexpr (std::is_same_v<T, IndexExpr>) {
            Value obj = eval(*node.object);
            Value idx = eval(*node.index);
            return subscript(obj, idx);
          }
        },
        expr.node);
  }

  Value eval_name(const std::string& id) {
    if (const Value* v = scope_.lookup(id)) return *v;
    if (pure_builtins().count(id) || context_builtins().count(id))
      return Value::builtin(id);
    fault("REPLNameError", "name '" + id + "' not defined.");
  }

  // The base of an attribute access tolerates an unbound name: it reads as
  // an LLM-REPL handle, so `scores.items()` with scores undefined reports
  // AttributeError("'LLMREPL' object has no attribute 'items'").
  Value eval_attr_base(const Expr& base) {
    if (is<NameExpr>(base)) {
      const std::string& id = as<NameExpr>(base).id;
      if (const Value* v = scope_.lookup(id)) return *v;
      if (pure_builtins().count(id) || context_builtins().count(id))
        return Value::builtin(id);
      return Value::repl_fn(id);
    }
    return eval(base);
  }

  [[noreturn]] void fault_attr_access(const Value& obj, const std::string& attr) {
    bool known_method =
        (obj.is<std::shared_ptr<ListObj>>() && (attr == "append" || attr == "extend")) ||
        (obj.is<std::shared_ptr<MapObj>>() &&
         (attr == "items" || attr == "keys" || attr == "values"));
    if (known_method)
      fault("TypeError", "attribute '" + attr + "' of '" +
                             obj.type_name() + "' object must be called");
    fault("AttributeError", std::string("'") + obj.type_name() +
                                "' object has no attribute '" + attr + "'");
  }

  Value eval_comprehension(const CompExpr& node) {
    Value iterable = eval(*node.iterable);
    std::vector<Value> items = iterate(iterable);
    // comprehension variables live in their own scope
    std::vector<std::pair<std::string, std::optional<Value>>> saved;
    for (const std::string& name : node.names) {
      const Value* old = scope_.lookup(name);
      saved.emplace_back(name, old ? std::optional<Value>(*old) : std::nullopt);
    }
    std::vector<Value> result;
    for (Value& item : items) {
      tick();
      bind_pattern(node.names, item);
      if (node.cond && !eval(*node.cond).truthy()) continue;
      result.push_back(eval(*node.element));
    }
    for (auto& [name, old] : saved) {
      if (old) scope_.bind(name, std::move(*old));
      // names that were unbound before stay bound to their last value;
      // harmless here since blocks never read them afterwards
    }
    return Value::list(std::move(result));
  }

  Value eval_unary(const UnaryExpr& node) {
    Value v = eval(*node.operand);
    switch (node.op) {
      case UnOp::Not:
        return Value::boolean(!v.truthy());
      case UnOp::Neg:
        if (v.is<long long>()) return Value::integer(-v.as<long long>());
        if (v.is<bool>()) return Value::integer(v.as<bool>() ? -1 : 0);
        if (v.is<double>()) return Value::real(-v.as<double>());
        fault("TypeError",
              std::string("bad operand type for unary -: '") + v.type_name() + "'");
      case UnOp::Pos:
        if (v.is<long long>() || v.is<double>()) return v;
        if (v.is<bool>()) return Value::integer(v.as<bool>() ? 1 : 0);
        fault("TypeError",
              std::string("bad operand type for unary +: '") + v.type_name() + "'");
    }
    fault("TypeError", "bad unary operator");
  }

  static bool numeric(const Value& v) { return v.is_number() || v.is<bool>(); }
  static double num_of(const Value& v) {
    if (v.is<bool>()) return v.as<bool>() ? 1.0 : 0.0;
    return v.as_number();
  }
  static long long int_of(const Value& v) {
    if (v.is<bool>()) return v.as<bool>() ? 1 : 0;
    return v.as<long long>();
  }
  static bool int_like(const Value& v) { return v.is<long long>() || v.is<bool>(); }

  Value binary_op(BinOp op, const Value& lhs, const Value& rhs) {
    const char* op_text = op == BinOp::Add   ? "+"
                          : op == BinOp::Sub ? "-"
                          : op == BinOp::Mul ? "*"
                                             : "/";
    if (op == BinOp::Add) {
      if (lhs.is<std::string>() && rhs.is<std::string>())
        return Value::text(lhs.as<std::string>() + rhs.as<std::string>());
      if (lhs.is<std::shared_ptr<ListObj>>() && rhs.is<std::shared_ptr<ListObj>>()) {
        std::vector<Value> items = lhs.as<std::shared_ptr<ListObj>>()->items;
        const auto& more = rhs.as<std::shared_ptr<ListObj>>()->items;
        items.insert(items.end(), more.begin(), more.end());
        return Value::list(std::move(items));
      }
    }
    if (!numeric(lhs) || !numeric(rhs))
      fault("TypeError", std::string("unsupported operand type(s) for ") +
                             op_text + ": '" + lhs.type_name() + "' and '" +
                             rhs.type_name() + "'");
    if (op == BinOp::Div) {
      double divisor = num_of(rhs);
      if (divisor == 0.0) fault("ZeroDivisionError", "division by zero");
      return Value::real(num_of(lhs) / divisor);
    }
    if (int_like(lhs) && int_like(rhs)) {
      long long a = int_of(lhs), b = int_of(rhs);
      switch (op) {
        case BinOp::Add: return Value::integer(a + b);
        case BinOp::Sub: return Value::integer(a - b);
        case BinOp::Mul: return Value::integer(a * b);
        default: break;
      }
    }
    double a = num_of(lhs), b = num_of(rhs);
    switch (op) {
      case BinOp::Add: return Value::real(a + b);
      case BinOp::Sub: return Value::real(a - b);
      case BinOp::Mul: return Value::real(a * b);
      default: break;
    }
    fault("TypeError", "bad binary operator");
  }

  Value eval_boolop(const BoolExpr& node) {
    Value current;
    for (std::size_t i = 0; i < node.operands.size(); ++i) {
      current = eval(*node.operands[i]);
      bool t = current.truthy();
      if (node.op == BoolOpKind::And && !t) return current;
      if (node.op == BoolOpKind::Or && t) return current;
    }
    return current;
  }

  bool order_less(const Value& lhs, const Value& rhs, const char* op_text) {
    if (numeric(lhs) && numeric(rhs)) return num_of(lhs) < num_of(rhs);
    if (lhs.is<std::string>() && rhs.is<std::string>())
      return lhs.as<std::string>() < rhs.as<std::string>();
    auto seq_less = [&](const std::vector<Value>& a, const std::vector<Value>& b) {
      std::size_t n = std::min(a.size(), b.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (order_less(a[i], b[i], op_text)) return true;
        if (order_less(b[i], a[i], op_text)) return false;
      }
      return a.size() < b.size();
    };
    if (lhs.is<std::shared_ptr<ListObj>>() && rhs.is<std::shared_ptr<ListObj>>())
      return seq_less(lhs.as<std::shared_ptr<ListObj>>()->items,
                      rhs.as<std::shared_ptr<ListObj>>()->items);
    if (lhs.is<std::shared_ptr<TupleObj>>() && rhs.is<std::shared_ptr<TupleObj>>())
      return seq_less(lhs.as<std::shared_ptr<TupleObj>>()->items,
                      rhs.as<std::shared_ptr<TupleObj>>()->items);
    fault("TypeError", std::string("'") + op_text +
                           "' not supported between instances of '" +
                           lhs.type_name() + "' and '" + rhs.type_name() + "'");
  }

  bool membership(const Value& needle, const Value& haystack) {
    if (haystack.is<std::string>()) {
      if (!needle.is<std::string>())
        fault("TypeError", std::string("'in <string>' requires string as left "
                                       "operand, not ") +
                               needle.type_name());
      return haystack.as<std::string>().find(needle.as<std::string>()) !=
             std::string::npos;
    }
    if (haystack.is<std::shared_ptr<ListObj>>()) {
      for (const Value& item : haystack.as<std::shared_ptr<ListObj>>()->items)
        if (item.equals(needle)) return true;
      return false;
    }
    if (haystack.is<std::shared_ptr<TupleObj>>()) {
      for (const Value& item : haystack.as<std::shared_ptr<TupleObj>>()->items)
        if (item.equals(needle)) return true;
      return false;
    }
    if (haystack.is<std::shared_ptr<MapObj>>())
      return haystack.as<std::shared_ptr<MapObj>>()->find(needle) != nullptr;
    fault("TypeError", std::string("argument of type '") +
                           haystack.type_name() + "' is not iterable");
  }

  Value eval_compare(const CompareExpr& node) {
    Value lhs = eval(*node.first);
    for (const auto& [op, rhs_expr] : node.rest) {
      Value rhs = eval(*rhs_expr);
      bool ok = false;
      switch (op) {
        case CmpOp::Eq: ok = lhs.equals(rhs); break;
        case CmpOp::Ne: ok = !lhs.equals(rhs); break;
        case CmpOp::Lt: ok = order_less(lhs, rhs, "<"); break;
        case CmpOp::Gt: ok = order_less(rhs, lhs, ">"); break;
        case CmpOp::Le: ok = !order_less(rhs, lhs, "<="); break;
        case CmpOp::Ge: ok = !order_less(lhs, rhs, ">="); break;
        case CmpOp::In: ok = membership(lhs, rhs); break;
        case CmpOp::NotIn: ok = !membership(lhs, rhs); break;
      }
      if (!ok) return Value::boolean(false);
      lhs = std::move(rhs);
    }
    return Value::boolean(true);
  }

  Value subscript(const Value& obj, const Value& idx) {
    if (obj.is<std::shared_ptr<ListObj>>()) {
      const auto& items = obj.as<std::shared_ptr<ListObj>>()->items;
      return items[list_index(idx, items.size())];
    }
    if (obj.is<std::shared_ptr<TupleObj>>()) {
      const auto& items = obj.as<std::shared_ptr<TupleObj>>()->items;
      if (!int_like(idx))
        fault("TypeError", std::string("tuple indices must be integers, not ") +
                               idx.type_name());
      long long i = int_of(idx);
      if (i < 0) i += static_cast<long long>(items.size());
      if (i < 0 || i >= static_cast<long long>(items.size()))
        fault("IndexError", "tuple index out of range");
      return items[static_cast<std::size_t>(i)];
    }
    if (obj.is<std::string>()) {
      const std::string& s = obj.as<std::string>();
      if (!int_like(idx))
        fault("TypeError", std::string("string indices must be integers, not ") +
                               idx.type_name());
      long long i = int_of(idx);
      if (i < 0) i += static_cast<long long>(s.size());
      if (i < 0 || i >= static_cast<long long>(s.size()))
        fault("IndexError", "string index out of range");
      return Value::text(std::string(1, s[static_cast<std::size_t>(i)]));
    }
    if (obj.is<std::shared_ptr<MapObj>>()) {
      if (const Value* v = obj.as<std::shared_ptr<MapObj>>()->find(idx))
        return *v;
      throw FaultSignal{"KeyError(" + render_repr(idx) + ")"};
    }
    fault("TypeError", std::string("'") + obj.type_name() +
                           "' object is not subscriptable");
  }

  // ---- calls ----

  Value eval_call(const CallExpr& node) {
    if (is<AttrExpr>(*node.callee)) {
      const auto& attr = as<AttrExpr>(*node.callee);
      Value obj = eval_attr_base(*attr.object);
      std::vector<Value> args = eval_args(node.args);
      return method_call(obj, attr.attr, std::move(args));
    }
    if (is<NameExpr>(*node.callee)) {
      const std::string& id = as<NameExpr>(*node.callee).id;
      if (const Value* bound = scope_.lookup(id)) {
        if (bound->is<ReplFnRef>()) {
          std::vector<Value> args = eval_args(node.args);
          return repl_call(bound->as<ReplFnRef>().name, std::move(args),
                           /*bound=*/true);
        }
        if (bound->is<BuiltinRef>()) {
          std::vector<Value> args = eval_args(node.args);
          return builtin_call(bound->as<BuiltinRef>().name, std::move(args));
        }
        fault("TypeError",
              std::string("'") + bound->type_name() + "' object is not callable");
      }
      if (pure_builtins().count(id) || context_builtins().count(id)) {
        std::vector<Value> args = eval_args(node.args);
        return builtin_call(id, std::move(args));
      }
      // Unseen function: spawn a child LLM-REPL for it.
      std::vector<Value> args = eval_args(node.args);
      return repl_call(id, std::move(args), /*bound=*/false);
    }
    Value callee = eval(*node.callee);
    std::vector<Value> args = eval_args(node.args);
    if (callee.is<ReplFnRef>())
      return repl_call(callee.as<ReplFnRef>().name, std::move(args), true);
    if (callee.is<BuiltinRef>())
      return builtin_call(callee.as<BuiltinRef>().name, std::move(args));
    fault("TypeError",
          std::string("'") + callee.type_name() + "' object is not callable");
  }

  std::vector<Value> eval_args(const std::vector<ExprPtr>& args) {
    std::vector<Value> out;
    out.reserve(args.size());
    for (const ExprPtr& a : args) out.push_back(eval(*a));
    return out;
  }

  // Looks up the ledger slot for context call (name); returns the recorded
  // value or suspends with the effect built by `fresh`.
  template <class MakeEffect>
  Value context_call(const std::string& name, MakeEffect&& fresh) {
    int index = ++counters_[name];
    if (const CallLedger::Entry* entry = ledger_.lookup(name, index))
      return entry->result.deep_copy();
    Effect effect = fresh();
    effect.call_name = name;
    effect.call_index = index;
    throw SuspendSignal{std::move(effect)};
  }

  Value repl_call(const std::string& name, std::vector<Value> args, bool bound) {
    return context_call(name, [&] {
      Effect e;
      e.kind = Effect::Kind::SpawnCall;
      e.callee_bound = bound;
      e.args.clear();
      e.args.reserve(args.size());
      for (Value& a : args) e.args.push_back(a.deep_copy());
      return e;
    });
  }

  void arity(const std::string& name, const std::vector<Value>& args,
             std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      std::string expected =
          lo == hi ? std::to_string(lo)
                   : std::to_string(lo) + " to " + std::to_string(hi);
      fault("TypeError", name + "() takes " + expected + " argument" +
                             (hi == 1 ? "" : "s") + " (" +
                             std::to_string(args.size()) + " given)");
    }
  }

  Value do_print(std::vector<Value> args) {
    std::string text;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) text += ' ';
      text += render_value(args[i], RenderContext::Print);
    }
    int index = ++counters_["print"];
    if (ledger_.lookup("print", index) != nullptr) return Value::none();
    fresh_stdout_.push_back(text);
    ledger_.record("print", index, Value::none(), text);
    return Value::none();
  }

  Value builtin_call(const std::string& name, std::vector<Value> args) {
    // context-sensitive primitives
    if (name == "print") return do_print(std::move(args));
    if (name == "act") {
      arity(name, args, 1, 1);
      std::string action = render_value(args[0], RenderContext::Print);
      return context_call("act", [&] {
        Effect e;
        e.kind = Effect::Kind::Act;
        e.action = action;
        return e;
      });
    }
    if (name == "answer") {
      arity(name, args, 1, 1);
      return context_call("answer", [&] {
        Effect e;
        e.kind = Effect::Kind::Answer;
        e.value = args[0].deep_copy();
        return e;
      });
    }
    if (name == "get_args") {
      arity(name, args, 0, 0);
      return context_call("get_args", [&] {
        Effect e;
        e.kind = Effect::Kind::GetArgs;
        return e;
      });
    }
    if (name == "get_obs") {
      arity(name, args, 0, 0);
      return context_call("get_obs", [&] {
        Effect e;
        e.kind = Effect::Kind::GetObs;
        return e;
      });
    }
    if (name == "print_page") {
      arity(name, args, 0, 0);
      Value obs = context_call("get_obs", [&] {
        Effect e;
        e.kind = Effect::Kind::GetObs;
        return e;
      });
      std::vector<Value> print_args;
      print_args.push_back(std::move(obs));
      return do_print(std::move(print_args));
    }
    // pure builtins
    if (name == "len") {
      arity(name, args, 1, 1);
      const Value& v = args[0];
      if (v.is<std::string>())
        return Value::integer(static_cast<long long>(v.as<std::string>().size()));
      if (v.is<std::shared_ptr<ListObj>>())
        return Value::integer(
            static_cast<long long>(v.as<std::shared_ptr<ListObj>>()->items.size()));
      if (v.is<std::shared_ptr<TupleObj>>())
        return Value::integer(static_cast<long long>(
            v.as<std::shared_ptr<TupleObj>>()->items.size()));
      if (v.is<std::shared_ptr<MapObj>>())
        return Value::integer(static_cast<long long>(
            v.as<std::shared_ptr<MapObj>>()->entries.size()));
      fault("TypeError",
            std::string("object of type '") + v.type_name() + "' has no len()");
    }
    if (name == "range") {
      arity(name, args, 1, 3);
      long long start = 0, stop = 0, step = 1;
      for (const Value& a : args)
        if (!int_like(a))
          fault("TypeError",
                std::string("'") + a.type_name() +
                    "' object cannot be interpreted as an integer");
      if (args.size() == 1) {
        stop = int_of(args[0]);
      } else {
        start = int_of(args[0]);
        stop = int_of(args[1]);
        if (args.size() == 3) step = int_of(args[2]);
      }
      if (step == 0) fault("ValueError", "range() arg 3 must not be zero");
      std::vector<Value> items;
      long long count = 0;
      for (long long i = start; step > 0 ? i < stop : i > stop; i += step) {
        if (++count > kStepBudget) budget_fault();
        items.push_back(Value::integer(i));
      }
      return Value::list(std::move(items));
    }
    if (name == "max" || name == "min") {
      bool want_max = name == "max";
      std::vector<Value> pool;
      if (args.size() == 1) {
        pool = iterate(args[0]);
      } else if (args.size() >= 2) {
        pool = std::move(args);
      } else {
        fault("TypeError", name + " expected at least 1 argument, got 0");
      }
      if (pool.empty())
        fault("ValueError", name + "() arg is an empty sequence");
      Value best = pool[0];
      for (std::size_t i = 1; i < pool.size(); ++i) {
        bool replace = want_max ? order_less(best, pool[i], want_max ? ">" : "<")
                                : order_less(pool[i], best, "<");
        if (replace) best = pool[i];
      }
      return best;
    }
    if (name == "sorted") {
      arity(name, args, 1, 1);
      std::vector<Value> items = iterate(args[0]);
      std::stable_sort(items.begin(), items.end(),
                       [&](const Value& a, const Value& b) {
                         return order_less(a, b, "<");
                       });
      return Value::list(std::move(items));
    }
    if (name == "enumerate") {
      arity(name, args, 1, 1);
      std::vector<Value> items = iterate(args[0]);
      std::vector<Value> out;
      out.reserve(items.size());
      for (std::size_t i = 0; i < items.size(); ++i)
        out.push_back(Value::tuple(
            {Value::integer(static_cast<long long>(i)), items[i]}));
      return Value::list(std::move(out));
    }
    if (name == "abs") {
      arity(name, args, 1, 1);
      const Value& v = args[0];
      if (int_like(v)) return Value::integer(std::llabs(int_of(v)));
      if (v.is<double>()) return Value::real(std::fabs(v.as<double>()));
      fault("TypeError",
            std::string("bad operand type for abs(): '") + v.type_name() + "'");
    }
    if (name == "str") {
      arity(name, args, 0, 1);
      if (args.empty()) return Value::text("");
      return Value::text(render_value(args[0], RenderContext::Print));
    }
    if (name == "int") {
      arity(name, args, 0, 1);
      if (args.empty()) return Value::integer(0);
      const Value& v = args[0];
      if (v.is<long long>()) return v;
      if (v.is<bool>()) return Value::integer(v.as<bool>() ? 1 : 0);
      if (v.is<double>())
        return Value::integer(static_cast<long long>(v.as<double>()));
      if (v.is<std::string>()) {
        std::string s = trim(v.as<std::string>());
        try {
          std::size_t used = 0;
          long long parsed = std::stoll(s, &used);
          if (!s.empty() && used == s.size()) return Value::integer(parsed);
        } catch (const std::exception&) {
        }
        fault("ValueError", "invalid literal for int() with base 10: " +
                                repr_quote(v.as<std::string>()));
      }
      fault("TypeError",
            std::string("int() argument must be a string or a number, not '") +
                v.type_name() + "'");
    }
    if (name == "float") {
      arity(name, args, 0, 1);
      if (args.empty()) return Value::real(0.0);
      const Value& v = args[0];
      if (v.is<double>()) return v;
      if (int_like(v)) return Value::real(static_cast<double>(int_of(v)));
      if (v.is<std::string>()) {
        std::string s = trim(v.as<std::string>());
        try {
          std::size_t used = 0;
          double parsed = std::stod(s, &used);
          if (!s.empty() && used == s.size()) return Value::real(parsed);
        } catch (const std::exception&) {
        }
        fault("ValueError", "could not convert string to float: " +
                                repr_quote(v.as<std::string>()));
      }
      fault("TypeError",
            std::string("float() argument must be a string or a number, not '") +
                v.type_name() + "'");
    }
    fault("TypeError", "'" + name + "' is not callable");
  }

  static std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\n\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\n\r");
    return s.substr(b, e - b + 1);
  }

  Value method_call(Value obj, const std::string& attr, std::vector<Value> args) {
    if (obj.is<std::shared_ptr<ListObj>>()) {
      auto& items = obj.as<std::shared_ptr<ListObj>>()->items;
      if (attr == "append") {
        arity("append", args, 1, 1);
        items.push_back(std::move(args[0]));
        return Value::none();
      }
      if (attr == "extend") {
        arity("extend", args, 1, 1);
        std::vector<Value> more = iterate(args[0]);
        items.insert(items.end(), more.begin(), more.end());
        return Value::none();
      }
    }
    if (obj.is<std::shared_ptr<MapObj>>()) {
      const auto& entries = obj.as<std::shared_ptr<MapObj>>()->entries;
      if (attr == "items") {
        arity("items", args, 0, 0);
        std::vector<Value> out;
        out.reserve(entries.size());
        for (const auto& [k, v] : entries) out.push_back(Value::tuple({k, v}));
        return Value::list(std::move(out));
      }
      if (attr == "keys") {
        arity("keys", args, 0, 0);
        std::vector<Value> out;
        for (const auto& [k, _] : entries) out.push_back(k);
        return Value::list(std::move(out));
      }
      if (attr == "values") {
        arity("values", args, 0, 0);
        std::vector<Value> out;
        for (const auto& [_, v] : entries) out.push_back(v);
        return Value::list(std::move(out));
      }
    }
    fault("AttributeError", std::string("'") + obj.type_name() +
                                "' object has no attribute '" + attr + "'");
  }
};

}  // namespace

bool is_builtin_name(const std::string& name) {
  return pure_builtins().count(name) != 0 || context_builtins().count(name) != 0;
}

ExecOutcome evaluate_block(const mlang::Stmt& ast, const Scope& snapshot,
                           CallLedger& ledger) {
  Evaluator evaluator(snapshot, ledger);
  return evaluator.run(ast);
}

}  // namespace llmrepl::interp
