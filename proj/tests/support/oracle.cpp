#include "support/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "interp/evaluator.hpp"
#include "mlang/parser.hpp"

namespace oracle {

namespace {

using namespace llmrepl::mlang;
using llmrepl::interp::ListObj;
using llmrepl::interp::MapObj;
using llmrepl::interp::RenderContext;
using llmrepl::interp::render_repr;
using llmrepl::interp::render_value;
using llmrepl::interp::TupleObj;

using Bindings = std::map<std::string, Value>;

struct BreakSig {};
struct ContinueSig {};
struct AnswerSig {
  Value value;
};

bool truthy(const Value& v) {
  if (v.is<llmrepl::interp::NoneT>()) return false;
  if (v.is<bool>()) return v.as<bool>();
  if (v.is<long long>()) return v.as<long long>() != 0;
  if (v.is<double>()) return v.as<double>() != 0.0;
  if (v.is<std::string>()) return !v.as<std::string>().empty();
  if (v.is<std::shared_ptr<ListObj>>())
    return !v.as<std::shared_ptr<ListObj>>()->items.empty();
  if (v.is<std::shared_ptr<TupleObj>>())
    return !v.as<std::shared_ptr<TupleObj>>()->items.empty();
  if (v.is<std::shared_ptr<MapObj>>())
    return !v.as<std::shared_ptr<MapObj>>()->entries.empty();
  return true;
}

double num(const Value& v) {
  if (v.is<bool>()) return v.as<bool>() ? 1 : 0;
  if (v.is<long long>()) return static_cast<double>(v.as<long long>());
  if (v.is<double>()) return v.as<double>();
  throw OracleFault("not a number");
}

bool is_int_like(const Value& v) { return v.is<bool>() || v.is<long long>(); }
long long int_val(const Value& v) {
  return v.is<bool>() ? (v.as<bool>() ? 1 : 0) : v.as<long long>();
}

bool equals(const Value& a, const Value& b);

bool seq_equals(const std::vector<Value>& a, const std::vector<Value>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equals(a[i], b[i])) return false;
  return true;
}

bool equals(const Value& a, const Value& b) {
  bool a_num = a.is_number() || a.is<bool>();
  bool b_num = b.is_number() || b.is<bool>();
  if (a_num || b_num) return a_num && b_num && num(a) == num(b);
  if (a.is<std::string>() && b.is<std::string>())
    return a.as<std::string>() == b.as<std::string>();
  if (a.is<llmrepl::interp::NoneT>()) return b.is<llmrepl::interp::NoneT>();
  if (a.is<std::shared_ptr<ListObj>>() && b.is<std::shared_ptr<ListObj>>())
    return seq_equals(a.as<std::shared_ptr<ListObj>>()->items,
                      b.as<std::shared_ptr<ListObj>>()->items);
  if (a.is<std::shared_ptr<TupleObj>>() && b.is<std::shared_ptr<TupleObj>>())
    return seq_equals(a.as<std::shared_ptr<TupleObj>>()->items,
                      b.as<std::shared_ptr<TupleObj>>()->items);
  if (a.is<std::shared_ptr<MapObj>>() && b.is<std::shared_ptr<MapObj>>()) {
    const auto& am = *a.as<std::shared_ptr<MapObj>>();
    const auto& bm = *b.as<std::shared_ptr<MapObj>>();
    if (am.entries.size() != bm.entries.size()) return false;
    for (const auto& [k, v] : am.entries) {
      bool found = false;
      for (const auto& [k2, v2] : bm.entries)
        if (equals(k, k2) && equals(v, v2)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  }
  if (a.is<llmrepl::interp::ReplFnRef>() && b.is<llmrepl::interp::ReplFnRef>())
    return a.as<llmrepl::interp::ReplFnRef>().name ==
           b.as<llmrepl::interp::ReplFnRef>().name;
  return false;
}

bool less(const Value& a, const Value& b) {
  bool a_num = a.is_number() || a.is<bool>();
  bool b_num = b.is_number() || b.is<bool>();
  if (a_num && b_num) return num(a) < num(b);
  if (a.is<std::string>() && b.is<std::string>())
    return a.as<std::string>() < b.as<std::string>();
  const std::vector<Value>* x = nullptr;
  const std::vector<Value>* y = nullptr;
  if (a.is<std::shared_ptr<ListObj>>() && b.is<std::shared_ptr<ListObj>>()) {
    x = &a.as<std::shared_ptr<ListObj>>()->items;
    y = &b.as<std::shared_ptr<ListObj>>()->items;
  } else if (a.is<std::shared_ptr<TupleObj>>() &&
             b.is<std::shared_ptr<TupleObj>>()) {
    x = &a.as<std::shared_ptr<TupleObj>>()->items;
    y = &b.as<std::shared_ptr<TupleObj>>()->items;
  }
  if (x && y) {
    std::size_t n = std::min(x->size(), y->size());
    for (std::size_t i = 0; i < n; ++i) {
      if (less((*x)[i], (*y)[i])) return true;
      if (less((*y)[i], (*x)[i])) return false;
    }
    return x->size() < y->size();
  }
  throw OracleFault("unorderable types");
}

std::vector<Value> iterate(const Value& v) {
  if (v.is<std::shared_ptr<ListObj>>())
    return v.as<std::shared_ptr<ListObj>>()->items;
  if (v.is<std::shared_ptr<TupleObj>>())
    return v.as<std::shared_ptr<TupleObj>>()->items;
  if (v.is<std::string>()) {
    std::vector<Value> out;
    for (char c : v.as<std::string>())
      out.push_back(Value::text(std::string(1, c)));
    return out;
  }
  if (v.is<std::shared_ptr<MapObj>>()) {
    std::vector<Value> keys;
    for (const auto& [k, _] : v.as<std::shared_ptr<MapObj>>()->entries)
      keys.push_back(k);
    return keys;
  }
  throw OracleFault("not iterable");
}

struct Kernel;

struct Ctx {
  Bindings* vars;
  Kernel* kernel;
  std::string repl;
};

struct ReplState {
  const Program* program = nullptr;
  Bindings vars;
  std::size_t cursor = 0;
  Value invocation_args;
};

struct Kernel {
  const World* world = nullptr;
  std::vector<AbstractEffect> effects;
  std::map<std::string, ReplState> repls;
  int actions = 0;

  std::string latest_obs() const { return world->obs_at(actions); }

  Value call_child(const std::string& name, std::vector<Value> args);
};

Value eval(const Expr& e, Ctx& ctx);
void exec(const Stmt& s, Ctx& ctx);
Value call_builtin(const std::string& name, std::vector<Value> args, Ctx& ctx);

Value eval_name(const std::string& id, Ctx& ctx) {
  auto it = ctx.vars->find(id);
  if (it != ctx.vars->end()) return it->second;
  if (llmrepl::interp::is_builtin_name(id)) return Value::builtin(id);
  throw OracleFault("undefined name " + id);
}

std::vector<Value> eval_args(const std::vector<ExprPtr>& args, Ctx& ctx) {
  std::vector<Value> out;
  for (const auto& a : args) out.push_back(eval(*a, ctx));
  return out;
}

Value subscript(const Value& obj, const Value& idx) {
  auto pick = [&](const std::vector<Value>& items) {
    if (!is_int_like(idx)) throw OracleFault("bad index");
    long long i = int_val(idx);
    if (i < 0) i += static_cast<long long>(items.size());
    if (i < 0 || i >= static_cast<long long>(items.size()))
      throw OracleFault("index out of range");
    return items[static_cast<std::size_t>(i)];
  };
  if (obj.is<std::shared_ptr<ListObj>>())
    return pick(obj.as<std::shared_ptr<ListObj>>()->items);
  if (obj.is<std::shared_ptr<TupleObj>>())
    return pick(obj.as<std::shared_ptr<TupleObj>>()->items);
  if (obj.is<std::string>()) {
    const std::string& s = obj.as<std::string>();
    if (!is_int_like(idx)) throw OracleFault("bad index");
    long long i = int_val(idx);
    if (i < 0) i += static_cast<long long>(s.size());
    if (i < 0 || i >= static_cast<long long>(s.size()))
      throw OracleFault("index out of range");
    return Value::text(std::string(1, s[static_cast<std::size_t>(i)]));
  }
  if (obj.is<std::shared_ptr<MapObj>>()) {
    for (const auto& [k, v] : obj.as<std::shared_ptr<MapObj>>()->entries)
      if (equals(k, idx)) return v;
    throw OracleFault("key error");
  }
  throw OracleFault("not subscriptable");
}

Value binop(BinOp op, const Value& a, const Value& b) {
  if (op == BinOp::Add) {
    if (a.is<std::string>() && b.is<std::string>())
      return Value::text(a.as<std::string>() + b.as<std::string>());
    if (a.is<std::shared_ptr<ListObj>>() && b.is<std::shared_ptr<ListObj>>()) {
      std::vector<Value> items = a.as<std::shared_ptr<ListObj>>()->items;
      for (const Value& v : b.as<std::shared_ptr<ListObj>>()->items)
        items.push_back(v);
      return Value::list(std::move(items));
    }
  }
  if (op == BinOp::Div) {
    double d = num(b);
    if (d == 0.0) throw OracleFault("division by zero");
    return Value::real(num(a) / d);
  }
  if (is_int_like(a) && is_int_like(b)) {
    long long x = int_val(a), y = int_val(b);
    switch (op) {
      case BinOp::Add: return Value::integer(x + y);
      case BinOp::Sub: return Value::integer(x - y);
      case BinOp::Mul: return Value::integer(x * y);
      default: break;
    }
  }
  double x = num(a), y = num(b);
  switch (op) {
    case BinOp::Add: return Value::real(x + y);
    case BinOp::Sub: return Value::real(x - y);
    case BinOp::Mul: return Value::real(x * y);
    default: break;
  }
  throw OracleFault("bad binop");
}

bool membership(const Value& needle, const Value& hay) {
  if (hay.is<std::string>()) {
    if (!needle.is<std::string>()) throw OracleFault("bad membership");
    return hay.as<std::string>().find(needle.as<std::string>()) !=
           std::string::npos;
  }
  for (const Value& item : iterate(hay))
    if (equals(item, needle)) return true;
  return false;
}

Value eval(const Expr& e, Ctx& ctx) {
  return std::visit(
      [&](const auto& node) -> Value {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, NameExpr>) {
          return eval_name(node.id, ctx);
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
              out += render_value(eval(*piece.expr, ctx), RenderContext::Print);
          }
          return Value::text(out);
        } else if constexpr (std::is_same_v<T, ListExpr>) {
          std::vector<Value> items;
          for (const auto& item : node.items) items.push_back(eval(*item, ctx));
          return Value::list(std::move(items));
        } else if constexpr (std::is_same_v<T, TupleExpr>) {
          std::vector<Value> items;
          for (const auto& item : node.items) items.push_back(eval(*item, ctx));
          return Value::tuple(std::move(items));
        } else if constexpr (std::is_same_v<T, MapExpr>) {
          Value map = Value::map();
          auto& entries = map.as<std::shared_ptr<MapObj>>()->entries;
          for (const auto& [k, v] : node.items) {
            Value key = eval(*k, ctx);
            Value value = eval(*v, ctx);
            bool replaced = false;
            for (auto& [k2, v2] : entries)
              if (equals(k2, key)) {
                v2 = value;
                replaced = true;
                break;
              }
            if (!replaced) entries.emplace_back(key, value);
          }
          return map;
        } else if constexpr (std::is_same_v<T, CompExpr>) {
          Value iterable = eval(*node.iterable, ctx);
          std::vector<Value> out;
          for (const Value& item : iterate(iterable)) {
            if (node.names.size() == 1) {
              (*ctx.vars)[node.names[0]] = item;
            } else {
              std::vector<Value> parts = iterate(item);
              if (parts.size() != node.names.size())
                throw OracleFault("unpack mismatch");
              for (std::size_t i = 0; i < parts.size(); ++i)
                (*ctx.vars)[node.names[i]] = parts[i];
            }
            if (node.cond && !truthy(eval(*node.cond, ctx))) continue;
            out.push_back(eval(*node.element, ctx));
          }
          return Value::list(std::move(out));
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          Value v = eval(*node.operand, ctx);
          if (node.op == UnOp::Not) return Value::boolean(!truthy(v));
          if (node.op == UnOp::Neg) {
            if (is_int_like(v)) return Value::integer(-int_val(v));
            return Value::real(-num(v));
          }
          if (is_int_like(v)) return Value::integer(int_val(v));
          return Value::real(num(v));
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          Value a = eval(*node.lhs, ctx);
          Value b = eval(*node.rhs, ctx);
          return binop(node.op, a, b);
        } else if constexpr (std::is_same_v<T, BoolExpr>) {
          Value current;
          for (const auto& operand : node.operands) {
            current = eval(*operand, ctx);
            bool t = truthy(current);
            if (node.op == BoolOpKind::And && !t) return current;
            if (node.op == BoolOpKind::Or && t) return current;
          }
          return current;
        } else if constexpr (std::is_same_v<T, CompareExpr>) {
          Value lhs = eval(*node.first, ctx);
          for (const auto& [op, rhs_expr] : node.rest) {
            Value rhs = eval(*rhs_expr, ctx);
            bool ok = false;
            switch (op) {
              case CmpOp::Eq: ok = equals(lhs, rhs); break;
              case CmpOp::Ne: ok = !equals(lhs, rhs); break;
              case CmpOp::Lt: ok = less(lhs, rhs); break;
              case CmpOp::Gt: ok = less(rhs, lhs); break;
              case CmpOp::Le: ok = !less(rhs, lhs); break;
              case CmpOp::Ge: ok = !less(lhs, rhs); break;
              case CmpOp::In: ok = membership(lhs, rhs); break;
              case CmpOp::NotIn: ok = !membership(lhs, rhs); break;
            }
            if (!ok) return Value::boolean(false);
            lhs = rhs;
          }
          return Value::boolean(true);
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          if (is<AttrExpr>(*node.callee)) {
            const auto& attr = as<AttrExpr>(*node.callee);
            Value obj = eval(*attr.object, ctx);
            std::vector<Value> args = eval_args(node.args, ctx);
            if (obj.is<std::shared_ptr<ListObj>>()) {
              auto& items = obj.as<std::shared_ptr<ListObj>>()->items;
              if (attr.attr == "append" && args.size() == 1) {
                items.push_back(args[0]);
                return Value::none();
              }
              if (attr.attr == "extend" && args.size() == 1) {
                for (const Value& v : iterate(args[0])) items.push_back(v);
                return Value::none();
              }
            }
            if (obj.is<std::shared_ptr<MapObj>>()) {
              const auto& entries = obj.as<std::shared_ptr<MapObj>>()->entries;
              if (attr.attr == "items") {
                std::vector<Value> out;
                for (const auto& [k, v] : entries)
                  out.push_back(Value::tuple({k, v}));
                return Value::list(std::move(out));
              }
              if (attr.attr == "keys") {
                std::vector<Value> out;
                for (const auto& [k, _] : entries) out.push_back(k);
                return Value::list(std::move(out));
              }
              if (attr.attr == "values") {
                std::vector<Value> out;
                for (const auto& [_, v] : entries) out.push_back(v);
                return Value::list(std::move(out));
              }
            }
            throw OracleFault("bad method " + attr.attr);
          }
          if (is<NameExpr>(*node.callee)) {
            const std::string& id = as<NameExpr>(*node.callee).id;
            auto bound = ctx.vars->find(id);
            if (bound != ctx.vars->end() &&
                bound->second.is<llmrepl::interp::ReplFnRef>()) {
              std::vector<Value> args = eval_args(node.args, ctx);
              if (!ctx.kernel) throw OracleFault("context call in pure eval");
              return ctx.kernel->call_child(
                  bound->second.as<llmrepl::interp::ReplFnRef>().name,
                  std::move(args));
            }
            if (bound == ctx.vars->end() &&
                !llmrepl::interp::is_builtin_name(id)) {
              std::vector<Value> args = eval_args(node.args, ctx);
              if (!ctx.kernel) throw OracleFault("context call in pure eval");
              (*ctx.vars)[id] = Value::repl_fn(id);
              return ctx.kernel->call_child(id, std::move(args));
            }
            std::vector<Value> args = eval_args(node.args, ctx);
            return call_builtin(id, std::move(args), ctx);
          }
          Value callee = eval(*node.callee, ctx);
          std::vector<Value> args = eval_args(node.args, ctx);
          if (callee.is<llmrepl::interp::ReplFnRef>()) {
            if (!ctx.kernel) throw OracleFault("context call in pure eval");
            return ctx.kernel->call_child(
                callee.as<llmrepl::interp::ReplFnRef>().name, std::move(args));
          }
          if (callee.is<llmrepl::interp::BuiltinRef>())
            return call_builtin(callee.as<llmrepl::interp::BuiltinRef>().name,
                                std::move(args), ctx);
          throw OracleFault("not callable");
        } else if constexpr (std::is_same_v<T, AttrExpr>) {
          throw OracleFault("attribute access without call");
        } else if constexpr (std::is_same_v<T, IndexExpr>) {
          Value obj = eval(*node.object, ctx);
          Value idx = eval(*node.index, ctx);
          return subscript(obj, idx);
        }
      },
      e.node);
}

Value call_builtin(const std::string& name, std::vector<Value> args, Ctx& ctx) {
  if (name == "print") {
    std::string text;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) text += ' ';
      text += render_value(args[i], RenderContext::Print);
    }
    if (!ctx.kernel) throw OracleFault("print in pure eval");
    ctx.kernel->effects.push_back({"stdout", ctx.repl, text});
    return Value::none();
  }
  if (name == "act") {
    if (!ctx.kernel) throw OracleFault("act in pure eval");
    std::string action = render_value(args.at(0), RenderContext::Print);
    ctx.kernel->effects.push_back({"act", ctx.repl, action});
    ctx.kernel->actions += 1;
    return Value::none();
  }
  if (name == "answer") throw AnswerSig{args.at(0).deep_copy()};
  if (name == "get_obs") {
    if (!ctx.kernel) throw OracleFault("get_obs in pure eval");
    return Value::text(ctx.kernel->latest_obs());
  }
  if (name == "get_args") {
    if (!ctx.kernel) throw OracleFault("get_args in pure eval");
    return ctx.kernel->repls.at(ctx.repl).invocation_args.deep_copy();
  }
  if (name == "print_page") {
    if (!ctx.kernel) throw OracleFault("print_page in pure eval");
    ctx.kernel->effects.push_back(
        {"stdout", ctx.repl, ctx.kernel->latest_obs()});
    return Value::none();
  }
  if (name == "len") {
    const Value& v = args.at(0);
    if (v.is<std::string>())
      return Value::integer(static_cast<long long>(v.as<std::string>().size()));
    if (v.is<std::shared_ptr<MapObj>>())
      return Value::integer(static_cast<long long>(
          v.as<std::shared_ptr<MapObj>>()->entries.size()));
    return Value::integer(static_cast<long long>(iterate(v).size()));
  }
  if (name == "range") {
    long long start = 0, stop = 0, step = 1;
    if (args.size() == 1) {
      stop = int_val(args.at(0));
    } else {
      start = int_val(args.at(0));
      stop = int_val(args.at(1));
      if (args.size() == 3) step = int_val(args.at(2));
    }
    if (step == 0) throw OracleFault("zero step");
    std::vector<Value> items;
    for (long long i = start; step > 0 ? i < stop : i > stop; i += step)
      items.push_back(Value::integer(i));
    return Value::list(std::move(items));
  }
  if (name == "max" || name == "min") {
    std::vector<Value> pool =
        args.size() == 1 ? iterate(args.at(0)) : std::move(args);
    if (pool.empty()) throw OracleFault("empty sequence");
    Value best = pool[0];
    for (std::size_t i = 1; i < pool.size(); ++i) {
      bool better = name == "max" ? less(best, pool[i]) : less(pool[i], best);
      if (better) best = pool[i];
    }
    return best;
  }
  if (name == "sorted") {
    std::vector<Value> items = iterate(args.at(0));
    std::stable_sort(items.begin(), items.end(),
                     [](const Value& a, const Value& b) { return less(a, b); });
    return Value::list(std::move(items));
  }
  if (name == "enumerate") {
    std::vector<Value> items = iterate(args.at(0));
    std::vector<Value> out;
    for (std::size_t i = 0; i < items.size(); ++i)
      out.push_back(
          Value::tuple({Value::integer(static_cast<long long>(i)), items[i]}));
    return Value::list(std::move(out));
  }
  if (name == "abs") {
    const Value& v = args.at(0);
    if (is_int_like(v)) return Value::integer(std::llabs(int_val(v)));
    return Value::real(std::fabs(num(v)));
  }
  if (name == "str")
    return Value::text(render_value(args.at(0), RenderContext::Print));
  if (name == "int") {
    const Value& v = args.at(0);
    if (v.is<long long>()) return v;
    if (v.is<bool>()) return Value::integer(int_val(v));
    if (v.is<double>())
      return Value::integer(static_cast<long long>(v.as<double>()));
    if (v.is<std::string>())
      return Value::integer(std::stoll(v.as<std::string>()));
    throw OracleFault("bad int()");
  }
  if (name == "float") {
    const Value& v = args.at(0);
    if (v.is<double>()) return v;
    if (is_int_like(v)) return Value::real(static_cast<double>(int_val(v)));
    if (v.is<std::string>()) return Value::real(std::stod(v.as<std::string>()));
    throw OracleFault("bad float()");
  }
  throw OracleFault("unknown builtin " + name);
}

void assign_target(const Target& target, Value v, Ctx& ctx) {
  switch (target.kind) {
    case Target::Kind::Name:
      (*ctx.vars)[target.name] = std::move(v);
      return;
    case Target::Kind::Tuple: {
      std::vector<Value> parts = iterate(v);
      if (parts.size() != target.names.size())
        throw OracleFault("unpack mismatch");
      for (std::size_t i = 0; i < parts.size(); ++i)
        (*ctx.vars)[target.names[i]] = parts[i];
      return;
    }
    case Target::Kind::Index: {
      Value obj = eval(*target.object, ctx);
      Value idx = eval(*target.index, ctx);
      if (obj.is<std::shared_ptr<ListObj>>()) {
        auto& items = obj.as<std::shared_ptr<ListObj>>()->items;
        long long i = int_val(idx);
        if (i < 0) i += static_cast<long long>(items.size());
        if (i < 0 || i >= static_cast<long long>(items.size()))
          throw OracleFault("index out of range");
        items[static_cast<std::size_t>(i)] = std::move(v);
        return;
      }
      if (obj.is<std::shared_ptr<MapObj>>()) {
        auto& entries = obj.as<std::shared_ptr<MapObj>>()->entries;
        for (auto& [k, slot] : entries)
          if (equals(k, idx)) {
            slot = std::move(v);
            return;
          }
        entries.emplace_back(std::move(idx), std::move(v));
        return;
      }
      throw OracleFault("bad index assignment");
    }
    case Target::Kind::Attr:
      throw OracleFault("attribute assignment");
  }
}

void exec_body(const std::vector<StmtPtr>& body, Ctx& ctx) {
  for (const StmtPtr& s : body) exec(*s, ctx);
}

void exec(const Stmt& s, Ctx& ctx) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, AssignStmt>) {
          Value v = eval(*node.value, ctx);
          assign_target(node.target, std::move(v), ctx);
        } else if constexpr (std::is_same_v<T, AugAssignStmt>) {
          if (node.target.kind == Target::Kind::Name) {
            Value cur = eval_name(node.target.name, ctx);
            Value rhs = eval(*node.value, ctx);
            (*ctx.vars)[node.target.name] = binop(node.op, cur, rhs);
          } else {
            Value obj = eval(*node.target.object, ctx);
            Value idx = eval(*node.target.index, ctx);
            Value cur = subscript(obj, idx);
            Value rhs = eval(*node.value, ctx);
            Value result = binop(node.op, cur, rhs);
            if (obj.is<std::shared_ptr<ListObj>>()) {
              auto& items = obj.as<std::shared_ptr<ListObj>>()->items;
              long long i = int_val(idx);
              if (i < 0) i += static_cast<long long>(items.size());
              items[static_cast<std::size_t>(i)] = std::move(result);
            } else if (obj.is<std::shared_ptr<MapObj>>()) {
              for (auto& [k, slot] : obj.as<std::shared_ptr<MapObj>>()->entries)
                if (equals(k, idx)) slot = std::move(result);
            }
          }
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          eval(*node.value, ctx);
        } else if constexpr (std::is_same_v<T, ForStmt>) {
          Value iterable = eval(*node.iterable, ctx);
          for (const Value& item : iterate(iterable)) {
            if (node.names.size() == 1) {
              (*ctx.vars)[node.names[0]] = item;
            } else {
              std::vector<Value> parts = iterate(item);
              if (parts.size() != node.names.size())
                throw OracleFault("unpack mismatch");
              for (std::size_t i = 0; i < parts.size(); ++i)
                (*ctx.vars)[node.names[i]] = parts[i];
            }
            try {
              exec_body(node.body, ctx);
            } catch (const BreakSig&) {
              break;
            } catch (const ContinueSig&) {
              continue;
            }
          }
        } else if constexpr (std::is_same_v<T, WhileTrueStmt>) {
          while (true) {
            try {
              exec_body(node.body, ctx);
            } catch (const BreakSig&) {
              break;
            } catch (const ContinueSig&) {
              continue;
            }
          }
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          for (const auto& arm : node.arms) {
            if (!arm.cond || truthy(eval(*arm.cond, ctx))) {
              exec_body(arm.body, ctx);
              break;
            }
          }
        } else if constexpr (std::is_same_v<T, BreakStmt>) {
          throw BreakSig{};
        } else if constexpr (std::is_same_v<T, ContinueStmt>) {
          throw ContinueSig{};
        } else if constexpr (std::is_same_v<T, CommentStmt>) {
        }
      },
      s.node);
}

const Stmt& parse_or_die(const std::string& block,
                         llmrepl::mlang::ParseResult& slot) {
  slot = parse_block(block);
  if (auto* diag = std::get_if<SyntaxDiagnostic>(&slot))
    throw OracleFault("oracle parse failure: " + diag->message());
  return *std::get<StmtPtr>(slot);
}

Value Kernel::call_child(const std::string& name, std::vector<Value> args) {
  auto it = repls.find(name);
  if (it == repls.end()) throw OracleFault("unknown child program " + name);
  ReplState& state = it->second;
  effects.push_back({"spawn", name, ""});
  if (args.empty()) {
    state.invocation_args = Value::none();
  } else if (args.size() == 1) {
    state.invocation_args = args[0].deep_copy();
  } else {
    std::vector<Value> items;
    for (Value& a : args) items.push_back(a.deep_copy());
    state.invocation_args = Value::tuple(std::move(items));
  }
  Ctx ctx{&state.vars, this, name};
  while (state.cursor < state.program->blocks.size()) {
    llmrepl::mlang::ParseResult slot;
    const Stmt& stmt = parse_or_die(state.program->blocks[state.cursor], slot);
    ++state.cursor;
    try {
      exec(stmt, ctx);
    } catch (AnswerSig& answer) {
      effects.push_back({"answer", name, render_repr(answer.value)});
      return answer.value.deep_copy();
    }
  }
  throw OracleFault("child program " + name + " ran out of blocks");
}

}  // namespace

std::string render_effects(const std::vector<AbstractEffect>& effects) {
  std::string out;
  for (const AbstractEffect& e : effects)
    out += e.kind + " | " + e.repl + " | " + e.payload + "\n";
  return out;
}

Value eval_pure(const llmrepl::mlang::Expr& expr,
                const std::map<std::string, Value>& bindings) {
  Bindings vars = bindings;
  Ctx ctx{&vars, nullptr, ""};
  return eval(expr, ctx);
}

std::vector<AbstractEffect> run_world(const World& world) {
  Kernel kernel;
  kernel.world = &world;
  for (const Program& p : world.programs) {
    ReplState state;
    state.program = &p;
    kernel.repls.emplace(p.name, std::move(state));
  }
  const Program& root = world.programs.front();
  ReplState& root_state = kernel.repls.at(root.name);
  Ctx ctx{&root_state.vars, &kernel, root.name};
  while (root_state.cursor < root.blocks.size()) {
    llmrepl::mlang::ParseResult slot;
    const Stmt& stmt = parse_or_die(root.blocks[root_state.cursor], slot);
    ++root_state.cursor;
    try {
      exec(stmt, ctx);
    } catch (AnswerSig& answer) {
      kernel.effects.push_back(
          {"answer", root.name, render_repr(answer.value)});
      break;
    }
  }
  return kernel.effects;
}

}  // namespace oracle
