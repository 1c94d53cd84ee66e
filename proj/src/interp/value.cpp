#include "interp/value.hpp"

#include <charconv>
#include <cmath>

#include "mlang/diagnostics.hpp"

namespace llmrepl::interp {

Value* MapObj::find(const Value& key) {
  for (auto& [k, v] : entries)
    if (k.equals(key)) return &v;
  return nullptr;
}

const Value* MapObj::find(const Value& key) const {
  for (const auto& [k, v] : entries)
    if (k.equals(key)) return &v;
  return nullptr;
}

Value Value::list(std::vector<Value> items) {
  auto obj = std::make_shared<ListObj>();
  obj->items = std::move(items);
  return Value(Variant(std::move(obj)));
}

Value Value::map() {
  return Value(Variant(std::make_shared<MapObj>()));
}

Value Value::tuple(std::vector<Value> items) {
  auto obj = std::make_shared<TupleObj>();
  obj->items = std::move(items);
  return Value(Variant(std::move(obj)));
}

const char* Value::type_name() const {
  if (is<NoneT>()) return "NoneType";
  if (is<bool>()) return "bool";
  if (is<long long>()) return "int";
  if (is<double>()) return "float";
  if (is<std::string>()) return "str";
  if (is<std::shared_ptr<ListObj>>()) return "list";
  if (is<std::shared_ptr<MapObj>>()) return "dict";
  if (is<std::shared_ptr<TupleObj>>()) return "tuple";
  if (is<BuiltinRef>()) return "builtin_function_or_method";
  return "LLMREPL";
}

bool Value::truthy() const {
  if (is<NoneT>()) return false;
  if (is<bool>()) return as<bool>();
  if (is<long long>()) return as<long long>() != 0;
  if (is<double>()) return as<double>() != 0.0;
  if (is<std::string>()) return !as<std::string>().empty();
  if (is<std::shared_ptr<ListObj>>())
    return !as<std::shared_ptr<ListObj>>()->items.empty();
  if (is<std::shared_ptr<MapObj>>())
    return !as<std::shared_ptr<MapObj>>()->entries.empty();
  if (is<std::shared_ptr<TupleObj>>())
    return !as<std::shared_ptr<TupleObj>>()->items.empty();
  return true;
}

bool Value::equals(const Value& other) const {
  // bools compare as numbers too (True == 1), matching the source language
  if (is_number() || is<bool>()) {
    if (!(other.is_number() || other.is<bool>())) return false;
    auto num = [](const Value& v) -> double {
      if (v.is<bool>()) return v.as<bool>() ? 1.0 : 0.0;
      return v.as_number();
    };
    return num(*this) == num(other);
  }
  if (is<std::string>())
    return other.is<std::string>() && as<std::string>() == other.as<std::string>();
  if (is<NoneT>()) return other.is<NoneT>();
  if (is<std::shared_ptr<ListObj>>()) {
    if (!other.is<std::shared_ptr<ListObj>>()) return false;
    const auto& a = as<std::shared_ptr<ListObj>>()->items;
    const auto& b = other.as<std::shared_ptr<ListObj>>()->items;
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!a[i].equals(b[i])) return false;
    return true;
  }
  if (is<std::shared_ptr<TupleObj>>()) {
    if (!other.is<std::shared_ptr<TupleObj>>()) return false;
    const auto& a = as<std::shared_ptr<TupleObj>>()->items;
    const auto& b = other.as<std::shared_ptr<TupleObj>>()->items;
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!a[i].equals(b[i])) return false;
    return true;
  }
  if (is<std::shared_ptr<MapObj>>()) {
    if (!other.is<std::shared_ptr<MapObj>>()) return false;
    const auto& a = *as<std::shared_ptr<MapObj>>();
    const auto& b = *other.as<std::shared_ptr<MapObj>>();
    if (a.entries.size() != b.entries.size()) return false;
    for (const auto& [k, v] : a.entries) {
      const Value* bv = b.find(k);
      if (!bv || !v.equals(*bv)) return false;
    }
    return true;
  }
  if (is<BuiltinRef>())
    return other.is<BuiltinRef>() && as<BuiltinRef>() == other.as<BuiltinRef>();
  if (is<ReplFnRef>())
    return other.is<ReplFnRef>() && as<ReplFnRef>() == other.as<ReplFnRef>();
  return false;
}

Value Value::deep_copy() const {
  std::unordered_map<const void*, Value> memo;
  return deep_copy(memo);
}

Value Value::deep_copy(std::unordered_map<const void*, Value>& memo) const {
  if (is<std::shared_ptr<ListObj>>()) {
    const auto& src = as<std::shared_ptr<ListObj>>();
    auto it = memo.find(src.get());
    if (it != memo.end()) return it->second;
    Value copy = Value::list({});
    memo.emplace(src.get(), copy);
    auto& items = copy.as<std::shared_ptr<ListObj>>()->items;
    items.reserve(src->items.size());
    for (const Value& item : src->items) items.push_back(item.deep_copy(memo));
    return copy;
  }
  if (is<std::shared_ptr<MapObj>>()) {
    const auto& src = as<std::shared_ptr<MapObj>>();
    auto it = memo.find(src.get());
    if (it != memo.end()) return it->second;
    Value copy = Value::map();
    memo.emplace(src.get(), copy);
    auto& entries = copy.as<std::shared_ptr<MapObj>>()->entries;
    entries.reserve(src->entries.size());
    for (const auto& [k, v] : src->entries)
      entries.emplace_back(k.deep_copy(memo), v.deep_copy(memo));
    return copy;
  }
  if (is<std::shared_ptr<TupleObj>>()) {
    const auto& src = as<std::shared_ptr<TupleObj>>();
    auto it = memo.find(src.get());
    if (it != memo.end()) return it->second;
    std::vector<Value> items;
    items.reserve(src->items.size());
    for (const Value& item : src->items) items.push_back(item.deep_copy(memo));
    Value copy = Value::tuple(std::move(items));
    memo.emplace(src.get(), copy);
    return copy;
  }
  return *this;  // scalars and handles are immutable
}

std::string render_float(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  std::string s(buf, ptr);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string render_repr(const Value& v) {
  if (v.is<NoneT>()) return "None";
  if (v.is<bool>()) return v.as<bool>() ? "True" : "False";
  if (v.is<long long>()) return std::to_string(v.as<long long>());
  if (v.is<double>()) return render_float(v.as<double>());
  if (v.is<std::string>()) return mlang::repr_quote(v.as<std::string>());
  if (v.is<std::shared_ptr<ListObj>>()) {
    std::string out = "[";
    const auto& items = v.as<std::shared_ptr<ListObj>>()->items;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += render_repr(items[i]);
    }
    return out + "]";
  }
  if (v.is<std::shared_ptr<TupleObj>>()) {
    const auto& items = v.as<std::shared_ptr<TupleObj>>()->items;
    std::string out = "(";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += render_repr(items[i]);
    }
    if (items.size() == 1) out += ",";
    return out + ")";
  }
  if (v.is<std::shared_ptr<MapObj>>()) {
    std::string out = "{";
    const auto& entries = v.as<std::shared_ptr<MapObj>>()->entries;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (i) out += ", ";
      out += render_repr(entries[i].first) + ": " + render_repr(entries[i].second);
    }
    return out + "}";
  }
  if (v.is<BuiltinRef>())
    return "<built-in function " + v.as<BuiltinRef>().name + ">";
  return "<LLMREPL " + v.as<ReplFnRef>().name + ">";
}

std::string render_value(const Value& v, RenderContext context) {
  if (context == RenderContext::Print && v.is<std::string>())
    return v.as<std::string>();
  if (context == RenderContext::ReplEcho && v.is<NoneT>()) return "";
  return render_repr(v);
}

bool value_key_ok(const Value& v) {
  return v.is<std::string>() || v.is<long long>() || v.is<double>() ||
         v.is<bool>();
}

}  // namespace llmrepl::interp
