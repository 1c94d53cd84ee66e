#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace llmrepl::interp {

class Value;

struct ListObj {
  std::vector<Value> items;
};

// Insertion-ordered mapping with scalar keys (text/int/float/bool).
struct MapObj {
  std::vector<std::pair<Value, Value>> entries;
  Value* find(const Value& key);
  const Value* find(const Value& key) const;
};

struct TupleObj {
  std::vector<Value> items;
};

struct BuiltinRef {
  std::string name;
  bool operator==(const BuiltinRef& o) const { return name == o.name; }
};

// Handle to a named LLM-REPL; equal iff the names are equal.
struct ReplFnRef {
  std::string name;
  bool operator==(const ReplFnRef& o) const { return name == o.name; }
};

struct NoneT {
  bool operator==(const NoneT&) const { return true; }
};

class Value {
 public:
  using Variant =
      std::variant<NoneT, bool, long long, double, std::string,
                   std::shared_ptr<ListObj>, std::shared_ptr<MapObj>,
                   std::shared_ptr<TupleObj>, BuiltinRef, ReplFnRef>;

  Value() : v_(NoneT{}) {}
  static Value none() { return Value(); }
  static Value boolean(bool b) { return Value(Variant(b)); }
  static Value integer(long long i) { return Value(Variant(i)); }
  static Value real(double d) { return Value(Variant(d)); }
  static Value text(std::string s) { return Value(Variant(std::move(s))); }
  static Value list(std::vector<Value> items);
  static Value map();
  static Value tuple(std::vector<Value> items);
  static Value builtin(std::string name) {
    return Value(Variant(BuiltinRef{std::move(name)}));
  }
  static Value repl_fn(std::string name) {
    return Value(Variant(ReplFnRef{std::move(name)}));
  }

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(v_);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(v_);
  }
  template <class T>
  T& as() {
    return std::get<T>(v_);
  }
  const Variant& raw() const { return v_; }

  bool is_none() const { return is<NoneT>(); }
  bool is_number() const { return is<long long>() || is<double>(); }
  double as_number() const {
    return is<long long>() ? static_cast<double>(as<long long>()) : as<double>();
  }

  // Python-like type name used in diagnostics: 'int', 'str', 'list',
  // 'dict', 'tuple', 'bool', 'float', 'NoneType', 'LLMREPL'.
  const char* type_name() const;

  bool truthy() const;

  // Structural equality; ints and floats compare numerically.
  bool equals(const Value& other) const;

  // Deep copy preserving aliasing between shared mutable objects.
  Value deep_copy() const;
  Value deep_copy(std::unordered_map<const void*, Value>& memo) const;

 private:
  explicit Value(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// Rendering context: a REPL echo quotes text values, print shows them bare.
enum class RenderContext { ReplEcho, Print };

std::string render_value(const Value& v, RenderContext context);

// repr-style rendering (always quoted texts), used inside containers.
std::string render_repr(const Value& v);

// Shortest round-trip decimal for floats, with ".0" on integral values.
std::string render_float(double d);

bool value_key_ok(const Value& v);  // valid mapping key?

}  // namespace llmrepl::interp
