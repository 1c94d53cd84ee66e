#include <doctest.h>

#include "interp/value.hpp"

using namespace llmrepl::interp;

TEST_CASE("render: repl echo quotes text, print leaves it bare") {
  Value v = Value::text("no options found.");
  CHECK(render_value(v, RenderContext::ReplEcho) == "'no options found.'");
  CHECK(render_value(v, RenderContext::Print) == "no options found.");
}

TEST_CASE("render: list of texts uses single quotes and comma-space") {
  Value v = Value::list({Value::text("noise cancelling"), Value::text("cosycost"),
                         Value::text("usb microphone")});
  CHECK(render_value(v, RenderContext::Print) ==
        "['noise cancelling', 'cosycost', 'usb microphone']");
}

TEST_CASE("render: None suppressed in repl echo, shown by print") {
  CHECK(render_value(Value::none(), RenderContext::ReplEcho) == "");
  CHECK(render_value(Value::none(), RenderContext::Print) == "None");
}

TEST_CASE("render: floats round-trip shortest, integral values keep .0") {
  CHECK(render_float(32.99) == "32.99");
  CHECK(render_float(70.0) == "70.0");
  CHECK(render_float(0.1) == "0.1");
}

TEST_CASE("render: quoting flips to double quotes around apostrophes") {
  CHECK(render_value(Value::text("it's"), RenderContext::ReplEcho) ==
        "\"it's\"");
}

TEST_CASE("render: tuples and mappings") {
  Value t = Value::tuple({Value::text("a"), Value::integer(1)});
  CHECK(render_repr(t) == "('a', 1)");
  Value single = Value::tuple({Value::integer(7)});
  CHECK(render_repr(single) == "(7,)");
  Value m = Value::map();
  m.as<std::shared_ptr<MapObj>>()->entries.emplace_back(Value::text("A"),
                                                        Value::integer(1));
  m.as<std::shared_ptr<MapObj>>()->entries.emplace_back(Value::text("B"),
                                                        Value::integer(3));
  CHECK(render_repr(m) == "{'A': 1, 'B': 3}");
}

TEST_CASE("equality: ints and floats compare numerically") {
  CHECK(Value::integer(3).equals(Value::real(3.0)));
  CHECK_FALSE(Value::integer(3).equals(Value::real(3.5)));
  CHECK_FALSE(Value::integer(3).equals(Value::text("3")));
}

TEST_CASE("equality: repl handles compare by name") {
  CHECK(Value::repl_fn("f").equals(Value::repl_fn("f")));
  CHECK_FALSE(Value::repl_fn("f").equals(Value::repl_fn("g")));
}

TEST_CASE("deep copy preserves aliasing between bindings") {
  Value shared = Value::list({Value::integer(1)});
  Value holder = Value::list({shared, shared});
  Value copy = holder.deep_copy();
  auto& items = copy.as<std::shared_ptr<ListObj>>()->items;
  REQUIRE(items.size() == 2);
  // both elements must point at the same copied list
  CHECK(items[0].as<std::shared_ptr<ListObj>>().get() ==
        items[1].as<std::shared_ptr<ListObj>>().get());
  // and mutating the copy must not touch the original
  items[0].as<std::shared_ptr<ListObj>>()->items.push_back(Value::integer(2));
  CHECK(shared.as<std::shared_ptr<ListObj>>()->items.size() == 1);
}

TEST_CASE("truthiness") {
  CHECK_FALSE(Value::none().truthy());
  CHECK_FALSE(Value::text("").truthy());
  CHECK(Value::text("x").truthy());
  CHECK_FALSE(Value::list({}).truthy());
  CHECK(Value::integer(-1).truthy());
  CHECK_FALSE(Value::real(0.0).truthy());
}
