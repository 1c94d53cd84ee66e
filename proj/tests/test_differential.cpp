#include <doctest.h>

#include <cmath>
#include <random>

#include "interp/evaluator.hpp"
#include "mlang/parser.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace llmrepl;

namespace {

// Rough value comparison: exact for ints/texts/bools, relative 1e-12 for
// floats, recursive for containers.
bool close(const interp::Value& a, const interp::Value& b);

bool close_seq(const std::vector<interp::Value>& x,
               const std::vector<interp::Value>& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!close(x[i], y[i])) return false;
  return true;
}

bool close(const interp::Value& a, const interp::Value& b) {
  using namespace interp;
  if (a.is<double>() || b.is<double>()) {
    if (!(a.is_number() || a.is<bool>()) || !(b.is_number() || b.is<bool>()))
      return false;
    double x = a.is<bool>() ? a.as<bool>() : a.as_number();
    double y = b.is<bool>() ? b.as<bool>() : b.as_number();
    if (x == y) return true;
    return std::fabs(x - y) <= 1e-12 * std::max(std::fabs(x), std::fabs(y));
  }
  if (a.is<std::shared_ptr<ListObj>>() && b.is<std::shared_ptr<ListObj>>())
    return close_seq(a.as<std::shared_ptr<ListObj>>()->items,
                     b.as<std::shared_ptr<ListObj>>()->items);
  if (a.is<std::shared_ptr<TupleObj>>() && b.is<std::shared_ptr<TupleObj>>())
    return close_seq(a.as<std::shared_ptr<TupleObj>>()->items,
                     b.as<std::shared_ptr<TupleObj>>()->items);
  return a.equals(b);
}

// Evaluates an expression text through the real interpreter (as an
// expression statement with an empty ledger) and returns the echo value.
interp::Value interp_eval(const std::string& text) {
  auto parsed = mlang::parse_block(text);
  if (auto* diag = std::get_if<mlang::SyntaxDiagnostic>(&parsed))
    FAIL("parse failed on generated expr: ", text, " -> ", diag->message());
  interp::Scope scope;
  interp::CallLedger ledger;
  auto outcome =
      interp::evaluate_block(*std::get<mlang::StmtPtr>(parsed), scope, ledger);
  if (outcome.status != interp::ExecOutcome::Status::Completed)
    FAIL("evaluation failed on generated expr: ", text, " -> ",
         outcome.diagnostic);
  return outcome.echo ? *outcome.echo : interp::Value::none();
}

interp::Value oracle_eval_text(const std::string& text) {
  auto parsed = mlang::parse_expression(text);
  if (auto* diag = std::get_if<mlang::SyntaxDiagnostic>(&parsed))
    FAIL("oracle parse failed: ", text, " -> ", diag->message());
  return oracle::eval_pure(*std::get<mlang::ExprPtr>(parsed), {});
}

}  // namespace

TEST_CASE("pure expressions agree with the brute-force oracle (sample)") {
  std::mt19937 rng(990001);
  for (int i = 0; i < 200; ++i) {
    std::string text = testgen::gen_pure_expr(rng, 4);
    INFO("expr: ", text);
    interp::Value mine = interp_eval(text);
    interp::Value reference = oracle_eval_text(text);
    if (!close(mine, reference))
      FAIL("mismatch on ", text, "\n  interp: ", interp::render_repr(mine),
           "\n  oracle: ", interp::render_repr(reference));
  }
}

TEST_CASE("sorted cross-check example from the module contract") {
  interp::Value mine = interp_eval("sorted([3, 1, 2])");
  interp::Value reference = oracle_eval_text("sorted([3, 1, 2])");
  CHECK(interp::render_repr(mine) == "[1, 2, 3]");
  CHECK(close(mine, reference));
}
