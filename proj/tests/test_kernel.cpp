#include <doctest.h>

#include <filesystem>

#include "envs/counter.hpp"
#include "envs/transcript.hpp"
#include "gateway/scripted.hpp"
#include "kernel/episode.hpp"

using namespace llmrepl;
using kernel::EpisodeOptions;
using kernel::EpisodeResult;
using kernel::EpisodeRunner;
using kernel::ReplPool;
using kernel::TraceWriter;

namespace {

std::string assets(const std::string& rel) {
  return (std::filesystem::path(LLMREPL_ASSETS_DIR) / rel).string();
}

// Environment that accepts anything and never finishes; observations are
// a deterministic function of the step count.
class SinkEnv : public envs::Environment {
 public:
  std::string reset(int) override {
    steps_ = 0;
    actions.clear();
    return "obs0";
  }
  envs::EnvResult step(const std::string& action) override {
    actions.push_back(action);
    ++steps_;
    return {"obs " + std::to_string(steps_), 0.0, false};
  }
  double score() const override { return 0.0; }
  std::string task_instruction() const override { return "sink"; }

  std::vector<std::string> actions;

 private:
  int steps_ = 0;
};

}  // namespace

TEST_CASE("counting episode reproduces the interleaved trace") {
  ReplPool pool;
  envs::CounterEnv env;
  auto provider =
      gateway::ScriptedProvider::load(assets("playbooks/counting.json"));
  TraceWriter trace;
  EpisodeRunner runner(pool, env, provider, EpisodeOptions{}, trace);
  EpisodeResult result = runner.run(0, "Count to 4.");

  CHECK(result.success);
  CHECK(result.score == 1.0);
  CHECK(result.reason == "env_done");
  CHECK(env.heard() == std::vector<long long>{1, 2, 3, 4});

  // exactly one creation of count_even, entered twice (resumed loop)
  int spawns = 0, enters = 0, act1 = 0;
  for (const auto& e : trace.events()) {
    if (e.event == "spawn" && e.repl == "count_even") ++spawns;
    if (e.event == "enter" && e.repl == "count_even") ++enters;
    if (e.event == "act" && e.text == "1") ++act1;
  }
  CHECK(spawns == 2);  // two invocations of the one child
  CHECK(enters == 3);  // two invocations plus one re-entry after an act
  CHECK(act1 == 1);  // act(1) delivered once despite block replays
  int subtask_queries = 0;
  for (const auto& e : trace.events())
    if (e.event == "llm_call" && e.extra.at("mode") == "subtask-description")
      ++subtask_queries;
  CHECK(subtask_queries == 1);  // created once, reused on re-invocation
}

TEST_CASE("counting trace enter/exit markers are balanced and ordered") {
  ReplPool pool;
  envs::CounterEnv env;
  auto provider =
      gateway::ScriptedProvider::load(assets("playbooks/counting.json"));
  TraceWriter trace;
  EpisodeRunner runner(pool, env, provider, EpisodeOptions{}, trace);
  runner.run(0, "Count to 4.");

  std::vector<std::string> open;
  for (const auto& e : trace.events()) {
    if (e.event == "enter") open.push_back(e.repl);
    if (e.event == "exit") {
      REQUIRE(!open.empty());
      CHECK(open.back() == e.repl);
      open.pop_back();
    }
  }
  // the act cascade exits the whole stack before the final action, so
  // the episode ends with every marker matched
  CHECK(open.empty());
}

TEST_CASE("table 2 interleaving: per-page clicks with nested spawn depth 3") {
  auto env = envs::TranscriptEnv::load(assets("bundles/table2/transcript.json"));
  auto provider =
      gateway::ScriptedProvider::load(assets("bundles/table2/playbook.json"));
  ReplPool pool;
  TraceWriter trace;
  EpisodeRunner runner(pool, env, provider, EpisodeOptions{}, trace);
  EpisodeResult result = runner.run(0, env.task_instruction());

  CHECK(result.success);
  CHECK(result.score == 1.0);

  std::vector<std::string> actions;
  int depth = 0, max_depth = 0;
  for (const auto& e : trace.events()) {
    if (e.event == "act") actions.push_back(e.text);
    if (e.event == "enter") max_depth = std::max(max_depth, ++depth);
    if (e.event == "exit") --depth;
  }
  std::vector<std::string> expected = {
      "click [0]", "click [< Back]", "click [1]", "click [< Back]",
      "click [2]", "click [< Back]", "click [Next >]",
      "click [0]", "click [< Back]", "click [1]", "click [< Back]",
      "click [2]", "click [< Back]", "click [Next >]"};
  CHECK(actions == expected);
  CHECK(max_depth == 4);  // _main plus three nested subtask REPLs
}

TEST_CASE("budget: an LLM that never acts stops at exactly max_llm_calls") {
  ReplPool pool;
  SinkEnv env;
  gateway::ScriptedProvider provider;
  for (int i = 0; i < 500; ++i) provider.push("_main", "x = 1");
  TraceWriter trace;
  EpisodeOptions options;
  options.budgets.max_llm_calls = 7;
  EpisodeRunner runner(pool, env, provider, options, trace);
  EpisodeResult result = runner.run(0, "never ends");
  CHECK_FALSE(result.success);
  CHECK(result.reason == "llm_call_budget");
  CHECK(result.llm_calls == 7);
}

TEST_CASE("budget: env step limit") {
  ReplPool pool;
  SinkEnv env;
  gateway::ScriptedProvider provider;
  for (int i = 0; i < 50; ++i) provider.push("_main", "act('go')");
  TraceWriter trace;
  EpisodeOptions options;
  options.budgets.max_env_steps = 3;
  EpisodeRunner runner(pool, env, provider, options, trace);
  EpisodeResult result = runner.run(0, "steps");
  CHECK(result.reason == "env_step_budget");
  CHECK(result.env_steps == 3);
}

TEST_CASE("spawn depth limit delivers an error entry and continues") {
  ReplPool pool;
  SinkEnv env;
  gateway::ScriptedProvider provider;
  // f1 calls f2 calls f3... each new repl needs a description + block
  provider.push("_main", "f1()");
  for (int i = 1; i <= 6; ++i) {
    std::string name = "f" + std::to_string(i);
    provider.push(name, "Your task is to: recurse.");
    provider.push(name, "f" + std::to_string(i + 1) + "()");
    provider.push(name, "answer(0)");
  }
  provider.push("_main", "answer('done')");
  TraceWriter trace;
  EpisodeOptions options;
  options.budgets.max_spawn_depth = 4;  // _main + f1 + f2 + f3
  EpisodeRunner runner(pool, env, provider, options, trace);
  EpisodeResult result = runner.run(0, "deep");
  CHECK(result.reason == "root_answer");
  bool saw_depth_error = false;
  for (const auto& e : trace.events())
    if (e.event == "error" && e.text.find("RecursionError") != std::string::npos)
      saw_depth_error = true;
  CHECK(saw_depth_error);
}

TEST_CASE("observation broadcast reaches every repl on the stack") {
  ReplPool pool;
  SinkEnv env;
  gateway::ScriptedProvider provider;
  provider.push("_main", "child()");
  provider.push("child", "Your task is to: act once and answer.");
  provider.push("child", "act('ping')");
  provider.push("child", "answer(1)");
  provider.push("_main", "answer('done')");
  TraceWriter trace;
  EpisodeRunner runner(pool, env, provider, EpisodeOptions{}, trace);
  runner.run(0, "broadcast");
  kernel::LlmRepl* root = pool.find("_main");
  kernel::LlmRepl* child = pool.find("child");
  REQUIRE(root != nullptr);
  REQUIRE(child != nullptr);
  auto has_obs = [](const kernel::LlmRepl* repl, const std::string& text) {
    for (const auto& entry : repl->history)
      if (entry.kind == kernel::HistoryEntry::Kind::Obs && entry.text == text)
        return true;
    return false;
  };
  CHECK(has_obs(root, "obs0"));
  CHECK(has_obs(root, "obs 1"));
  CHECK(has_obs(child, "obs 1"));
  CHECK_FALSE(has_obs(child, "obs0"));  // spawned after reset
}

TEST_CASE("no-subtask ablation converts spawns into REPLNameError entries") {
  ReplPool pool;
  SinkEnv env;
  gateway::ScriptedProvider provider;
  provider.push("_main", "helper()");
  provider.push("_main", "answer('gave up')");
  TraceWriter trace;
  EpisodeOptions options;
  options.no_subtask_repls = true;
  EpisodeRunner runner(pool, env, provider, options, trace);
  EpisodeResult result = runner.run(0, "ablation");
  CHECK(result.reason == "root_answer");
  bool saw = false;
  for (const auto& e : trace.events())
    if (e.event == "error" &&
        e.text == "REPLNameError(\"name 'helper' not defined.\")")
      saw = true;
  CHECK(saw);
  CHECK(trace.count("spawn") == 0);
}

TEST_CASE("syntax errors append diagnostics and three strikes fail the repl") {
  ReplPool pool;
  SinkEnv env;
  gateway::ScriptedProvider provider;
  provider.push("_main", "child()");
  provider.push("child", "Your task is to: emit broken code.");
  provider.push("child", "x = \"unterminated");
  provider.push("child", "= = =");
  provider.push("child", "1bad ===");
  provider.push("_main", "answer('done')");
  TraceWriter trace;
  EpisodeRunner runner(pool, env, provider, EpisodeOptions{}, trace);
  EpisodeResult result = runner.run(0, "strikes");
  CHECK(result.reason == "root_answer");
  kernel::LlmRepl* child = pool.find("child");
  REQUIRE(child != nullptr);
  CHECK(child->failed);
  int syntax_errors = 0;
  for (const auto& entry : child->history)
    if (entry.kind == kernel::HistoryEntry::Kind::Error &&
        entry.text.rfind("SyntaxError", 0) == 0)
      ++syntax_errors;
  CHECK(syntax_errors >= 3);
}

TEST_CASE("demo reuse emits the cached injection note, fresh spawns do not") {
  ReplPool pool = ReplPool::from_json_text(
      R"json({"repls": [{"name": "cached_fn", "task": "Answer 7.",
           "entries": [{"kind": "code", "text": "answer(7)"}]}]})json",
      "inline");
  SinkEnv env;
  gateway::ScriptedProvider provider;
  provider.push("_main", "x = cached_fn()");
  provider.push("cached_fn", "answer(7)");
  provider.push("_main", "y = fresh_fn()");
  provider.push("fresh_fn", "Your task is to: answer 8.");
  provider.push("fresh_fn", "answer(8)");
  provider.push("_main", "answer(x + y)");
  TraceWriter trace;
  EpisodeRunner runner(pool, env, provider, EpisodeOptions{}, trace);
  EpisodeResult result = runner.run(0, "reuse");
  CHECK(result.root_answer == "15");
  bool cached_note = false, fresh_note = false;
  for (const auto& e : trace.events()) {
    if (e.event != "spawn_note") continue;
    if (e.text == "Name error: cached_fn. injecting with cached LLM func.")
      cached_note = true;
    if (e.text == "Name error: fresh_fn. creating new LLM func.")
      fresh_note = true;
  }
  CHECK(cached_note);
  CHECK(fresh_note);
}

TEST_CASE("pool reuse is deterministic: same task twice, identical traces") {
  auto run_once = [&]() {
    ReplPool pool;
    envs::CounterEnv env;
    auto provider =
        gateway::ScriptedProvider::load(assets("playbooks/counting.json"));
    TraceWriter trace;
    EpisodeRunner runner(pool, env, provider, EpisodeOptions{}, trace);
    runner.run(0, "Count to 4.");
    return std::make_pair(trace.human_log(), trace.jsonl());
  };
  auto first = run_once();
  auto second = run_once();
  CHECK(first.first == second.first);
  CHECK(first.second == second.second);
}

TEST_CASE("history is append-only and starts at the task boundary") {
  ReplPool pool;
  envs::CounterEnv env;
  auto provider =
      gateway::ScriptedProvider::load(assets("playbooks/counting.json"));
  TraceWriter trace;
  EpisodeRunner runner(pool, env, provider, EpisodeOptions{}, trace);
  runner.run(0, "Count to 4.");
  kernel::LlmRepl* root = pool.find("_main");
  REQUIRE(root != nullptr);
  REQUIRE(!root->history.empty());
  CHECK(root->history.front().kind == kernel::HistoryEntry::Kind::TaskBoundary);
}

TEST_CASE("demo load errors name the offending entry") {
  CHECK_THROWS_WITH_AS(
      ReplPool::from_json_text(R"json({"repls": [{"task": "no name"}]})json", "demo"),
      "missing name at demo repls[0]", kernel::DemoLoadError);
  CHECK_THROWS_AS(ReplPool::from_json_text("not json", "demo"),
                  kernel::DemoLoadError);
  ReplPool empty = ReplPool::from_json_text("{}", "demo");
  CHECK(empty.size() == 0);  // zero-shot mode
}

TEST_CASE("bug patches replace demo entries and reject bad targets") {
  ReplPool pool = ReplPool::from_json_text(
      R"json({"repls": [{"name": "f", "task": "t",
           "entries": [{"kind": "code", "text": "x = 1"}]}]})json",
      "demo");
  pool.apply_bug_patches({{"f", 0, "x = \"broken"}});
  CHECK(pool.find("f")->demo_history[0].text == "x = \"broken");
  CHECK_THROWS_AS(pool.apply_bug_patches({{"missing", 0, ""}}),
                  kernel::DemoLoadError);
  CHECK_THROWS_AS(pool.apply_bug_patches({{"f", 9, ""}}),
                  kernel::DemoLoadError);
}

TEST_CASE("answer(None) propagates from a failed child") {
  ReplPool pool;
  SinkEnv env;
  gateway::ScriptedProvider provider;
  provider.push("_main", "v = broken()");
  provider.push("broken", "Your task is to: fail.");
  provider.push("broken", "===");
  provider.push("broken", "===");
  provider.push("broken", "===");
  provider.push("_main", "answer(v)");
  TraceWriter trace;
  EpisodeRunner runner(pool, env, provider, EpisodeOptions{}, trace);
  EpisodeResult result = runner.run(0, "failure propagation");
  CHECK(result.reason == "root_answer");
  CHECK(result.root_answer == "None");
}
