#include <doctest.h>

#include "gateway/extract.hpp"
#include "kernel/repl.hpp"
#include "mlang/block.hpp"
#include "gateway/prompt.hpp"
#include "gateway/scripted.hpp"
#include "kernel/history.hpp"

using namespace llmrepl;
using namespace llmrepl::gateway;

TEST_CASE("extract: first statement wins, trailing text discarded") {
  ExtractResult r = extract_block(">>> x = 1\n>>> y = 2");
  CHECK(r.complete);
  CHECK(r.text == "x = 1");
}

TEST_CASE("extract: compound block survives to its end") {
  ExtractResult r =
      extract_block("for i in range(5):\n    act('click [Next >]')\n");
  CHECK(r.complete);
  CHECK(r.text == "for i in range(5):\n    act('click [Next >]')");
}

TEST_CASE("extract: lone compound header is incomplete") {
  ExtractResult r = extract_block("for i in range(5):");
  CHECK_FALSE(r.complete);
  CHECK_FALSE(r.empty);
  CHECK(r.text == "for i in range(5):");
}

TEST_CASE("extract: whitespace-only completion is empty") {
  ExtractResult r = extract_block("   \n\n  ");
  CHECK(r.empty);
}

TEST_CASE("extract: decorations and terminator lines are stripped") {
  ExtractResult r = extract_block(
      ">>> for i in range(2):\n...     act(i)\n...\nleftover");
  CHECK(r.complete);
  CHECK(r.text == "for i in range(2):\n    act(i)");
}

TEST_CASE("extract: markdown fences are skipped") {
  ExtractResult r = extract_block("```python\nx = 1\n```");
  CHECK(r.complete);
  CHECK(r.text == "x = 1");
}

TEST_CASE("extend continues an incomplete block") {
  ExtractResult first = extract_block("for i in range(2):");
  REQUIRE_FALSE(first.complete);
  ExtractResult second = extend_block(first.text, "    act(i)\n");
  CHECK(second.complete);
  CHECK(second.text == "for i in range(2):\n    act(i)");
}

TEST_CASE("extraction idempotence: re-extracting an echo returns the block") {
  std::string block = "for i in range(2):\n    act(i*2+1)\n    count_even()";
  ExtractResult once = extract_block(block);
  REQUIRE(once.complete);
  ExtractResult twice = extract_block(mlang::render_echo(once.text));
  CHECK(twice.complete);
  CHECK(twice.text == once.text);
}

TEST_CASE("prompt: demo segment renders before the live task line") {
  kernel::LlmRepl repl;
  repl.name = "generate_query";
  repl.demo_task = "Generate a good search query for the given arg `description`.";
  repl.demo_history.push_back(
      {kernel::HistoryEntry::Kind::Code, "description = get_args()"});
  repl.history.push_back({kernel::HistoryEntry::Kind::TaskBoundary,
                          repl.demo_task});
  ReplView view;
  view.name = repl.name;
  view.demo_task = repl.demo_task;
  view.demo_entries = &repl.demo_history;
  view.live_entries = &repl.history;
  Prompt prompt = render_prompt(view, PromptMode::NextBlock);
  CHECK(prompt.transcript.rfind("Your task is to: Generate a good search query",
                                0) == 0);
  CHECK(prompt.transcript.find(">>> description = get_args()") !=
        std::string::npos);
  // ends inviting the next input
  CHECK(prompt.transcript.substr(prompt.transcript.size() - 4) == ">>> ");
}

TEST_CASE("prompt: continuation mode ends with a continuation cue") {
  ReplView view;
  view.name = "_main";
  std::vector<kernel::HistoryEntry> live = {
      {kernel::HistoryEntry::Kind::TaskBoundary, "do things"}};
  view.live_entries = &live;
  view.partial_block = "for i in range(5):";
  Prompt prompt = render_prompt(view, PromptMode::Continuation);
  CHECK(prompt.transcript.find(">>> for i in range(5):\n... ") !=
        std::string::npos);
  CHECK(prompt.transcript.substr(prompt.transcript.size() - 4) == "... ");
}

TEST_CASE("prompt: subtask description mode names the function") {
  ReplView view;
  view.name = "_main";
  std::vector<kernel::HistoryEntry> live = {
      {kernel::HistoryEntry::Kind::TaskBoundary, "do things"}};
  view.live_entries = &live;
  view.subtask_fname = "filter_page";
  Prompt prompt = render_prompt(view, PromptMode::SubtaskDescription);
  CHECK(prompt.repl_name == "filter_page");
  CHECK(prompt.transcript.find("filter_page()") != std::string::npos);
  CHECK(prompt.preamble.find("Your task is to:") != std::string::npos);
}

TEST_CASE("prompt determinism: same view renders the same prompt") {
  ReplView view;
  view.name = "_main";
  std::vector<kernel::HistoryEntry> live = {
      {kernel::HistoryEntry::Kind::TaskBoundary, "task"},
      {kernel::HistoryEntry::Kind::Code, "x = 1"},
      {kernel::HistoryEntry::Kind::Stdout, "1"},
  };
  view.live_entries = &live;
  Prompt a = render_prompt(view, PromptMode::NextBlock);
  Prompt b = render_prompt(view, PromptMode::NextBlock);
  CHECK(a.transcript == b.transcript);
  CHECK(a.preamble == b.preamble);
}

TEST_CASE("scripted provider: playback, prefix assertion, exhaustion") {
  ScriptedProvider provider = ScriptedProvider::from_json_text(
      R"({"_main": [
            {"expect_prefix": "Your task is to: count", "completion": "x = 1"},
            "y = 2"
          ]})",
      "inline");
  Prompt prompt;
  prompt.repl_name = "_main";
  prompt.transcript = "Your task is to: count to a number\n>>> ";
  CompletionParams params;
  CHECK(provider.complete(prompt, params) == "x = 1");
  CHECK(provider.complete(prompt, params) == "y = 2");
  CHECK_THROWS_AS(provider.complete(prompt, params), ProviderError);
}

TEST_CASE("scripted provider: prefix mismatch names repl and turn") {
  ScriptedProvider provider = ScriptedProvider::from_json_text(
      R"({"q": [{"expect_prefix": "EXPECTED", "completion": "x = 1"}]})",
      "inline");
  Prompt prompt;
  prompt.repl_name = "q";
  prompt.transcript = "something else";
  CompletionParams params;
  try {
    provider.complete(prompt, params);
    FAIL("expected ProviderError");
  } catch (const ProviderError& e) {
    std::string what = e.what();
    CHECK(what.find("'q'") != std::string::npos);
    CHECK(what.find("turn 1") != std::string::npos);
  }
}

TEST_CASE("completion params default stop sequence includes the prompt marker") {
  CompletionParams params;
  REQUIRE(!params.stop.empty());
  CHECK(params.stop[0] == "\n>>>");
  CHECK(params.temperature == 0.0);
}
