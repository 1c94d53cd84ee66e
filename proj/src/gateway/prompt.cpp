#include "gateway/prompt.hpp"

#include "mlang/block.hpp"

namespace llmrepl::gateway {

const std::string& next_block_preamble() {
  static const std::string text =
      "You are writing inputs for an interactive code shell to complete a "
      "task.\n"
      "Reply with exactly one shell input: a single statement, or one "
      "compound statement whose body lines are indented by four spaces.\n"
      "Do not repeat the >>> or ... markers.\n"
      "Primitives: act(action) performs an action in the environment, "
      "get_obs() returns the latest observation text, get_args() returns "
      "the arguments this function was called with, answer(value) returns "
      "a value to the caller, print_page() prints the latest observation.\n"
      "Calling a function that does not exist yet delegates that subtask "
      "to a new shell.\n"
      "Follow the style of the transcript.";
  return text;
}

const std::string& subtask_preamble() {
  static const std::string text =
      "You are writing inputs for an interactive code shell to complete a "
      "task.\n"
      "A function used in the transcript is not defined yet.\n"
      "Reply with a single line stating that function's task, beginning "
      "with: Your task is to:";
  return text;
}

Prompt render_prompt(const ReplView& view, PromptMode mode) {
  Prompt prompt;
  prompt.repl_name =
      mode == PromptMode::SubtaskDescription ? view.subtask_fname : view.name;
  prompt.mode = mode;
  prompt.preamble = mode == PromptMode::SubtaskDescription
                        ? subtask_preamble()
                        : next_block_preamble();
  std::string body;
  if (view.demo_entries && !view.demo_entries->empty()) {
    if (!view.demo_task.empty())
      body += "Your task is to: " + view.demo_task + "\n";
    body += kernel::render_history(*view.demo_entries);
    body += "\n";
  }
  if (view.live_entries) body += kernel::render_history(*view.live_entries);
  switch (mode) {
    case PromptMode::NextBlock:
      body += ">>> ";
      break;
    case PromptMode::Continuation: {
      auto lines = mlang::split_lines(view.partial_block);
      while (!lines.empty() && mlang::is_blank_line(lines.back()))
        lines.pop_back();
      for (std::size_t i = 0; i < lines.size(); ++i)
        body += (i == 0 ? ">>> " : "... ") + lines[i] + "\n";
      body += "... ";
      break;
    }
    case PromptMode::SubtaskDescription:
      body += "\nThe function " + view.subtask_fname +
              "() is not defined. State in one line what " +
              view.subtask_fname + "() must do.\nYour task is to: ";
      break;
  }
  prompt.transcript = std::move(body);
  return prompt;
}

}  // namespace llmrepl::gateway
