#include "kernel/episode.hpp"

#include <cassert>

#include "gateway/extract.hpp"
#include "interp/evaluator.hpp"
#include "mlang/parser.hpp"

namespace llmrepl::kernel {

namespace {

interp::Value args_value(const std::vector<interp::Value>& args) {
  if (args.empty()) return interp::Value::none();
  if (args.size() == 1) return args[0].deep_copy();
  std::vector<interp::Value> items;
  items.reserve(args.size());
  for (const interp::Value& a : args) items.push_back(a.deep_copy());
  return interp::Value::tuple(std::move(items));
}

}  // namespace

EpisodeRunner::EpisodeRunner(ReplPool& pool, envs::Environment& env,
                             gateway::LlmProvider& llm, EpisodeOptions options,
                             TraceWriter& trace)
    : pool_(pool), env_(env), llm_(llm), options_(std::move(options)),
      trace_(trace) {}

gateway::ReplView EpisodeRunner::view_of(LlmRepl& repl) const {
  gateway::ReplView view;
  view.name = repl.name;
  view.demo_task = repl.demo_task;
  if (!repl.demo_history.empty()) view.demo_entries = &repl.demo_history;
  view.live_entries = &repl.history;
  return view;
}

EpisodeResult EpisodeRunner::run(int task_id, const std::string& root_task) {
  latest_obs_ = env_.reset(task_id);
  pool_.reset_for_episode(root_task);
  LlmRepl& root = pool_.root();

  trace_.emit("episode_start", root.name, root_task,
              {{"task_id", std::to_string(task_id)}});
  trace_.emit("obs", "", latest_obs_);
  stack_.push_back(Frame{&root, "", 0});
  root.append(HistoryEntry::Kind::Obs, latest_obs_);
  trace_.emit("enter", root.name, "");

  while (!finished_) {
    LlmRepl& repl = top();
    if (!repl.suspended) {
      Acquire status = acquire_block(repl);
      if (status == Acquire::EpisodeOver) break;
      if (status == Acquire::ReplFailed) {
        repl.failed = true;
        if (stack_.size() == 1) {
          finish("root_failed");
          break;
        }
        pop_with_answer(interp::Value::none());
        continue;
      }
    }
    BlockState& block = *repl.suspended;
    interp::ExecOutcome outcome =
        interp::evaluate_block(*block.ast, block.snapshot, block.ledger);
    for (const std::string& line : outcome.fresh_stdout) {
      repl.append(HistoryEntry::Kind::Stdout, line);
      trace_.emit("stdout", repl.name, line);
    }
    switch (outcome.status) {
      case interp::ExecOutcome::Status::Completed: {
        repl.scope = std::move(*outcome.scope);
        if (outcome.echo) {
          std::string text =
              interp::render_value(*outcome.echo, interp::RenderContext::ReplEcho);
          repl.append(HistoryEntry::Kind::EchoValue, text);
          trace_.emit("echo", repl.name, text);
        }
        repl.suspended.reset();
        break;
      }
      case interp::ExecOutcome::Status::Failed: {
        repl.append(HistoryEntry::Kind::Error, outcome.diagnostic);
        trace_.emit("error", repl.name, outcome.diagnostic);
        repl.suspended.reset();
        break;
      }
      case interp::ExecOutcome::Status::Suspended: {
        const interp::Effect& effect = *outcome.effect;
        switch (effect.kind) {
          case interp::Effect::Kind::Act:
            dispatch_act(effect);
            break;
          case interp::Effect::Kind::GetArgs:
            block.ledger.record(effect.call_name, effect.call_index,
                                args_value(repl.invocation_args));
            break;
          case interp::Effect::Kind::GetObs:
            block.ledger.record(effect.call_name, effect.call_index,
                                interp::Value::text(latest_obs_));
            break;
          case interp::Effect::Kind::Answer: {
            block.ledger.record(effect.call_name, effect.call_index,
                                interp::Value::none());
            trace_.emit("answer", repl.name,
                        interp::render_repr(effect.value));
            if (stack_.size() == 1) {
              trace_.emit("exit", repl.name, "");
              result_.root_answer = interp::render_repr(effect.value);
              finish("root_answer");
            } else {
              pop_with_answer(effect.value);
            }
            break;
          }
          case interp::Effect::Kind::SpawnCall:
            dispatch_spawn(effect);
            break;
        }
        break;
      }
    }
  }
  return result_;
}

void EpisodeRunner::dispatch_act(const interp::Effect& effect) {
  if (env_steps_ >= options_.budgets.max_env_steps) {
    finish("env_step_budget");
    return;
  }
  for (auto it = stack_.rbegin(); it != stack_.rend(); ++it)
    trace_.emit("exit", it->repl->name, "");
  trace_.emit("act", top().name, effect.action);
  envs::EnvResult step = env_.step(effect.action);
  ++env_steps_;
  trace_.set_step(env_steps_);
  top().suspended->ledger.record(effect.call_name, effect.call_index,
                                 interp::Value::none());
  if (step.done) {
    finish("env_done");
    return;
  }
  latest_obs_ = step.obs;
  trace_.emit("obs", "", step.obs);
  broadcast_observation(step.obs);
  for (const Frame& frame : stack_) trace_.emit("enter", frame.repl->name, "");
}

void EpisodeRunner::broadcast_observation(const std::string& obs) {
  for (const Frame& frame : stack_)
    frame.repl->append(HistoryEntry::Kind::Obs, obs);
}

void EpisodeRunner::pop_with_answer(const interp::Value& value) {
  Frame child = std::move(stack_.back());
  stack_.pop_back();
  trace_.emit("exit", child.repl->name, "");
  LlmRepl& parent = top();
  assert(parent.suspended);
  parent.suspended->ledger.record(child.callsite_name, child.callsite_index,
                                  value.deep_copy());
}

void EpisodeRunner::dispatch_spawn(const interp::Effect& effect) {
  LlmRepl& parent = top();
  const std::string& fname = effect.call_name;

  if (options_.no_subtask_repls) {
    std::string diag =
        "REPLNameError(\"name '" + fname + "' not defined.\")";
    parent.append(HistoryEntry::Kind::Error, diag);
    trace_.emit("error", parent.name, diag);
    parent.suspended.reset();
    return;
  }
  if (static_cast<int>(stack_.size()) + 1 > options_.budgets.max_spawn_depth) {
    std::string diag = "RecursionError('maximum LLM-REPL spawn depth exceeded')";
    parent.append(HistoryEntry::Kind::Error, diag);
    trace_.emit("error", parent.name, diag);
    parent.suspended.reset();
    return;
  }
  for (const Frame& frame : stack_) {
    if (frame.repl->name == fname) {
      std::string diag =
          "RecursionError(\"LLM-REPL '" + fname + "' is already active\")";
      parent.append(HistoryEntry::Kind::Error, diag);
      trace_.emit("error", parent.name, diag);
      parent.suspended.reset();
      return;
    }
  }

  LlmRepl* child = pool_.find(fname);
  bool injected = child != nullptr;
  if (!effect.callee_bound) {
    std::string note = injected
                           ? "Name error: " + fname +
                                 ". injecting with cached LLM func."
                           : "Name error: " + fname + ". creating new LLM func.";
    parent.append(HistoryEntry::Kind::Error, note);
    trace_.emit("spawn_note", parent.name, note,
                {{"fname", fname}, {"cached", injected ? "true" : "false"}});
  }
  if (!child) {
    std::string subtask;
    if (!query_subtask_description(parent, fname, subtask)) return;
    child = &pool_.create(fname, subtask);
    trace_.emit("subtask", fname, subtask);
  }

  // Algorithm 1 binds the new function into the caller's state; the bound
  // name survives replays via the block snapshot.
  parent.scope.bind(fname, interp::Value::repl_fn(fname));
  parent.suspended->snapshot.bind(fname, interp::Value::repl_fn(fname));

  if (child->failed) {
    parent.suspended->ledger.record(fname, effect.call_index,
                                    interp::Value::none());
    return;
  }
  child->invocation_args.clear();
  for (const interp::Value& a : effect.args)
    child->invocation_args.push_back(a.deep_copy());
  stack_.push_back(Frame{child, fname, effect.call_index});
  trace_.emit("enter", child->name, "",
              {{"parent", parent.name}, {"cached", injected ? "true" : "false"}});
  trace_.emit("spawn", child->name, "",
              {{"parent", parent.name}, {"cached", injected ? "true" : "false"}});
}

bool EpisodeRunner::query_subtask_description(LlmRepl& parent,
                                              const std::string& fname,
                                              std::string& task_out) {
  bool ok = false;
  std::string completion = run_completion(
      parent, gateway::PromptMode::SubtaskDescription, "", fname, ok);
  if (!ok) return false;
  std::string line = completion;
  std::size_t nl = line.find('\n');
  if (nl != std::string::npos) line = line.substr(0, nl);
  const std::string prefix = "Your task is to:";
  if (line.rfind(prefix, 0) == 0) line = line.substr(prefix.size());
  while (!line.empty() && line.front() == ' ') line.erase(line.begin());
  while (!line.empty() && (line.back() == ' ' || line.back() == '\r'))
    line.pop_back();
  task_out = line;
  return true;
}

std::string EpisodeRunner::run_completion(LlmRepl& repl,
                                          gateway::PromptMode mode,
                                          const std::string& partial,
                                          const std::string& fname, bool& ok) {
  ok = false;
  if (llm_calls_ >= options_.budgets.max_llm_calls) {
    finish("llm_call_budget");
    return "";
  }
  gateway::ReplView view = view_of(repl);
  view.partial_block = partial;
  view.subtask_fname = fname;
  gateway::Prompt prompt = gateway::render_prompt(view, mode);
  ++llm_calls_;
  const char* mode_name = mode == gateway::PromptMode::NextBlock ? "next-block"
                          : mode == gateway::PromptMode::Continuation
                              ? "continuation"
                              : "subtask-description";
  trace_.emit("llm_call", prompt.repl_name, "",
              {{"mode", mode_name}, {"calls", std::to_string(llm_calls_)}});
  try {
    std::string completion = llm_.complete(prompt, options_.params);
    ok = true;
    return completion;
  } catch (const gateway::ProviderError& e) {
    abort_episode(e.what());
    return "";
  }
}

EpisodeRunner::Acquire EpisodeRunner::acquire_block(LlmRepl& repl) {
  std::string partial;
  while (true) {
    if (finished_) return Acquire::EpisodeOver;
    bool ok = false;
    gateway::PromptMode mode = partial.empty()
                                   ? gateway::PromptMode::NextBlock
                                   : gateway::PromptMode::Continuation;
    std::string completion = run_completion(repl, mode, partial, "", ok);
    if (!ok) return Acquire::EpisodeOver;
    gateway::ExtractResult extracted =
        partial.empty() ? gateway::extract_block(completion)
                        : gateway::extend_block(partial, completion);
    if (extracted.empty) {
      std::string diag = "SyntaxError('completion contained no statement')";
      repl.append(HistoryEntry::Kind::Error, diag);
      trace_.emit("error", repl.name, diag);
      if (++repl.consecutive_syntax_failures >= 3) return Acquire::ReplFailed;
      partial.clear();
      continue;
    }
    if (!extracted.complete) {
      partial = extracted.text;
      continue;
    }
    mlang::SourceBlock block;
    block.text = extracted.text;
    block.origin = mlang::SourceBlock::Origin::Llm;
    repl.append(HistoryEntry::Kind::Code, block.text);
    trace_.emit("code", repl.name, block.text);
    mlang::ParseResult parsed = mlang::parse_block(block.text);
    if (auto* diag = std::get_if<mlang::SyntaxDiagnostic>(&parsed)) {
      repl.append(HistoryEntry::Kind::Error, diag->message());
      trace_.emit("error", repl.name, diag->message());
      if (++repl.consecutive_syntax_failures >= 3) return Acquire::ReplFailed;
      partial.clear();
      continue;
    }
    repl.consecutive_syntax_failures = 0;
    BlockState state;
    state.block = std::move(block);
    state.ast = std::move(std::get<mlang::StmtPtr>(parsed));
    state.snapshot = repl.scope.snapshot();
    repl.suspended.emplace(std::move(state));
    return Acquire::Ok;
  }
}

void EpisodeRunner::finish(const std::string& reason) {
  if (finished_) return;
  finished_ = true;
  result_.reason = reason;
  result_.score = env_.score();
  result_.success = result_.score >= 1.0;
  result_.env_steps = env_steps_;
  result_.llm_calls = llm_calls_;
  trace_.emit("episode_end", "", reason,
              {{"score", std::to_string(result_.score)},
               {"success", result_.success ? "true" : "false"},
               {"env_steps", std::to_string(env_steps_)},
               {"llm_calls", std::to_string(llm_calls_)}});
}

void EpisodeRunner::abort_episode(const std::string& diagnostic) {
  if (finished_) return;
  finished_ = true;
  result_.reason = "aborted: " + diagnostic;
  result_.score = env_.score();
  result_.success = false;
  result_.env_steps = env_steps_;
  result_.llm_calls = llm_calls_;
  trace_.emit("episode_end", "", result_.reason,
              {{"score", std::to_string(result_.score)},
               {"success", "false"},
               {"env_steps", std::to_string(env_steps_)},
               {"llm_calls", std::to_string(llm_calls_)}});
}

}  // namespace llmrepl::kernel
