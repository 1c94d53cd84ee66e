#include "harness/runner.hpp"

#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "envs/counter.hpp"
#include "envs/minishop.hpp"
#include "envs/transcript.hpp"
#include "gateway/http.hpp"
#include "gateway/scripted.hpp"
#include "kernel/episode.hpp"
#include "mlang/parser.hpp"

namespace llmrepl::harness {

namespace {

namespace fs = std::filesystem;

constexpr const char* kShopTaskPrefix =
    "Navigate a shopping website to purchase an item matching the following "
    "request: ";

struct EpisodeSpec {
  int task_id = 0;
  std::string root_task;
};

std::unique_ptr<gateway::LlmProvider> make_provider(const RunConfig& config) {
  if (!config.playbook_path.empty()) {
    return std::make_unique<gateway::ScriptedProvider>(
        gateway::ScriptedProvider::load(config.playbook_path));
  }
  gateway::HttpProviderConfig http;
  http.base_url = config.http_base;
  http.model = config.http_model;
  http.temperature = config.temperature;
  http.key_env = config.http_key_env;
  http.debug = config.debug_http;
  return std::make_unique<gateway::HttpProvider>(http);
}

kernel::ReplPool load_pool(const std::string& demos_path,
                           const std::vector<std::string>& drop,
                           const std::string& bugs_path) {
  kernel::ReplPool pool;
  if (!demos_path.empty()) pool = kernel::ReplPool::load_demos(demos_path);
  if (!bugs_path.empty())
    pool.apply_bug_patches(kernel::load_bug_patches(bugs_path));
  if (!drop.empty()) pool.drop(drop);
  return pool;
}

// Fresh pool per episode: demo text persists across tasks, nothing else.
kernel::ReplPool clone_demo_pool(const kernel::ReplPool& source) {
  kernel::ReplPool copy;
  for (const std::string& name : source.names()) {
    const kernel::LlmRepl* repl = source.find(name);
    kernel::LlmRepl& fresh = copy.add_demo(name, repl->demo_task);
    fresh.demo_history = repl->demo_history;
    fresh.from_demo = repl->from_demo;
  }
  return copy;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file: " + path.string());
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string rstrip(const std::string& line) {
  std::size_t end = line.find_last_not_of(" \t\r");
  return end == std::string::npos ? "" : line.substr(0, end + 1);
}

}  // namespace

std::string compare_logs(const std::string& expected, const std::string& actual) {
  auto lines_of = [](const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(rstrip(line));
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
  };
  std::vector<std::string> want = lines_of(expected);
  std::vector<std::string> got = lines_of(actual);
  std::size_t n = std::max(want.size(), got.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::string* w = i < want.size() ? &want[i] : nullptr;
    const std::string* g = i < got.size() ? &got[i] : nullptr;
    if (w && g && *w == *g) continue;
    std::ostringstream os;
    os << "first difference at line " << (i + 1) << ":\n";
    os << "  expected: " << (w ? *w : "<end of log>") << "\n";
    os << "  actual:   " << (g ? *g : "<end of log>");
    return os.str();
  }
  return "";
}

MetricsReport cmd_run(const RunConfig& config) {
  config.validate();

  std::unique_ptr<gateway::LlmProvider> provider = make_provider(config);
  kernel::ReplPool demo_pool =
      load_pool(config.demos_path, config.drop_repls, config.inject_bugs_path);

  // episode list per environment
  std::vector<EpisodeSpec> specs;
  std::vector<envs::CatalogItem> catalog;
  std::vector<envs::ShopTask> shop_tasks;
  std::optional<envs::TranscriptEnv> transcript_proto;
  if (config.env_kind == "minishop") {
    catalog = envs::load_catalog(config.catalog_path);
    shop_tasks = envs::load_shop_tasks(config.tasks_path);
    for (std::size_t i = 0; i < shop_tasks.size(); ++i)
      specs.push_back(EpisodeSpec{static_cast<int>(i),
                                  kShopTaskPrefix + shop_tasks[i].instruction});
  } else if (config.env_kind == "counter") {
    specs.push_back(EpisodeSpec{0, "Count to 4."});
  } else {
    transcript_proto = envs::TranscriptEnv::load(config.transcript_path);
    specs.push_back(EpisodeSpec{0, transcript_proto->task_instruction()});
  }

  fs::path out_dir;
  if (!config.out_dir.empty()) {
    out_dir = config.out_dir;
    fs::create_directories(out_dir);
  }

  kernel::EpisodeOptions options;
  options.budgets = config.budgets;
  options.no_subtask_repls = config.no_subtask_repls;
  options.params.temperature = config.temperature;
  options.params.model = config.http_model;

  std::vector<EpisodeRow> rows(specs.size());
  std::mutex next_mu;
  std::size_t next_index = 0;
  auto worker = [&] {
    while (true) {
      std::size_t index;
      {
        std::lock_guard<std::mutex> lock(next_mu);
        if (next_index >= specs.size()) return;
        index = next_index++;
      }
      const EpisodeSpec& spec = specs[index];
      std::unique_ptr<envs::Environment> env;
      if (config.env_kind == "minishop")
        env = std::make_unique<envs::MiniShopEnv>(catalog, shop_tasks,
                                                  config.page_size);
      else if (config.env_kind == "counter")
        env = std::make_unique<envs::CounterEnv>();
      else
        env = std::make_unique<envs::TranscriptEnv>(*transcript_proto);

      kernel::ReplPool pool = clone_demo_pool(demo_pool);
      kernel::TraceWriter trace;
      kernel::EpisodeRunner runner(pool, *env, *provider, options, trace);
      kernel::EpisodeResult result = runner.run(spec.task_id, spec.root_task);

      EpisodeRow row;
      row.index = static_cast<int>(index) + 1;
      row.task_id = spec.task_id;
      row.task = spec.root_task;
      row.success = result.success;
      row.score = result.score;
      row.env_steps = result.env_steps;
      row.llm_calls = result.llm_calls;
      row.reason = result.reason;
      rows[index] = row;

      if (!out_dir.empty()) {
        std::string stem = "episode-" + std::to_string(index + 1);
        write_file(out_dir / (stem + ".log"), trace.human_log());
        write_file(out_dir / (stem + ".jsonl"), trace.jsonl());
      }
    }
  };
  int worker_count = std::min<int>(config.workers,
                                   static_cast<int>(specs.size()));
  if (worker_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < worker_count; ++i) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  MetricsReport report;
  report.episodes = static_cast<int>(rows.size());
  report.seed = config.seed;
  report.rows = rows;
  for (const EpisodeRow& row : rows) {
    report.success_rate += row.success ? 1.0 : 0.0;
    report.mean_score += row.score;
    report.mean_env_steps += row.env_steps;
    report.mean_llm_calls += row.llm_calls;
  }
  if (!rows.empty()) {
    report.success_rate /= rows.size();
    report.mean_score /= rows.size();
    report.mean_env_steps /= rows.size();
    report.mean_llm_calls /= rows.size();
  }
  if (!out_dir.empty()) write_file(out_dir / "report.json", report.to_json());
  return report;
}

ReplayReport cmd_replay(const std::string& transcript_path,
                        const std::string& demos_path,
                        const std::string& playbook_path,
                        const std::string& expected_log_path,
                        const std::string& out_dir) {
  envs::TranscriptEnv env = envs::TranscriptEnv::load(transcript_path);
  kernel::ReplPool pool = load_pool(demos_path, {}, "");
  gateway::ScriptedProvider provider =
      gateway::ScriptedProvider::load(playbook_path);

  kernel::TraceWriter trace;
  kernel::EpisodeOptions options;
  kernel::EpisodeRunner runner(pool, env, provider, options, trace);
  kernel::EpisodeResult result = runner.run(0, env.task_instruction());

  ReplayReport report;
  report.reward = result.score;
  report.produced_log = trace.human_log();
  report.pass = result.score >= 1.0;

  std::string expected_path = expected_log_path;
  if (expected_path.empty()) {
    fs::path sibling = fs::path(transcript_path).parent_path() / "expected.log";
    if (fs::exists(sibling)) expected_path = sibling.string();
  }
  if (!expected_path.empty()) {
    std::string expected = read_file(expected_path);
    std::string diff = compare_logs(expected, trace.human_log());
    if (!diff.empty()) {
      report.pass = false;
      report.divergence = diff;
    }
  }
  if (!report.pass && report.divergence.empty() && result.score < 1.0) {
    report.divergence = "episode ended with reward " +
                        std::to_string(result.score) + " (" + result.reason +
                        ")";
  }
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "replay.log", trace.human_log());
    write_file(fs::path(out_dir) / "replay.jsonl", trace.jsonl());
  }
  return report;
}

ValidateReport cmd_demo_validate(const std::string& demos_path,
                                 const std::string& inject_bugs_path) {
  kernel::ReplPool pool = load_pool(demos_path, {}, inject_bugs_path);
  ValidateReport report;
  report.repl_count = static_cast<int>(pool.size());
  for (const std::string& name : pool.names()) {
    kernel::LlmRepl* repl = pool.find(name);
    int statements = 0;
    int entry_index = 0;
    for (const kernel::HistoryEntry& entry : repl->demo_history) {
      if (entry.kind == kernel::HistoryEntry::Kind::Code) {
        mlang::ParseResult parsed = mlang::parse_block(entry.text);
        if (auto* diag = std::get_if<mlang::SyntaxDiagnostic>(&parsed)) {
          report.diagnostics.push_back(
              DemoDiagnostic{name, entry_index, diag->message()});
        } else {
          ++statements;
        }
      }
      ++entry_index;
    }
    report.statements_per_repl.emplace_back(name, statements);
  }
  return report;
}

std::string MetricsReport::to_json() const {
  nlohmann::json doc = {
      {"episodes", episodes},       {"success_rate", success_rate},
      {"mean_score", mean_score},   {"mean_env_steps", mean_env_steps},
      {"mean_llm_calls", mean_llm_calls}, {"seed", seed},
  };
  doc["per_episode"] = nlohmann::json::array();
  for (const EpisodeRow& row : rows) {
    doc["per_episode"].push_back({{"episode", row.index},
                                  {"task_id", row.task_id},
                                  {"task", row.task},
                                  {"success", row.success},
                                  {"score", row.score},
                                  {"env_steps", row.env_steps},
                                  {"llm_calls", row.llm_calls},
                                  {"reason", row.reason}});
  }
  return doc.dump(2) + "\n";
}

std::string ReplayReport::to_json() const {
  nlohmann::json doc = {{"pass", pass}, {"reward", reward}};
  if (!divergence.empty()) doc["divergence"] = divergence;
  return doc.dump(2) + "\n";
}

std::string ValidateReport::to_json() const {
  nlohmann::json doc = {{"repls", repl_count}};
  doc["statements"] = nlohmann::json::object();
  for (const auto& [name, count] : statements_per_repl)
    doc["statements"][name] = count;
  doc["warnings"] = nlohmann::json::array();
  for (const DemoDiagnostic& diag : diagnostics)
    doc["warnings"].push_back(
        {{"repl", diag.repl}, {"entry", diag.entry}, {"message", diag.message}});
  return doc.dump(2) + "\n";
}

}  // namespace llmrepl::harness
