// Regenerates the MiniWebShop playbook fixtures under assets/ from the
// shipped catalog and task files. The playbooks script the top-3 shopping
// strategy: search, filter page-1 ids by price, score each candidate,
// then buy the best one (selecting any required buying variations).
//
// Usage: llmrepl-genfixtures [assets-dir]

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "envs/minishop.hpp"

using llmrepl::envs::CatalogItem;
using llmrepl::envs::load_catalog;
using llmrepl::envs::load_shop_tasks;
using llmrepl::envs::MiniShopEnv;
using llmrepl::envs::ShopTask;
using nlohmann::json;

namespace {

// search queries per task index, in the order of tasks.json
const std::vector<std::string> kQueries = {
    "noise cancelling cosycost usb microphone",
    "3 ounce bright citrus deodorant sensitive skin",
    "car subwoofer high speed dual style power amplifier",
    "gingko light pillow cover hand painted",
    "high speed 3 foot red usb cable",
    "long clip-in hair extension natural looking",
    "space-saving ottoman bench blue living room 100x45x45cm",
    "adjustable led desk lamp touch control",
    "waterproof laptop backpack usb charging port",
    "cotton crew neck t-shirt navy blue large",
};

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string price2(double price) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", price);
  return buf;
}

std::string triple_quote(const std::string& text) {
  std::string escaped;
  for (char c : text) {
    if (c == '"') escaped += "\\\"";
    else escaped += c;
  }
  return "\"\"\"" + escaped + "\"\"\"";
}

struct Queues {
  std::map<std::string, std::vector<std::string>> q;
  void add(const std::string& repl, std::string block) {
    q[repl].push_back(std::move(block));
  }
};

struct TaskPlan {
  const ShopTask* task;
  std::string query;
  std::vector<std::string> page1;          // first page of the ranking
  std::map<std::string, double> prices;
  std::vector<std::string> valid;          // page-1 ids under the limit
  std::map<std::string, int> match_count;  // true attribute matches
};

TaskPlan plan_task(const std::vector<CatalogItem>& catalog,
                   const std::vector<ShopTask>& tasks, int index) {
  TaskPlan plan;
  plan.task = &tasks[index];
  plan.query = kQueries[index];
  MiniShopEnv env(catalog, tasks);
  env.reset(index);
  std::vector<std::string> ranking = env.search_ranking(plan.query);
  for (std::size_t i = 0; i < ranking.size() && i < 3; ++i)
    plan.page1.push_back(ranking[i]);
  for (const std::string& id : plan.page1) {
    const CatalogItem* item = nullptr;
    for (const CatalogItem& c : catalog)
      if (c.id == id) item = &c;
    plan.prices[id] = item->price;
    int matches = 0;
    for (const std::string& req : plan.task->required_attributes) {
      for (const std::string& attr : item->attributes)
        if (lower(attr) == lower(req)) {
          ++matches;
          break;
        }
    }
    plan.match_count[id] = matches;
    if (item->price < plan.task->max_price) plan.valid.push_back(id);
  }
  // sanity: the intended target must be the first argmax candidate
  if (plan.valid.empty() ||
      plan.task->target_ids.count(plan.valid.front()) == 0) {
    std::cerr << "task " << index
              << ": target is not the leading valid candidate\n";
    std::exit(1);
  }
  for (const std::string& id : plan.valid)
    if (plan.match_count[id] >= plan.match_count[plan.valid.front()] &&
        id != plan.valid.front()) {
      std::cerr << "task " << index << ": candidate " << id
                << " ties or beats the target score\n";
      std::exit(1);
    }
  return plan;
}

std::string attributes_block(const ShopTask& task) {
  std::string out = "attributes = [";
  bool first = true;
  for (const std::string& attr : task.required_attributes) {
    if (!first) out += ", ";
    first = false;
    out += triple_quote(attr);
  }
  out += "] # save the list of desired attributes besides price, escape any quotes";
  return out;
}

void emit_full_task(Queues& queues, const TaskPlan& plan) {
  const ShopTask& task = *plan.task;
  // _main
  queues.add("_main", "description = " + triple_quote(task.instruction));
  queues.add("_main", attributes_block(task));
  queues.add("_main",
             "search_query = generate_query(description) # get a search "
             "statement to find the item");
  queues.add("_main", "act(f'search[{search_query}]')");
  queues.add("_main", "valid_ids = filter_ids_by_price(description)");
  queues.add("_main",
             "best_id = select_best_product(description, attributes, "
             "valid_ids)");
  queues.add("_main", "buy_best_product(best_id, attributes)");

  // generate_query (demo-pooled)
  queues.add("generate_query",
             "description = get_args() # call this once to get the "
             "description of the target product so that you can generate "
             "search queries accordingly");
  queues.add("generate_query",
             "print(description) # print out the description so that you "
             "know what it is");
  queues.add("generate_query", "query = " + triple_quote(plan.query));
  queues.add("generate_query", "answer(query) # answer the query to return it.");

  // filter_ids_by_price (spawned fresh every episode)
  queues.add("filter_ids_by_price",
             "Your task is to: Read the prices on the current results page "
             "and answer the list of product ids below the price limit.");
  queues.add("filter_ids_by_price",
             "description = get_args() # call this once to get the "
             "description of the target product");
  queues.add("filter_ids_by_price",
             "max_price = " + price2(task.max_price) +
                 " # store the max price from the description");
  queues.add("filter_ids_by_price",
             "print_page() # call this function to print out the list of "
             "products");
  queues.add("filter_ids_by_price",
             "id_to_price = {} # record an id to price dictionary");
  for (const std::string& id : plan.page1)
    queues.add("filter_ids_by_price",
               "id_to_price['" + id + "'] = " + price2(plan.prices.at(id)) +
                   " # item " + id + " has a price of $" +
                   price2(plan.prices.at(id)));
  queues.add("filter_ids_by_price",
             "results = [id for id, price in id_to_price.items() if price < "
             "max_price]");
  queues.add("filter_ids_by_price",
             "answer(results) # answer with the result of the ids that are "
             "below max_price");

  // select_best_product (demo-pooled)
  queues.add("select_best_product",
             "description, attributes, candidates = get_args() # get the "
             "target description and product candidates");
  queues.add("select_best_product", "scores = {}");
  queues.add("select_best_product",
             "for product_id in candidates:\n"
             "    act(f'click[{product_id}]') # go to the product's page details\n"
             "    scores[product_id] = check_requirements(description, attributes)\n"
             "    act(f'click[< Prev]') # always perform this step to get back "
             "to the list of results");
  queues.add("select_best_product",
             "products_with_max_score = [product_id for product_id, "
             "estimated_score in scores.items() if estimated_score == "
             "max(scores.values())]");
  queues.add("select_best_product",
             "answer(products_with_max_score[0]) # return the id of the first "
             "best candidate");

  // check_requirements (demo-pooled), one invocation per candidate
  for (const std::string& id : plan.valid) {
    queues.add("check_requirements",
               "target_description, requirements = get_args() # get the "
               "requirements and product_info");
    queues.add("check_requirements",
               "print(requirements) # print out the requirements");
    queues.add("check_requirements",
               "print_page() # print the product page so we can check the "
               "requirements");
    queues.add("check_requirements",
               "answer(" + std::to_string(plan.match_count.at(id)) +
                   ") # the number of requirements met on this page");
  }

  // buy_best_product (demo-pooled)
  queues.add("buy_best_product", "product_asin, attributes = get_args()");
  queues.add("buy_best_product", "act(f'click[{product_asin}]')");
  queues.add("buy_best_product",
             "select_options(attributes) # select the item options based on "
             "the attributes before buying");
  queues.add("buy_best_product",
             "act('click[Buy Now]') # Buy the item to complete the task.");

  // select_options / get_page_options (spawned fresh every episode)
  queues.add("select_options",
             "Your task is to: Select any buying variations the attributes "
             "require on the current product page, then answer success.");
  queues.add("select_options", "attributes = get_args()");
  queues.add("select_options",
             "get_page_options() # return the list of page options (if any)");
  if (task.required_options.empty()) {
    queues.add("select_options",
               "print(attributes) # print out the target attributes to "
               "confirm there are no buying variations to select.");
  } else {
    for (const auto& [name, value] : task.required_options)
      queues.add("select_options",
                 "act('click[" + value + "]') # select the " + name +
                     " variation");
  }
  queues.add("select_options", "answer('success.')");

  queues.add("get_page_options",
             "Your task is to: Print the current page and answer which buying "
             "variations it offers.");
  queues.add("get_page_options",
             "print_page() # print out the current observation to see if "
             "there are any buying variations to select before buying.");
  if (task.required_options.empty()) {
    queues.add("get_page_options",
               "variations = [] # save variations (if any) in a list");
    queues.add("get_page_options", "answer(\"no options found.\")");
  } else {
    std::string names = "variations = [";
    bool first = true;
    for (const auto& [name, _] : task.required_options) {
      if (!first) names += ", ";
      first = false;
      names += "'" + name + "'";
    }
    names += "] # the option names listed on this page";
    queues.add("get_page_options", names);
    queues.add("get_page_options", "answer(variations)");
  }
}

void emit_nosubtask_task(Queues& queues, const TaskPlan& plan) {
  const ShopTask& task = *plan.task;
  queues.add("_main", "description = " + triple_quote(task.instruction));
  queues.add("_main", "act('search[" + plan.query + "]')");
  queues.add("_main",
             "# The leading result matches the request and the price limit, "
             "so open it.");
  queues.add("_main", "act('click[" + plan.valid.front() + "]')");
  for (const auto& [name, value] : task.required_options)
    queues.add("_main",
               "act('click[" + value + "]') # select the " + name + " variation");
  queues.add("_main", "act('click[Buy Now]')");
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    std::exit(1);
  }
  out << doc.dump(2) << "\n";
  std::cout << "wrote " << path << "\n";
}

json queues_to_json(const Queues& queues) {
  json doc = json::object();
  for (const auto& [name, blocks] : queues.q) {
    doc[name] = json::array();
    for (const std::string& block : blocks) doc[name].push_back(block);
  }
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  std::string assets = argc > 1 ? argv[1] : "assets";
  auto catalog = load_catalog(assets + "/catalogs/catalog.json");
  auto tasks = load_shop_tasks(assets + "/catalogs/tasks.json");
  if (tasks.size() != kQueries.size()) {
    std::cerr << "task/query table size mismatch\n";
    return 1;
  }

  std::vector<TaskPlan> plans;
  for (std::size_t i = 0; i < tasks.size(); ++i)
    plans.push_back(plan_task(catalog, tasks, static_cast<int>(i)));

  // full top-3 strategy playbook across all tasks
  Queues full;
  for (const TaskPlan& plan : plans) emit_full_task(full, plan);
  write_json(assets + "/playbooks/webshop_playbook.json", queues_to_json(full));

  // flattened single-REPL variant for the no-subtask ablation
  Queues flat;
  for (const TaskPlan& plan : plans) emit_nosubtask_task(flat, plan);
  write_json(assets + "/playbooks/webshop_nosubtask_playbook.json",
             queues_to_json(flat));

  // single-task file + playbook for the dropped-REPL ablation: the
  // check_requirements queue opens with a zero-shot task description
  {
    json one_task = json::array();
    std::ifstream in(assets + "/catalogs/tasks.json");
    json all;
    in >> all;
    one_task.push_back(all[0]);
    write_json(assets + "/catalogs/tasks_drop.json", one_task);

    Queues drop;
    emit_full_task(drop, plans[0]);
    auto& queue = drop.q["check_requirements"];
    queue.insert(queue.begin(),
                 "Your task is to: (1) Print out the requirements with "
                 "get_args(). (2) Check the current page for matching "
                 "attributes. (3) Return the number of matching attributes "
                 "with answer(INTEGER)");
    write_json(assets + "/playbooks/webshop_drop_playbook.json",
               queues_to_json(drop));
  }

  // single-task file + playbook for the buggy-demo ablation: the scripted
  // LLM first imitates the injected bug, hits the syntax error, then
  // corrects itself by escaping the quotes
  {
    json one_task = json::array();
    std::ifstream in(assets + "/catalogs/tasks.json");
    json all;
    in >> all;
    one_task.push_back(all[2]);
    write_json(assets + "/catalogs/tasks_buggy.json", one_task);

    Queues buggy;
    emit_full_task(buggy, plans[2]);
    auto& queue = buggy.q["_main"];
    queue.insert(queue.begin() + 1,
                 "all_requirements = [\"car subwoofer\", \"high speed\", "
                 "\"dual style\", \"12\" power amplifier\", \"<200.00 "
                 "dollars\"] # you must put the item category in the first "
                 "place, each term should be as short/broken down as possible");
    queue[2] =
        "attributes = [\"car subwoofer\", \"high speed\", \"dual style\", "
        "\"12\\\" power amplifier\"] # corrected the syntax error by escaping "
        "the double quotes";
    write_json(assets + "/playbooks/webshop_buggy_playbook.json",
               queues_to_json(buggy));
  }

  return 0;
}
