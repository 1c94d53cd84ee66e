#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "envs/env.hpp"

namespace llmrepl::envs {

struct CatalogItem {
  std::string id;  // ASIN-like
  std::string title;
  double price = 0.0;
  std::set<std::string> attributes;
  // option name -> selectable values, insertion-ordered
  std::vector<std::pair<std::string, std::vector<std::string>>> options;
  std::string description;
  std::string features;
};

struct ShopTask {
  std::string instruction;
  std::set<std::string> required_attributes;
  double max_price = 0.0;
  std::map<std::string, std::string> required_options;
  std::set<std::string> target_ids;
};

std::vector<CatalogItem> load_catalog(const std::string& path);
std::vector<ShopTask> load_shop_tasks(const std::string& path);

// Deterministic desk-scale WebShop-style storefront. Search ranks the
// catalog by shared lowercase token count between the query and the item's
// title plus attributes, ties broken by id ascending, paginated k per page.
// Buying scores (matched attributes + price-ok + matched options) over
// (required attributes + 1 + required options).
class MiniShopEnv : public Environment {
 public:
  MiniShopEnv(std::vector<CatalogItem> catalog, std::vector<ShopTask> tasks,
              int page_size = 3);

  std::string reset(int task_id) override;
  EnvResult step(const std::string& action) override;
  double score() const override { return score_; }
  std::string task_instruction() const override;

  // exposed for tests and fixture tooling
  std::vector<std::string> search_ranking(const std::string& query) const;
  std::string render_results_page() const;
  std::string render_item_page(const std::string& id) const;
  const ShopTask& task() const { return tasks_[task_id_]; }

 private:
  enum class Page { Home, Results, Item, Section };

  const CatalogItem* find_item(const std::string& id) const;
  std::string current_page_text() const;
  std::vector<std::string> page_ids() const;
  double purchase_reward(const CatalogItem& item) const;
  EnvResult invalid(const std::string& action);

  std::vector<CatalogItem> catalog_;
  std::vector<ShopTask> tasks_;
  int page_size_;

  int task_id_ = 0;
  bool done_ = false;
  double score_ = 0.0;
  Page page_ = Page::Home;
  std::vector<std::string> results_;  // full ranking for the current query
  int page_index_ = 1;                // 1-based results page
  std::string item_id_;
  std::string section_;  // Description / Features / Reviews / Attributes
  std::map<std::string, std::string> selected_options_;
};

}  // namespace llmrepl::envs
