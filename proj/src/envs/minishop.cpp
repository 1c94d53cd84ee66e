#include "envs/minishop.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace llmrepl::envs {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::set<std::string> tokens_of(const std::string& text) {
  std::set<std::string> out;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!current.empty()) {
      out.insert(current);
      current.clear();
    }
  }
  if (!current.empty()) out.insert(current);
  return out;
}

std::string format_price(double price) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << price;
  return os.str();
}

}  // namespace

std::vector<CatalogItem> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EnvError("cannot open catalog file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw EnvError("malformed catalog file " + path + ": " + e.what());
  }
  std::vector<CatalogItem> catalog;
  std::set<std::string> seen;
  for (const auto& row : doc) {
    CatalogItem item;
    item.id = row.at("id").get<std::string>();
    item.title = row.at("title").get<std::string>();
    item.price = row.at("price").get<double>();
    if (item.price <= 0)
      throw EnvError("catalog item " + item.id + " has non-positive price");
    if (!seen.insert(item.id).second)
      throw EnvError("duplicate catalog id " + item.id);
    for (const auto& a : row.value("attributes", nlohmann::json::array()))
      item.attributes.insert(a.get<std::string>());
    if (row.contains("options")) {
      for (const auto& [name, values] : row["options"].items()) {
        std::vector<std::string> vs;
        for (const auto& v : values) vs.push_back(v.get<std::string>());
        item.options.emplace_back(name, std::move(vs));
      }
      std::sort(item.options.begin(), item.options.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    item.description = row.value("description", "");
    item.features = row.value("features", "");
    catalog.push_back(std::move(item));
  }
  return catalog;
}

std::vector<ShopTask> load_shop_tasks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EnvError("cannot open task file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw EnvError("malformed task file " + path + ": " + e.what());
  }
  std::vector<ShopTask> tasks;
  for (const auto& row : doc) {
    ShopTask task;
    task.instruction = row.at("instruction").get<std::string>();
    for (const auto& a : row.value("required_attributes", nlohmann::json::array()))
      task.required_attributes.insert(a.get<std::string>());
    task.max_price = row.value("max_price", 0.0);
    if (row.contains("required_options"))
      for (const auto& [name, value] : row["required_options"].items())
        task.required_options[name] = value.get<std::string>();
    for (const auto& t : row.value("target_ids", nlohmann::json::array()))
      task.target_ids.insert(t.get<std::string>());
    tasks.push_back(std::move(task));
  }
  return tasks;
}

MiniShopEnv::MiniShopEnv(std::vector<CatalogItem> catalog,
                         std::vector<ShopTask> tasks, int page_size)
    : catalog_(std::move(catalog)), tasks_(std::move(tasks)),
      page_size_(page_size) {
  std::sort(catalog_.begin(), catalog_.end(),
            [](const CatalogItem& a, const CatalogItem& b) { return a.id < b.id; });
}

std::string MiniShopEnv::task_instruction() const {
  return tasks_[task_id_].instruction;
}

std::string MiniShopEnv::reset(int task_id) {
  if (task_id < 0 || task_id >= static_cast<int>(tasks_.size()))
    throw EnvError("task id out of range: " + std::to_string(task_id));
  task_id_ = task_id;
  done_ = false;
  score_ = 0.0;
  page_ = Page::Home;
  results_.clear();
  page_index_ = 1;
  item_id_.clear();
  section_.clear();
  selected_options_.clear();
  return current_page_text();
}

const CatalogItem* MiniShopEnv::find_item(const std::string& id) const {
  for (const CatalogItem& item : catalog_)
    if (item.id == id) return &item;
  return nullptr;
}

std::vector<std::string> MiniShopEnv::search_ranking(
    const std::string& query) const {
  std::set<std::string> query_tokens = tokens_of(query);
  std::vector<std::pair<int, std::string>> scored;
  for (const CatalogItem& item : catalog_) {
    std::string haystack = item.title;
    for (const std::string& a : item.attributes) haystack += " " + a;
    std::set<std::string> item_tokens = tokens_of(haystack);
    int overlap = 0;
    for (const std::string& t : query_tokens)
      if (item_tokens.count(t)) ++overlap;
    if (overlap > 0) scored.emplace_back(overlap, item.id);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) {
                     if (a.first != b.first) return a.first > b.first;
                     return a.second < b.second;
                   });
  std::vector<std::string> ids;
  ids.reserve(scored.size());
  for (const auto& [_, id] : scored) ids.push_back(id);
  return ids;
}

std::vector<std::string> MiniShopEnv::page_ids() const {
  std::vector<std::string> ids;
  std::size_t begin = static_cast<std::size_t>(page_index_ - 1) * page_size_;
  for (std::size_t i = begin;
       i < results_.size() && i < begin + static_cast<std::size_t>(page_size_);
       ++i)
    ids.push_back(results_[i]);
  return ids;
}

std::string MiniShopEnv::render_results_page() const {
  std::ostringstream os;
  os << "[Back to Search]\n";
  os << "Page " << page_index_ << " (Total results: " << results_.size()
     << ")\n";
  if (page_index_ > 1) os << "[< Prev]\n";
  if (static_cast<std::size_t>(page_index_) * page_size_ < results_.size())
    os << "[Next >]\n";
  for (const std::string& id : page_ids()) {
    const CatalogItem* item = find_item(id);
    os << "[" << id << "]\n" << item->title << "\n$" << format_price(item->price)
       << "\n";
  }
  std::string text = os.str();
  text.pop_back();  // drop trailing newline
  return text;
}

std::string MiniShopEnv::render_item_page(const std::string& id) const {
  const CatalogItem* item = find_item(id);
  if (!item) return "";
  std::ostringstream os;
  os << "[Back to Search]\n[< Prev]\n";
  for (const auto& [name, values] : item->options) {
    os << name << " ";
    for (const std::string& v : values) os << "[" << v << "]";
    os << "\n";
  }
  os << item->title << "\n";
  os << "Price: $" << format_price(item->price) << "\n";
  os << "Rating: N.A.\n";
  os << "[Description]\n[Features]\n[Reviews]\n[Attributes]\n";
  os << "[Buy Now]";
  if (!item->options.empty()) {
    bool all_selected = true;
    std::vector<std::string> missing;
    for (const auto& [name, _] : item->options)
      if (!selected_options_.count(name)) {
        all_selected = false;
        missing.push_back(name);
      }
    if (!all_selected) {
      os << " (You must select buying variation for ";
      for (std::size_t i = 0; i < missing.size(); ++i) {
        if (i) os << ", ";
        os << missing[i];
      }
      os << " before buying this product)";
    }
    os << "\nSelected Buying Variation Options: ";
    bool first = true;
    for (const auto& [name, _] : item->options) {
      if (!first) os << ", ";
      first = false;
      auto it = selected_options_.find(name);
      os << name << ": " << (it == selected_options_.end() ? "None" : it->second);
    }
  }
  return os.str();
}

std::string MiniShopEnv::current_page_text() const {
  switch (page_) {
    case Page::Home:
      return "WebShop\nInstruction:\n" + tasks_[task_id_].instruction +
             "\n[Search]";
    case Page::Results:
      return render_results_page();
    case Page::Item:
      return render_item_page(item_id_);
    case Page::Section: {
      const CatalogItem* item = find_item(item_id_);
      std::string body;
      if (section_ == "Description") body = item->description;
      else if (section_ == "Features") body = item->features;
      else if (section_ == "Attributes") {
        bool first = true;
        for (const std::string& a : item->attributes) {
          if (!first) body += "\n";
          first = false;
          body += a;
        }
      } else {
        body = "No reviews yet.";
      }
      if (body.empty()) body = "(empty)";
      return "[Back to Search]\n[< Prev]\n" + body;
    }
  }
  return "";
}

double MiniShopEnv::purchase_reward(const CatalogItem& item) const {
  const ShopTask& task = tasks_[task_id_];
  double matched = 0;
  for (const std::string& req : task.required_attributes) {
    std::string want = lower(req);
    for (const std::string& have : item.attributes)
      if (lower(have) == want) {
        matched += 1;
        break;
      }
  }
  double price_ok = item.price <= task.max_price ? 1.0 : 0.0;
  double options_ok = 0;
  for (const auto& [name, value] : task.required_options) {
    auto it = selected_options_.find(name);
    if (it != selected_options_.end() && lower(it->second) == lower(value))
      options_ok += 1;
  }
  double denom = static_cast<double>(task.required_attributes.size()) + 1.0 +
                 static_cast<double>(task.required_options.size());
  return (matched + price_ok + options_ok) / denom;
}

EnvResult MiniShopEnv::invalid(const std::string& action) {
  return {"Invalid action: " + action + "\n" + current_page_text(), 0.0, false};
}

EnvResult MiniShopEnv::step(const std::string& action) {
  if (done_) throw EnvError("step after done");
  if (action.rfind("search[", 0) == 0 && action.back() == ']') {
    std::string query = action.substr(7, action.size() - 8);
    results_ = search_ranking(query);
    page_ = Page::Results;
    page_index_ = 1;
    item_id_.clear();
    selected_options_.clear();
    return {current_page_text(), 0.0, false};
  }
  if (action.rfind("click[", 0) != 0 || action.back() != ']')
    return invalid(action);
  std::string target = action.substr(6, action.size() - 7);
  if (target == "Back to Search") {
    page_ = Page::Home;
    results_.clear();
    page_index_ = 1;
    item_id_.clear();
    selected_options_.clear();
    return {current_page_text(), 0.0, false};
  }
  switch (page_) {
    case Page::Home:
      return invalid(action);
    case Page::Results: {
      if (target == "Next >") {
        if (static_cast<std::size_t>(page_index_) * page_size_ <
            results_.size()) {
          ++page_index_;
          return {current_page_text(), 0.0, false};
        }
        return {"Invalid action: no more pages\n" + current_page_text(), 0.0,
                false};
      }
      if (target == "< Prev") {
        if (page_index_ > 1) {
          --page_index_;
          return {current_page_text(), 0.0, false};
        }
        return {"Invalid action: already on the first page\n" +
                    current_page_text(),
                0.0, false};
      }
      for (const std::string& id : page_ids()) {
        if (target == id) {
          page_ = Page::Item;
          item_id_ = id;
          selected_options_.clear();
          return {current_page_text(), 0.0, false};
        }
      }
      return invalid(action);
    }
    case Page::Item: {
      const CatalogItem* item = find_item(item_id_);
      if (target == "< Prev") {
        page_ = Page::Results;
        item_id_.clear();
        selected_options_.clear();
        return {current_page_text(), 0.0, false};
      }
      if (target == "Buy Now") {
        done_ = true;
        score_ = purchase_reward(*item);
        return {"Thank you for shopping with us!", score_, true};
      }
      if (target == "Description" || target == "Features" ||
          target == "Reviews" || target == "Attributes") {
        page_ = Page::Section;
        section_ = target;
        return {current_page_text(), 0.0, false};
      }
      for (const auto& [name, values] : item->options) {
        for (const std::string& v : values) {
          if (target == v) {
            selected_options_[name] = v;
            return {current_page_text(), 0.0, false};
          }
        }
      }
      return invalid(action);
    }
    case Page::Section: {
      if (target == "< Prev") {
        page_ = Page::Item;
        return {current_page_text(), 0.0, false};
      }
      return invalid(action);
    }
  }
  return invalid(action);
}

}  // namespace llmrepl::envs
