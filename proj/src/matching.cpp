/******************************************************************************
 * Copyright 2026 The SDM Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "sdm/matching.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>

namespace sdm {
namespace {

using Compat = std::vector<std::vector<int>>;  // row -> compatible columns

bool covers(const std::set<Tag>& have, const std::set<Tag>& need) {
  return std::includes(have.begin(), have.end(), need.begin(), need.end());
}

std::set<Tag> tags_of(const Registries& reg, const ScenarioElement& e,
                      const ScenarioElement* category) {
  return resolved_tags(*reg.tags, e.tags, category ? &category->tags : nullptr);
}

// Kuhn's augmenting-path matching; true iff every row can be matched.
bool perfect_row_matching(const Compat& compat, std::size_t columns) {
  std::vector<int> owner(columns, -1);
  std::function<bool(int, std::vector<bool>&)> augment =
      [&](int row, std::vector<bool>& seen) {
        for (int col : compat[row]) {
          if (seen[col]) continue;
          seen[col] = true;
          if (owner[col] < 0 || augment(owner[col], seen)) {
            owner[col] = row;
            return true;
          }
        }
        return false;
      };
  for (std::size_t row = 0; row < compat.size(); ++row) {
    std::vector<bool> seen(columns, false);
    if (!augment(static_cast<int>(row), seen)) return false;
  }
  return true;
}

/// Injective assignment search for two element classes (actors, activities)
/// tied together by act constraints.
class ActSearch {
 public:
  ActSearch(const Compat& actors, std::size_t actor_columns,
            const Compat& activities, std::size_t activity_columns,
            std::vector<std::pair<int, int>> required_acts,
            std::set<std::pair<int, int>> available_acts, std::size_t budget)
      : actors_(actors),
        activities_(activities),
        required_(std::move(required_acts)),
        available_(std::move(available_acts)),
        budget_(budget),
        actor_of_(actors.size(), -1),
        activity_of_(activities.size(), -1),
        actor_used_(actor_columns, false),
        activity_used_(activity_columns, false) {}

  bool run() { return assign(0); }

 private:
  bool consistent() const {
    for (const auto& [ac, vc] : required_) {
      const int a = actor_of_[ac];
      const int v = activity_of_[vc];
      if (a >= 0 && v >= 0 && !available_.count({a, v})) return false;
    }
    return true;
  }

  bool assign(std::size_t slot) {
    const std::size_t n_actor = actors_.size();
    if (slot == n_actor + activities_.size()) return true;
    const bool is_actor = slot < n_actor;
    const std::size_t row = is_actor ? slot : slot - n_actor;
    const auto& options = is_actor ? actors_[row] : activities_[row];
    auto& used = is_actor ? actor_used_ : activity_used_;
    auto& chosen = is_actor ? actor_of_ : activity_of_;
    for (int col : options) {
      if (used[col]) continue;
      if (++attempts_ > budget_) {
        throw Error(Errc::kBudgetExceeded,
                    "matching exceeded " + std::to_string(budget_) +
                        " assignment attempts");
      }
      used[col] = true;
      chosen[row] = col;
      if (consistent() && assign(slot + 1)) return true;
      chosen[row] = -1;
      used[col] = false;
    }
    return false;
  }

  const Compat& actors_;
  const Compat& activities_;
  std::vector<std::pair<int, int>> required_;
  std::set<std::pair<int, int>> available_;
  std::size_t budget_;
  std::size_t attempts_ = 0;
  std::vector<int> actor_of_;
  std::vector<int> activity_of_;
  std::vector<bool> actor_used_;
  std::vector<bool> activity_used_;
};

template <typename Rows, typename Cols, typename Fit>
Compat compatibility(const Rows& rows, const Cols& cols, Fit fit) {
  Compat out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (fit(*rows[i], *cols[j])) out[i].push_back(static_cast<int>(j));
    }
  }
  return out;
}

template <typename T>
int index_of(const std::vector<std::shared_ptr<const T>>& list,
             const std::shared_ptr<const T>& item) {
  if (!item) return -1;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i] && list[i]->uid == item->uid) return static_cast<int>(i);
  }
  return -1;
}

bool same_activity_shape(const ActivityCategory& want, const ActivityCategory& have) {
  return want.model == have.model &&
         std::set(want.state_variables.begin(), want.state_variables.end()) ==
             std::set(have.state_variables.begin(), have.state_variables.end());
}

bool solve(const Compat& pe, std::size_t pe_cols, const Compat& actors,
           std::size_t actor_cols, const Compat& activities,
           std::size_t activity_cols, std::vector<std::pair<int, int>> required,
           std::set<std::pair<int, int>> available, std::size_t budget) {
  for (const auto& [a, v] : required) {
    if (a < 0 || v < 0) return false;
  }
  if (!perfect_row_matching(pe, pe_cols) ||
      !perfect_row_matching(actors, actor_cols) ||
      !perfect_row_matching(activities, activity_cols)) {
    return false;
  }
  return ActSearch(actors, actor_cols, activities, activity_cols,
                   std::move(required), std::move(available), budget)
      .run();
}

}  // namespace

bool comprises(const ScenarioCategory& category, const Scenario& scenario,
               const Registries& reg, MatchOptions options) {
  if (!covers(derived_tags(scenario, reg),
              resolved_tags(*reg.tags, category.tags))) {
    return false;
  }
  const auto pe = compatibility(
      category.physical_element_categories, scenario.physical_elements,
      [&](const PhysicalElementCategory& want, const PhysicalElement& have) {
        return covers(tags_of(reg, have, have.category.get()),
                      tags_of(reg, want, nullptr));
      });
  const auto actors = compatibility(
      category.actor_categories, scenario.actors,
      [&](const ActorCategory& want, const Actor& have) {
        return have.category && have.category->actor_type == want.actor_type &&
               covers(tags_of(reg, have, have.category.get()),
                      tags_of(reg, want, nullptr));
      });
  const auto activities = compatibility(
      category.activity_categories, scenario.activities,
      [&](const ActivityCategory& want, const Activity& have) {
        return have.category && same_activity_shape(want, *have.category) &&
               covers(tags_of(reg, have, have.category.get()),
                      tags_of(reg, want, nullptr));
      });
  std::vector<std::pair<int, int>> required;
  for (const auto& act : category.acts) {
    required.emplace_back(index_of(category.actor_categories, act.actor_category),
                          index_of(category.activity_categories,
                                   act.activity_category));
  }
  std::set<std::pair<int, int>> available;
  for (const auto& act : scenario.acts) {
    available.emplace(index_of(scenario.actors, act.actor),
                      index_of(scenario.activities, act.activity));
  }
  return solve(pe, scenario.physical_elements.size(), actors,
               scenario.actors.size(), activities, scenario.activities.size(),
               std::move(required), std::move(available), options.budget);
}

bool includes(const ScenarioCategory& c2, const ScenarioCategory& c1,
              const Registries& reg, MatchOptions options) {
  if (!covers(resolved_tags(*reg.tags, c1.tags),
              resolved_tags(*reg.tags, c2.tags))) {
    return false;
  }
  auto tags = [&](const ScenarioElement& e) { return tags_of(reg, e, nullptr); };
  const auto pe = compatibility(
      c2.physical_element_categories, c1.physical_element_categories,
      [&](const PhysicalElementCategory& want, const PhysicalElementCategory& have) {
        return covers(tags(have), tags(want));
      });
  const auto actors = compatibility(
      c2.actor_categories, c1.actor_categories,
      [&](const ActorCategory& want, const ActorCategory& have) {
        return want.actor_type == have.actor_type && covers(tags(have), tags(want));
      });
  const auto activities = compatibility(
      c2.activity_categories, c1.activity_categories,
      [&](const ActivityCategory& want, const ActivityCategory& have) {
        return same_activity_shape(want, have) && covers(tags(have), tags(want));
      });
  std::vector<std::pair<int, int>> required;
  for (const auto& act : c2.acts) {
    required.emplace_back(index_of(c2.actor_categories, act.actor_category),
                          index_of(c2.activity_categories, act.activity_category));
  }
  std::set<std::pair<int, int>> available;
  for (const auto& act : c1.acts) {
    available.emplace(index_of(c1.actor_categories, act.actor_category),
                      index_of(c1.activity_categories, act.activity_category));
  }
  return solve(pe, c1.physical_element_categories.size(), actors,
               c1.actor_categories.size(), activities,
               c1.activity_categories.size(), std::move(required),
               std::move(available), options.budget);
}

// --- Tag queries -------------------------------------------------------------

struct TagQuery::Node {
  enum class Kind { kAtom, kAnd, kOr, kNot } kind = Kind::kAtom;
  std::vector<Tag> candidates;
  std::vector<std::shared_ptr<const Node>> children;
};

namespace {

using QueryNode = std::shared_ptr<const TagQuery::Node>;

struct QueryToken {
  std::string text;  // "(", ")", "AND", "OR", "NOT" or an atom
  bool atom = false;
  std::size_t pos = 0;
};

std::vector<QueryToken> tokenize_query(std::string_view text) {
  std::vector<QueryToken> out;
  std::size_t i = 0;
  std::string atom;
  std::size_t atom_pos = 0;
  auto flush = [&] {
    if (atom.empty()) return;
    out.push_back({atom, true, atom_pos});
    atom.clear();
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '(' || c == ')') {
      flush();
      out.push_back({std::string(1, c), false, i});
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && text[j] != '(' && text[j] != ')' &&
           !std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    const std::string word(text.substr(i, j - i));
    if (word == "AND" || word == "OR" || word == "NOT") {
      flush();
      out.push_back({word, false, i});
    } else {
      if (atom.empty()) {
        atom_pos = i;
      } else {
        atom += ' ';
      }
      atom += word;
    }
    i = j;
  }
  flush();
  return out;
}

class QueryParser {
 public:
  QueryParser(std::string_view text, const TagRegistry& registry)
      : tokens_(tokenize_query(text)), registry_(registry), length_(text.size()) {}

  QueryNode run() {
    auto root = disjunction();
    if (pos_ != tokens_.size()) fail({"AND", "OR", "end of input"});
    return root;
  }

 private:
  bool accept(std::string_view op) {
    if (pos_ < tokens_.size() && !tokens_[pos_].atom && tokens_[pos_].text == op) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    if (pos_ < tokens_.size()) {
      throw SyntaxError(tokens_[pos_].pos, std::move(expected), tokens_[pos_].text);
    }
    throw SyntaxError(length_, std::move(expected), "end of input");
  }

  QueryNode combine(TagQuery::Node::Kind kind, std::vector<QueryNode> items) {
    if (items.size() == 1) return items.front();
    auto node = std::make_shared<TagQuery::Node>();
    node->kind = kind;
    node->children = std::move(items);
    return node;
  }

  QueryNode disjunction() {
    std::vector<QueryNode> items{conjunction()};
    while (accept("OR")) items.push_back(conjunction());
    return combine(TagQuery::Node::Kind::kOr, std::move(items));
  }

  QueryNode conjunction() {
    std::vector<QueryNode> items{negation()};
    while (accept("AND")) items.push_back(negation());
    return combine(TagQuery::Node::Kind::kAnd, std::move(items));
  }

  QueryNode negation() {
    if (accept("NOT")) {
      auto node = std::make_shared<TagQuery::Node>();
      node->kind = TagQuery::Node::Kind::kNot;
      node->children = {negation()};
      return node;
    }
    if (accept("(")) {
      auto inner = disjunction();
      if (!accept(")")) fail({")"});
      return inner;
    }
    if (pos_ < tokens_.size() && tokens_[pos_].atom) {
      auto node = std::make_shared<TagQuery::Node>();
      node->candidates = registry_.candidates(tokens_[pos_].text);
      if (node->candidates.empty()) {
        throw Error(Errc::kUnknownTag,
                    "unknown tag '" + tokens_[pos_].text + "'");
      }
      ++pos_;
      return node;
    }
    fail({"tag", "NOT", "("});
  }

  std::vector<QueryToken> tokens_;
  const TagRegistry& registry_;
  std::size_t length_;
  std::size_t pos_ = 0;
};

bool eval_query(const TagQuery::Node& node, const std::set<Tag>& tags) {
  using Kind = TagQuery::Node::Kind;
  switch (node.kind) {
    case Kind::kAtom:
      return std::any_of(node.candidates.begin(), node.candidates.end(),
                         [&](const Tag& t) { return tags.count(t) > 0; });
    case Kind::kAnd:
      return std::all_of(node.children.begin(), node.children.end(),
                         [&](const auto& c) { return eval_query(*c, tags); });
    case Kind::kOr:
      return std::any_of(node.children.begin(), node.children.end(),
                         [&](const auto& c) { return eval_query(*c, tags); });
    case Kind::kNot:
      return !eval_query(*node.children.front(), tags);
  }
  return false;
}

}  // namespace

TagQuery TagQuery::parse(std::string_view text, const TagRegistry& registry) {
  TagQuery query;
  query.root_ = QueryParser(text, registry).run();
  return query;
}

bool TagQuery::matches(const std::set<Tag>& tags) const {
  return eval_query(*root_, tags);
}

std::vector<ScenarioPtr> select(std::span<const ScenarioPtr> library,
                                std::string_view query, const Registries& reg) {
  const auto q = TagQuery::parse(query, *reg.tags);
  std::vector<ScenarioPtr> out;
  for (const auto& scenario : library) {
    if (scenario && q.matches(derived_tags(*scenario, reg))) out.push_back(scenario);
  }
  return out;
}

}  // namespace sdm
