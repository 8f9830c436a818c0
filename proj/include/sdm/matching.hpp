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

#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdm/elements.hpp"

namespace sdm {

struct MatchOptions {
  /// Upper bound on tentative assignments tried by the backtracking search.
  std::size_t budget = 10000;
};

/// C comprises S: every element category of C maps to a distinct compatible
/// element of S (same actor type / model kind and state variables, tags
/// implied by the element's own and category tags) such that every act of C
/// maps onto an act of S. Tags of C itself must be implied by derived_tags(S).
/// Throws BudgetExceeded.
bool comprises(const ScenarioCategory& category, const Scenario& scenario,
               const Registries& reg = {}, MatchOptions options = {});

/// C2 includes C1 (sufficient test): each requirement of c2 is subsumed by a
/// distinct requirement of c1, acts included. When true, every scenario
/// comprised by c1 is comprised by c2. Throws BudgetExceeded.
bool includes(const ScenarioCategory& c2, const ScenarioCategory& c1,
              const Registries& reg = {}, MatchOptions options = {});

/// Boolean query over tag names: atoms are tag references (labels, suffixes
/// or paths, may contain spaces), combined with AND, OR, NOT and
/// parentheses. NOT binds tightest, then AND, then OR.
class TagQuery {
 public:
  /// Throws SyntaxError, UnknownTag.
  static TagQuery parse(std::string_view text,
                        const TagRegistry& registry = default_tag_registry());

  /// `tags` must already be closed under ancestors. An atom whose label is
  /// ambiguous holds when any of its candidate tags is present.
  bool matches(const std::set<Tag>& tags) const;

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
};

/// Scenarios whose derived tags satisfy the query, in input order.
std::vector<ScenarioPtr> select(std::span<const ScenarioPtr> library,
                                std::string_view query,
                                const Registries& reg = {});

}  // namespace sdm
