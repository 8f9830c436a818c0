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

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdm {

/// A node of a registered tag tree, identified by its full path from the
/// root ("Vehicle lateral activity/Turning/Left"). Leaf labels may repeat
/// across branches; paths never do.
class Tag {
 public:
  Tag() = default;
  explicit Tag(std::string path) : path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  /// Last path component.
  std::string_view name() const;

  auto operator<=>(const Tag&) const = default;

 private:
  std::string path_;
};

struct TagTree {
  std::string name;
  std::vector<TagTree> children;

  bool operator==(const TagTree&) const = default;
};

/// Forest of tag trees. Tags are referenced either by full path, by a
/// unique path suffix, or by their bare label when that label is unambiguous.
class TagRegistry {
 public:
  /// Throws Errc::kInvalidArgument on empty labels, labels containing '/',
  /// or a path already registered.
  void add_tree(const TagTree& tree);

  const std::vector<TagTree>& trees() const { return trees_; }
  bool contains(const Tag& tag) const { return parent_.count(tag.path()) > 0; }
  std::optional<Tag> parent(const Tag& tag) const;
  /// The tag itself followed by its ancestors up to the root.
  std::vector<Tag> lineage(const Tag& tag) const;
  std::vector<Tag> all() const;

  /// Every registered tag matching a label, path suffix or full path.
  std::vector<Tag> candidates(std::string_view reference) const;
  /// Throws UnknownTag when nothing matches and AmbiguousTag when several do.
  Tag resolve(std::string_view reference) const;
  /// Resolves a tag list attached to one element. An ambiguous label is
  /// accepted when exactly one of its candidates descends from another tag of
  /// the same list ({"Turning", "Left"} picks Turning/Left).
  std::vector<Tag> resolve_set(std::span<const std::string> references) const;

  /// True iff `general` is `specific` or one of its ancestors.
  bool implies(const Tag& specific, const Tag& general) const;

 private:
  void add_node(const TagTree& node, const std::string& parent_path);

  std::vector<TagTree> trees_;
  // path -> parent path ("" for roots)
  std::map<std::string, std::string> parent_;
};

/// The lateral and longitudinal vehicle-activity trees plus the standalone
/// "Ego vehicle" tag.
TagRegistry register_default_trees();

const TagRegistry& default_tag_registry();

inline constexpr std::string_view kEgoVehicleTag = "Ego vehicle";

/// String form of TagRegistry::implies. Throws UnknownTag / AmbiguousTag.
bool tag_implies(const TagRegistry& registry, std::string_view specific,
                 std::string_view general);

/// Closure of a tag set under the ancestor relation.
std::set<Tag> with_ancestors(const TagRegistry& registry,
                             std::span<const Tag> tags);

}  // namespace sdm
