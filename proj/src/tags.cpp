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

#include "sdm/tags.hpp"

#include <algorithm>

#include "sdm/error.hpp"

namespace sdm {

std::string_view Tag::name() const {
  const auto slash = path_.rfind('/');
  if (slash == std::string::npos) return path_;
  return std::string_view(path_).substr(slash + 1);
}

void TagRegistry::add_node(const TagTree& node,
                           const std::string& parent_path) {
  if (node.name.empty() || node.name.find('/') != std::string::npos) {
    throw Error(Errc::kInvalidArgument,
                "invalid tag label '" + node.name + "'");
  }
  const std::string path =
      parent_path.empty() ? node.name : parent_path + "/" + node.name;
  if (!parent_.emplace(path, parent_path).second) {
    throw Error(Errc::kInvalidArgument, "tag '" + path + "' registered twice");
  }
  for (const auto& child : node.children) add_node(child, path);
}

void TagRegistry::add_tree(const TagTree& tree) {
  // Validate on a copy so a failing tree leaves the registry untouched.
  TagRegistry staged = *this;
  staged.add_node(tree, "");
  staged.trees_.push_back(tree);
  *this = std::move(staged);
}

std::optional<Tag> TagRegistry::parent(const Tag& tag) const {
  const auto it = parent_.find(tag.path());
  if (it == parent_.end()) {
    throw Error(Errc::kUnknownTag, "unknown tag '" + tag.path() + "'");
  }
  if (it->second.empty()) return std::nullopt;
  return Tag(it->second);
}

std::vector<Tag> TagRegistry::lineage(const Tag& tag) const {
  std::vector<Tag> out{tag};
  for (auto p = parent(tag); p; p = parent(*p)) out.push_back(*p);
  return out;
}

std::vector<Tag> TagRegistry::all() const {
  std::vector<Tag> out;
  out.reserve(parent_.size());
  for (const auto& [path, _] : parent_) out.emplace_back(path);
  return out;
}

std::vector<Tag> TagRegistry::candidates(std::string_view reference) const {
  std::vector<Tag> out;
  if (reference.empty()) return out;
  for (const auto& [path, _] : parent_) {
    if (path == reference) return {Tag(path)};
    if (path.size() > reference.size() &&
        path.compare(path.size() - reference.size(), reference.size(),
                     reference) == 0 &&
        path[path.size() - reference.size() - 1] == '/') {
      out.emplace_back(path);
    }
  }
  return out;
}

Tag TagRegistry::resolve(std::string_view reference) const {
  auto found = candidates(reference);
  if (found.empty()) {
    throw Error(Errc::kUnknownTag,
                "unknown tag '" + std::string(reference) + "'");
  }
  if (found.size() > 1) {
    std::string msg = "ambiguous tag '" + std::string(reference) + "' (";
    for (std::size_t i = 0; i < found.size(); ++i) {
      msg += (i ? ", " : "") + found[i].path();
    }
    throw Error(Errc::kAmbiguousTag, msg + ")");
  }
  return found.front();
}

std::vector<Tag> TagRegistry::resolve_set(
    std::span<const std::string> references) const {
  std::vector<std::optional<Tag>> resolved(references.size());
  std::vector<std::vector<Tag>> pending(references.size());
  for (std::size_t i = 0; i < references.size(); ++i) {
    auto found = candidates(references[i]);
    if (found.empty()) {
      throw Error(Errc::kUnknownTag, "unknown tag '" + references[i] + "'");
    }
    if (found.size() == 1) {
      resolved[i] = found.front();
    } else {
      pending[i] = std::move(found);
    }
  }
  for (std::size_t i = 0; i < references.size(); ++i) {
    if (resolved[i]) continue;
    std::vector<Tag> hits;
    for (const auto& candidate : pending[i]) {
      const auto line = lineage(candidate);
      const bool anchored = std::any_of(
          resolved.begin(), resolved.end(), [&](const auto& other) {
            return other && std::find(line.begin() + 1, line.end(), *other) !=
                                line.end();
          });
      if (anchored) hits.push_back(candidate);
    }
    if (hits.size() != 1) resolve(references[i]);  // throws AmbiguousTag
    resolved[i] = hits.front();
  }
  std::vector<Tag> out;
  out.reserve(resolved.size());
  for (auto& tag : resolved) out.push_back(std::move(*tag));
  return out;
}

bool TagRegistry::implies(const Tag& specific, const Tag& general) const {
  if (!contains(general)) {
    throw Error(Errc::kUnknownTag, "unknown tag '" + general.path() + "'");
  }
  const auto line = lineage(specific);
  return std::find(line.begin(), line.end(), general) != line.end();
}

TagRegistry register_default_trees() {
  TagRegistry registry;
  const auto sides = [](std::string name) {
    return TagTree{std::move(name), {{"Left", {}}, {"Right", {}}}};
  };
  registry.add_tree({"Vehicle lateral activity",
                     {{"Going straight", {}},
                      sides("Changing lane"),
                      sides("Turning"),
                      sides("Swerving")}});
  registry.add_tree({"Vehicle longitudinal activity",
                     {{"Reversing", {}},
                      {"Standing still", {}},
                      {"Driving forward",
                       {{"Decelerating", {}},
                        {"Cruising", {}},
                        {"Accelerating", {}}}}}});
  registry.add_tree({std::string(kEgoVehicleTag), {}});
  return registry;
}

const TagRegistry& default_tag_registry() {
  static const TagRegistry registry = register_default_trees();
  return registry;
}

bool tag_implies(const TagRegistry& registry, std::string_view specific,
                 std::string_view general) {
  return registry.implies(registry.resolve(specific), registry.resolve(general));
}

std::set<Tag> with_ancestors(const TagRegistry& registry,
                             std::span<const Tag> tags) {
  std::set<Tag> out;
  for (const auto& tag : tags) {
    for (auto& t : registry.lineage(tag)) out.insert(std::move(t));
  }
  return out;
}

}  // namespace sdm
