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

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sdm/elements.hpp"

namespace sdm {

inline constexpr std::string_view kFormatVersion = "1.0.0";
inline constexpr std::string_view kFileExtension = ".scn.json";
inline constexpr std::string_view kIndexFile = "index.scn.json";

class ParseError : public Error {
 public:
  /// line and column are 1-based; 0 when the error has no text position.
  ParseError(const std::string& origin, std::size_t line, std::size_t column,
             const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

using AnyElement =
    std::variant<PhysicalElementCategoryPtr, ActorCategoryPtr, ActivityCategoryPtr,
                 PhysicalElementPtr, ActorPtr, EventPtr, ActivityPtr, ScenarioPtr,
                 ScenarioCategoryPtr>;

/// Contents of one file.
struct Document {
  std::string kind;  // scenario, scenario_category, tag_trees, library_index
  ScenarioPtr scenario;
  ScenarioCategoryPtr category;
  std::vector<TagTree> tag_trees;
  std::map<std::string, std::string> index;  // uid -> file
};

/// A directory (or in-memory set) of .scn.json files addressed by paths
/// relative to the root, with a uid index and a cache of loaded objects.
/// Elements shared between files are loaded once.
class Library {
 public:
  /// Files are read lazily. The index comes from index.scn.json when present,
  /// otherwise from scanning the directory.
  static Library open(const std::filesystem::path& root);
  /// Relative path -> file contents.
  static Library from_memory(std::map<std::string, std::string> files);

  Library(Library&&) noexcept;
  Library& operator=(Library&&) noexcept;
  ~Library();

  /// Every .scn.json file except the index, sorted.
  std::vector<std::string> files() const;
  std::optional<std::string> read(const std::string& file) const;

  /// uid -> file for every element defined in the library. Throws
  /// DuplicateUid when two files define the same uid.
  const std::map<std::string, std::string>& index();
  std::map<std::string, std::string> build_index() const;
  std::optional<std::string> locate(const std::string& uid);

  /// Throws ParseError, UnresolvedReference, VersionMismatch,
  /// ValidationFailed, IOFailure.
  const Document& load_file(const std::string& file);
  AnyElement element(const std::string& uid);

  /// Roots of every scenario / category file, in file order.
  std::vector<ScenarioPtr> scenarios();
  std::vector<ScenarioCategoryPtr> categories();

  /// Trees of the library's tag_trees files, or the default trees when
  /// there are none.
  const TagRegistry& tags();
  Registries registries();

  struct State;

 private:
  friend struct LibraryAccess;
  explicit Library(std::unique_ptr<State> state);
  std::unique_ptr<State> state_;
};

/// Canonical text. Elements that `library` already holds with identical
/// content are written as {"$ref": uid} and their files listed as imports
/// (relative to `file`, itself relative to the library root). Throws
/// DuplicateUid when the library holds a different element with one of the
/// uids, or holds the root in another file.
std::string serialize(const Scenario& scenario, Library* library = nullptr,
                      const std::string& file = "");
std::string serialize(const ScenarioCategory& category, Library* library = nullptr,
                      const std::string& file = "");
std::string serialize(const std::vector<TagTree>& trees);
std::string serialize_index(const std::map<std::string, std::string>& index);

/// Parses one document. Imports and unknown references are resolved through
/// `library` (file paths relative to its root); without a library only
/// self-contained documents load. Throws ParseError, UnresolvedReference,
/// VersionMismatch, ValidationFailed.
Document parse_document(std::string_view text, Library* library = nullptr,
                        const std::string& origin = "<memory>");

/// Writes serialize(...) to `path`. Throws IOFailure, DuplicateUid.
void save(const Scenario& scenario, const std::filesystem::path& path,
          Library* library = nullptr);
void save(const ScenarioCategory& category, const std::filesystem::path& path,
          Library* library = nullptr);
void save(const std::vector<TagTree>& trees, const std::filesystem::path& path);

/// Loads `path`; references are resolved inside `library` when given,
/// otherwise inside the file's directory. Throws as Library::load_file, and
/// IOFailure for unreadable files.
Document load(const std::filesystem::path& path, Library* library = nullptr);

/// Rewrites <root>/index.scn.json from the files under root.
void write_index(const std::filesystem::path& root);

/// Writes every fixture file plus the index to `dir`.
void write_fixtures(const std::filesystem::path& dir);

/// In-memory library of the bundled fixture files.
Library bundled_fixtures();

/// Embedded fixture files: name -> contents.
const std::map<std::string, std::string>& embedded_fixture_files();

}  // namespace sdm
