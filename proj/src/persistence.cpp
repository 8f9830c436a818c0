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

#include "sdm/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sdm/fixtures.hpp"

namespace sdm {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Library::State {
  std::optional<fs::path> root;
  std::map<std::string, std::string> memory;
  std::optional<std::map<std::string, std::string>> index;
  std::map<std::string, Document> documents;
  std::set<std::string> loading;
  std::map<std::string, AnyElement> cache;
  std::unique_ptr<TagRegistry> tags;
};

struct LibraryAccess {
  static Library::State& state(Library& lib) { return *lib.state_; }
};

namespace {

// --- Helpers -------------------------------------------------------------------

std::string normalize_key(const std::string& key) {
  return fs::path(key).lexically_normal().generic_string();
}

std::string import_path(const std::string& target, const std::string& from_file) {
  const fs::path dir = fs::path(from_file).parent_path();
  if (dir.empty()) return normalize_key(target);
  return fs::path(target).lexically_relative(dir).generic_string();
}

std::string resolve_import(const std::string& import, const std::string& from_file) {
  return normalize_key((fs::path(from_file).parent_path() / import).generic_string());
}

[[noreturn]] void fail(const std::string& origin, const std::string& where,
                       const std::string& message) {
  throw ParseError(origin, 0, 0, (where.empty() ? "" : where + ": ") + message);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_json(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& err) {
    const auto [line, column] = line_column(text, err.byte);
    std::string what = err.what();
    const auto colon = what.rfind(": ");
    throw ParseError(origin, line, column,
                     colon == std::string::npos ? what : what.substr(colon + 2));
  }
}

int class_rank(std::string_view cls) {
  static constexpr std::string_view kOrder[] = {
      "PhysicalElementCategory", "ActorCategory", "ActivityCategory",
      "PhysicalElement",         "Actor",         "Event",
      "Activity",                "Scenario",      "ScenarioCategory"};
  for (std::size_t i = 0; i < std::size(kOrder); ++i) {
    if (kOrder[i] == cls) return static_cast<int>(i);
  }
  return static_cast<int>(std::size(kOrder));
}

template <typename T>
constexpr std::string_view class_name() {
  if constexpr (std::is_same_v<T, PhysicalElementCategory>) {
    return "PhysicalElementCategory";
  } else if constexpr (std::is_same_v<T, ActorCategory>) {
    return "ActorCategory";
  } else if constexpr (std::is_same_v<T, ActivityCategory>) {
    return "ActivityCategory";
  } else if constexpr (std::is_same_v<T, PhysicalElement>) {
    return "PhysicalElement";
  } else if constexpr (std::is_same_v<T, Actor>) {
    return "Actor";
  } else if constexpr (std::is_same_v<T, Event>) {
    return "Event";
  } else if constexpr (std::is_same_v<T, Activity>) {
    return "Activity";
  } else if constexpr (std::is_same_v<T, Scenario>) {
    return "Scenario";
  } else {
    static_assert(std::is_same_v<T, ScenarioCategory>);
    return "ScenarioCategory";
  }
}

std::string_view element_class(const AnyElement& e) {
  return std::visit(
      [](const auto& ptr) {
        return class_name<std::remove_cv_t<
            typename std::decay_t<decltype(ptr)>::element_type>>();
      },
      e);
}

json header_json(const ScenarioElement& e, std::string_view cls) {
  json out = json::object();
  out["class"] = std::string(cls);
  out["uid"] = e.uid;
  out["name"] = e.name;
  out["tags"] = e.tags;
  return out;
}

json quantity_json(double value, const std::string& unit) {
  json out = json::object();
  out["value"] = value;
  if (!unit.empty()) out["unit"] = unit;
  return out;
}

json state_json(const StateVector& sv) {
  json out = json::object();
  for (const auto& [name, q] : sv) out[name] = quantity_json(q.value, q.unit);
  return out;
}

std::string dump(const json& document) { return document.dump(2) + "\n"; }

json envelope(std::string_view kind, json body, json definitions,
              std::set<std::string> imports) {
  json out = json::object();
  out["format_version"] = std::string(kFormatVersion);
  out["kind"] = std::string(kind);
  out["imports"] = json(std::vector<std::string>(imports.begin(), imports.end()));
  out["body"] = std::move(body);
  out["definitions"] = std::move(definitions);
  return out;
}

// --- Writer --------------------------------------------------------------------

class Writer {
 public:
  Writer(Library* library, std::string file)
      : library_(library), file_(normalize_key(file.empty() ? "x" : file)),
        has_file_(!file.empty()) {}

  template <typename Root>
  std::string write(const Root& root, std::string_view kind) {
    if (root.uid.empty()) {
      throw Error(Errc::kInvalidArgument, "cannot save an element without uid");
    }
    if (library_) {
      const auto where = library_->locate(root.uid);
      if (where && !(has_file_ && *where == file_)) {
        throw Error(Errc::kDuplicateUid, "uid '" + root.uid +
                                             "' is already defined in " + *where);
      }
    }
    claimed_.emplace(root.uid, &root);
    json body = encode(root);
    std::stable_sort(definitions_.begin(), definitions_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    json defs = json::array();
    for (auto& [_, d] : definitions_) defs.push_back(std::move(d));
    return dump(envelope(kind, std::move(body), std::move(defs), imports_));
  }

 private:
  /// Reference to `element`, defining or importing it on first sight.
  template <typename T>
  json ref(const std::shared_ptr<const T>& element) {
    if (!element) throw Error(Errc::kDanglingReference, "null reference on save");
    json out = json::object();
    out["$ref"] = element->uid;
    const auto it = claimed_.find(element->uid);
    if (it != claimed_.end()) {
      if (it->second != element.get() && !same_as_claimed<T>(*element)) {
        throw Error(Errc::kDuplicateUid,
                    "uid '" + element->uid + "' names two different elements");
      }
      return out;
    }
    claimed_.emplace(element->uid, element.get());
    seen_.emplace(element->uid, AnyElement(element));
    if (library_) {
      const auto where = library_->locate(element->uid);
      if (where && !(has_file_ && *where == file_)) {
        const AnyElement held = library_->element(element->uid);
        const auto* ptr = std::get_if<std::shared_ptr<const T>>(&held);
        if (!ptr || !(**ptr == *element)) {
          throw Error(Errc::kDuplicateUid,
                      "uid '" + element->uid + "' is defined differently in " + *where);
        }
        imports_.insert(has_file_ ? import_path(*where, file_) : *where);
        return out;
      }
    }
    json def = encode(*element);
    definitions_.emplace_back(class_rank(class_name<T>()), std::move(def));
    return out;
  }

  template <typename T>
  bool same_as_claimed(const T& element) const {
    const auto it = seen_.find(element.uid);
    if (it == seen_.end()) return false;
    const auto* ptr = std::get_if<std::shared_ptr<const T>>(&it->second);
    return ptr && **ptr == element;
  }

  // Fields are visited in key order so discovery order follows the text.
  json encode(const PhysicalElementCategory& c) {
    json out = header_json(c, "PhysicalElementCategory");
    out["description"] = c.description;
    return out;
  }

  json encode(const ActorCategory& c) {
    json out = header_json(c, "ActorCategory");
    out["description"] = c.description;
    out["actor_type"] = std::string(to_string(c.actor_type));
    return out;
  }

  json encode(const ActivityCategory& c) {
    json out = header_json(c, "ActivityCategory");
    out["description"] = c.description;
    out["state_variables"] = c.state_variables;
    out["model"] = c.model;
    return out;
  }

  json encode(const PhysicalElement& e) {
    json out = header_json(e, "PhysicalElement");
    out["category"] = ref(e.category);
    json props = json::object();
    for (const auto& [name, p] : e.properties) {
      json v = json::object();
      if (const auto* d = std::get_if<double>(&p.value)) {
        v["value"] = *d;
      } else {
        v["value"] = std::get<std::string>(p.value);
      }
      if (!p.unit.empty()) v["unit"] = p.unit;
      props[name] = std::move(v);
    }
    out["properties"] = std::move(props);
    return out;
  }

  json encode(const Actor& a) {
    json out = header_json(a, "Actor");
    out["category"] = ref(a.category);
    if (a.desired_state) out["desired_state"] = state_json(*a.desired_state);
    out["initial_state"] = state_json(a.initial_state);
    return out;
  }

  json encode(const Event& e) {
    json out = header_json(e, "Event");
    out["condition"] = print(e.condition);
    return out;
  }

  json encode(const Activity& a) {
    json out = header_json(a, "Activity");
    out["category"] = ref(a.category);
    out["end_event"] = ref(a.end_event);
    out["parameters"] = a.parameters;
    out["start_event"] = ref(a.start_event);
    return out;
  }

  json encode(const Scenario& s) {
    json out = header_json(s, "Scenario");
    json acts = json::array();
    for (const auto& act : s.acts) {
      json a = json::object();
      a["activity"] = ref(act.activity);
      a["actor"] = ref(act.actor);
      acts.push_back(std::move(a));
    }
    out["acts"] = std::move(acts);
    out["activities"] = refs(s.activities);
    out["actors"] = refs(s.actors);
    out["end_event"] = ref(s.end_event);
    out["events"] = refs(s.events);
    out["physical_elements"] = refs(s.physical_elements);
    out["start_event"] = ref(s.start_event);
    return out;
  }

  json encode(const ScenarioCategory& c) {
    json out = header_json(c, "ScenarioCategory");
    json acts = json::array();
    for (const auto& act : c.acts) {
      json a = json::object();
      a["activity_category"] = ref(act.activity_category);
      a["actor_category"] = ref(act.actor_category);
      acts.push_back(std::move(a));
    }
    out["acts"] = std::move(acts);
    out["activity_categories"] = refs(c.activity_categories);
    out["actor_categories"] = refs(c.actor_categories);
    out["description"] = c.description;
    out["physical_element_categories"] = refs(c.physical_element_categories);
    return out;
  }

  template <typename T>
  json refs(const std::vector<std::shared_ptr<const T>>& list) {
    json out = json::array();
    for (const auto& e : list) out.push_back(ref(e));
    return out;
  }

  Library* library_;
  std::string file_;
  bool has_file_;
  std::map<std::string, const void*> claimed_;
  std::map<std::string, AnyElement> seen_;
  std::vector<std::pair<int, json>> definitions_;
  std::set<std::string> imports_;
};

json tree_json(const TagTree& tree) {
  json out = json::object();
  out["name"] = tree.name;
  json children = json::array();
  for (const auto& c : tree.children) children.push_back(tree_json(c));
  out["children"] = std::move(children);
  return out;
}

// --- Reader --------------------------------------------------------------------

class Fields {
 public:
  Fields(const json& object, std::string where, const std::string& origin)
      : object_(object), where_(std::move(where)), origin_(origin) {
    if (!object_.is_object()) fail(origin_, where_, "expected an object");
  }

  const json* optional(const char* key) {
    used_.insert(key);
    const auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  const json& required(const char* key) {
    const json* v = optional(key);
    if (!v) fail(origin_, where_, std::string("missing field '") + key + "'");
    return *v;
  }

  std::string string(const char* key) {
    const json& v = required(key);
    if (!v.is_string()) fail(origin_, at(key), "expected a string");
    return v.get<std::string>();
  }

  double number(const json& v, const std::string& where) const {
    if (!v.is_number()) fail(origin_, where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(origin_, where, "number is not finite");
    return d;
  }

  std::vector<std::string> strings(const char* key) {
    const json& v = required(key);
    if (!v.is_array()) fail(origin_, at(key), "expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) {
        fail(origin_, at(key) + "/" + std::to_string(i), "expected a string");
      }
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }

  /// Rejects keys that were never asked for.
  void done() const {
    for (const auto& [key, _] : object_.items()) {
      if (!used_.count(key)) fail(origin_, where_, "unknown field '" + key + "'");
    }
  }

  std::string at(const std::string& key) const { return where_ + "/" + key; }
  const std::string& where() const { return where_; }

 private:
  const json& object_;
  std::string where_;
  const std::string& origin_;
  std::set<std::string> used_;
};

class Reader {
 public:
  Reader(Library* library, std::string origin)
      : library_(library), origin_(std::move(origin)),
        cache_(library ? LibraryAccess::state(*library).cache : own_cache_) {}

  Document read(std::string_view text) {
    const json doc = parse_json(text, origin_);
    Fields top(doc, "", origin_);
    check_version(top.string("format_version"));
    Document out;
    out.kind = top.string("kind");
    const json& body = top.required("body");
    const json* imports = top.optional("imports");
    const json* definitions = top.optional("definitions");
    top.done();

    if (out.kind == "tag_trees") {
      Fields f(body, "/body", origin_);
      expect_class(f, "TagTrees");
      const json& trees = f.required("trees");
      if (!trees.is_array()) fail(origin_, "/body/trees", "expected an array");
      for (std::size_t i = 0; i < trees.size(); ++i) {
        out.tag_trees.push_back(read_tree(trees[i], "/body/trees/" + std::to_string(i)));
      }
      f.done();
      return out;
    }
    if (out.kind == "library_index") {
      Fields f(body, "/body", origin_);
      expect_class(f, "LibraryIndex");
      const json& entries = f.required("entries");
      if (!entries.is_object()) fail(origin_, "/body/entries", "expected an object");
      for (const auto& [uid, file] : entries.items()) {
        if (!file.is_string()) fail(origin_, "/body/entries/" + uid, "expected a string");
        out.index[uid] = file.get<std::string>();
      }
      f.done();
      return out;
    }
    if (out.kind != "scenario" && out.kind != "scenario_category") {
      fail(origin_, "/kind", "unknown kind '" + out.kind + "'");
    }

    if (imports) {
      if (!imports->is_array()) fail(origin_, "/imports", "expected an array");
      for (const auto& imp : *imports) {
        if (!imp.is_string()) fail(origin_, "/imports", "expected strings");
        if (!library_) {
          throw Error(Errc::kUnresolvedReference,
                      origin_ + ": imports '" + imp.get<std::string>() +
                          "' but no library is available");
        }
        library_->load_file(resolve_import(imp.get<std::string>(), origin_));
      }
    }
    if (definitions) {
      if (!definitions->is_array()) fail(origin_, "/definitions", "expected an array");
      for (std::size_t i = 0; i < definitions->size(); ++i) {
        define((*definitions)[i], "/definitions/" + std::to_string(i));
      }
    }
    const std::string root_class = out.kind == "scenario" ? "Scenario" : "ScenarioCategory";
    if (!body.is_object() || !body.contains("class") || body["class"] != root_class) {
      fail(origin_, "/body", "kind '" + out.kind + "' requires a " + root_class + " body");
    }
    define(body, "/body");
    const std::string root_uid = body["uid"].get<std::string>();
    const Registries reg = library_ ? library_->registries() : Registries{};
    if (out.kind == "scenario") {
      out.scenario = get<Scenario>(root_uid, "/body");
      auto report = validate(*out.scenario, reg);
      if (!report.ok()) throw ValidationFailed(std::move(report));
    } else {
      out.category = get<ScenarioCategory>(root_uid, "/body");
      auto report = validate(*out.category, reg);
      if (!report.ok()) throw ValidationFailed(std::move(report));
    }
    return out;
  }

 private:
  void check_version(const std::string& version) {
    unsigned major = 0;
    unsigned minor = 0;
    unsigned patch = 0;
    char tail = 0;
    if (std::sscanf(version.c_str(), "%u.%u.%u%c", &major, &minor, &patch, &tail) != 3) {
      fail(origin_, "/format_version", "'" + version + "' is not MAJOR.MINOR.PATCH");
    }
    if (major != 1) {
      throw Error(Errc::kVersionMismatch, origin_ + ": format version " + version +
                                              " is not supported (expected 1.x.y)");
    }
  }

  void expect_class(Fields& f, std::string_view cls) {
    if (f.string("class") != cls) {
      fail(origin_, f.at("class"), "expected class " + std::string(cls));
    }
  }

  TagTree read_tree(const json& node, const std::string& where) {
    Fields f(node, where, origin_);
    TagTree tree;
    tree.name = f.string("name");
    const json* children = f.optional("children");
    if (children) {
      if (!children->is_array()) fail(origin_, f.at("children"), "expected an array");
      for (std::size_t i = 0; i < children->size(); ++i) {
        tree.children.push_back(
            read_tree((*children)[i], f.at("children") + "/" + std::to_string(i)));
      }
    }
    f.done();
    return tree;
  }

  void define(const json& object, const std::string& where) {
    if (!object.is_object()) fail(origin_, where, "expected an object");
    const auto uid = object.find("uid");
    if (uid == object.end() || !uid->is_string() || uid->get<std::string>().empty()) {
      fail(origin_, where, "definition needs a non-empty string uid");
    }
    if (!local_.emplace(uid->get<std::string>(), std::pair{&object, where}).second) {
      throw Error(Errc::kDuplicateUid, origin_ + ": uid '" + uid->get<std::string>() +
                                           "' is defined twice");
    }
  }

  std::string ref_uid(const json& v, const std::string& where) {
    if (!v.is_object() || v.size() != 1 || !v.contains("$ref") || !v["$ref"].is_string()) {
      fail(origin_, where, "expected {\"$ref\": uid}");
    }
    return v["$ref"].get<std::string>();
  }

  template <typename T>
  std::shared_ptr<const T> typed(const AnyElement& e, const std::string& uid,
                                 const std::string& where) {
    const auto* ptr = std::get_if<std::shared_ptr<const T>>(&e);
    if (!ptr) {
      fail(origin_, where, "'" + uid + "' is a " + std::string(element_class(e)) +
                               ", expected " + std::string(class_name<T>()));
    }
    return *ptr;
  }

  template <typename T>
  std::shared_ptr<const T> ref(const json& v, const std::string& where) {
    return get<T>(ref_uid(v, where), where);
  }

  template <typename T>
  std::shared_ptr<const T> get(const std::string& uid, const std::string& where) {
    const auto local = local_.find(uid);
    if (local != local_.end()) {
      const auto done = built_.find(uid);
      if (done != built_.end()) return typed<T>(done->second, uid, where);
      if (!building_.insert(uid).second) {
        fail(origin_, where, "reference cycle through '" + uid + "'");
      }
      auto fresh = build<T>(*local->second.first, local->second.second);
      building_.erase(uid);
      // An equal element loaded earlier keeps its identity.
      const auto cached = cache_.find(uid);
      if (cached != cache_.end()) {
        auto existing = typed<T>(cached->second, uid, where);
        if (!(*existing == *fresh)) {
          throw Error(Errc::kDuplicateUid,
                      origin_ + ": uid '" + uid +
                          "' differs from the element already loaded under that uid");
        }
        fresh = existing;
      } else {
        cache_.emplace(uid, AnyElement(fresh));
      }
      built_.emplace(uid, AnyElement(fresh));
      return fresh;
    }
    auto cached = cache_.find(uid);
    if (cached == cache_.end() && library_) {
      if (const auto file = library_->locate(uid)) {
        library_->load_file(*file);
        cached = cache_.find(uid);
      }
    }
    if (cached == cache_.end()) {
      throw Error(Errc::kUnresolvedReference,
                  origin_ + ": unresolved reference '" + uid + "' at " + where);
    }
    return typed<T>(cached->second, uid, where);
  }

  template <typename T>
  void header(Fields& f, T& out) {
    expect_class(f, class_name<T>());
    out.uid = f.string("uid");
    out.name = f.string("name");
    out.tags = f.strings("tags");
    if constexpr (std::is_base_of_v<QualitativeElement, T>) {
      out.description = f.string("description");
    }
  }

  StateVector state_vector(const json& v, const std::string& where) {
    if (!v.is_object()) fail(origin_, where, "expected an object");
    StateVector out;
    for (const auto& [name, q] : v.items()) {
      Fields f(q, where + "/" + name, origin_);
      Quantity quantity;
      quantity.value = f.number(f.required("value"), f.at("value"));
      if (const json* unit = f.optional("unit")) {
        if (!unit->is_string()) fail(origin_, f.at("unit"), "expected a string");
        quantity.unit = unit->get<std::string>();
      }
      f.done();
      out[name] = quantity;
    }
    return out;
  }

  template <typename T>
  std::shared_ptr<const T> build(const json& object, const std::string& where) {
    Fields f(object, where, origin_);
    auto out = build_fields<T>(f);
    f.done();
    return out;
  }

  template <typename T>
  std::shared_ptr<const T> build_fields(Fields& f) {
    if constexpr (std::is_same_v<T, PhysicalElementCategory>) {
      auto out = std::make_shared<T>();
      header(f, *out);
      return out;
    } else if constexpr (std::is_same_v<T, ActorCategory>) {
      auto out = std::make_shared<T>();
      header(f, *out);
      try {
        out->actor_type = actor_type_from_string(f.string("actor_type"));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& err) {
        fail(origin_, f.at("actor_type"), err.what());
      }
      return out;
    } else if constexpr (std::is_same_v<T, ActivityCategory>) {
      auto out = std::make_shared<T>();
      header(f, *out);
      out->state_variables = f.strings("state_variables");
      out->model = f.string("model");
      return out;
    } else if constexpr (std::is_same_v<T, PhysicalElement>) {
      auto out = std::make_shared<T>();
      header(f, *out);
      out->category = ref<PhysicalElementCategory>(f.required("category"), f.at("category"));
      const json& props = f.required("properties");
      if (!props.is_object()) fail(origin_, f.at("properties"), "expected an object");
      for (const auto& [name, p] : props.items()) {
        Fields pf(p, f.at("properties") + "/" + name, origin_);
        PropertyValue value;
        const json& raw = pf.required("value");
        if (raw.is_string()) {
          value.value = raw.get<std::string>();
        } else {
          value.value = pf.number(raw, pf.at("value"));
        }
        if (const json* unit = pf.optional("unit")) {
          if (!unit->is_string()) fail(origin_, pf.at("unit"), "expected a string");
          value.unit = unit->get<std::string>();
        }
        pf.done();
        out->properties[name] = std::move(value);
      }
      return out;
    } else if constexpr (std::is_same_v<T, Actor>) {
      auto out = std::make_shared<T>();
      header(f, *out);
      out->category = ref<ActorCategory>(f.required("category"), f.at("category"));
      out->initial_state = state_vector(f.required("initial_state"), f.at("initial_state"));
      if (const json* desired = f.optional("desired_state")) {
        out->desired_state = state_vector(*desired, f.at("desired_state"));
      }
      return out;
    } else if constexpr (std::is_same_v<T, Event>) {
      const std::string text = f.string("condition");
      std::shared_ptr<Event> out;
      try {
        out = std::make_shared<Event>(parse(text));
      } catch (const Error& err) {
        fail(origin_, f.at("condition"), err.what());
      }
      header(f, *out);
      return out;
    } else if constexpr (std::is_same_v<T, Activity>) {
      auto out = std::make_shared<T>();
      header(f, *out);
      out->category = ref<ActivityCategory>(f.required("category"), f.at("category"));
      const json& params = f.required("parameters");
      if (!params.is_object()) fail(origin_, f.at("parameters"), "expected an object");
      for (const auto& [name, value] : params.items()) {
        out->parameters[name] = f.number(value, f.at("parameters") + "/" + name);
      }
      out->start_event = ref<Event>(f.required("start_event"), f.at("start_event"));
      out->end_event = ref<Event>(f.required("end_event"), f.at("end_event"));
      return out;
    } else if constexpr (std::is_same_v<T, Scenario>) {
      auto out = std::make_shared<T>();
      header(f, *out);
      out->start_event = ref<Event>(f.required("start_event"), f.at("start_event"));
      out->end_event = ref<Event>(f.required("end_event"), f.at("end_event"));
      out->physical_elements = list<PhysicalElement>(f, "physical_elements");
      out->actors = list<Actor>(f, "actors");
      out->activities = list<Activity>(f, "activities");
      out->events = list<Event>(f, "events");
      const json& acts = f.required("acts");
      if (!acts.is_array()) fail(origin_, f.at("acts"), "expected an array");
      for (std::size_t i = 0; i < acts.size(); ++i) {
        Fields af(acts[i], f.at("acts") + "/" + std::to_string(i), origin_);
        Act act;
        act.actor = ref<Actor>(af.required("actor"), af.at("actor"));
        act.activity = ref<Activity>(af.required("activity"), af.at("activity"));
        af.done();
        out->acts.push_back(std::move(act));
      }
      return out;
    } else if constexpr (std::is_same_v<T, ScenarioCategory>) {
      auto out = std::make_shared<T>();
      header(f, *out);
      out->physical_element_categories =
          list<PhysicalElementCategory>(f, "physical_element_categories");
      out->actor_categories = list<ActorCategory>(f, "actor_categories");
      out->activity_categories = list<ActivityCategory>(f, "activity_categories");
      const json& acts = f.required("acts");
      if (!acts.is_array()) fail(origin_, f.at("acts"), "expected an array");
      for (std::size_t i = 0; i < acts.size(); ++i) {
        Fields af(acts[i], f.at("acts") + "/" + std::to_string(i), origin_);
        CategoryAct act;
        act.actor_category =
            ref<ActorCategory>(af.required("actor_category"), af.at("actor_category"));
        act.activity_category = ref<ActivityCategory>(af.required("activity_category"),
                                                      af.at("activity_category"));
        af.done();
        out->acts.push_back(std::move(act));
      }
      return out;
    }
  }

  template <typename T>
  std::vector<std::shared_ptr<const T>> list(Fields& f, const char* key) {
    const json& v = f.required(key);
    if (!v.is_array()) fail(origin_, f.at(key), "expected an array");
    std::vector<std::shared_ptr<const T>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(ref<T>(v[i], f.at(key) + "/" + std::to_string(i)));
    }
    return out;
  }

  Library* library_;
  std::string origin_;
  std::map<std::string, AnyElement> own_cache_;
  std::map<std::string, AnyElement>& cache_;
  std::map<std::string, std::pair<const json*, std::string>> local_;
  std::map<std::string, AnyElement> built_;
  std::set<std::string> building_;
};

/// uids defined by one file, without building objects.
std::vector<std::string> defined_uids(const std::string& text, const std::string& origin) {
  const json doc = parse_json(text, origin);
  std::vector<std::string> out;
  if (!doc.is_object()) return out;
  const auto kind = doc.find("kind");
  if (kind == doc.end() || !kind->is_string()) return out;
  if (*kind != "scenario" && *kind != "scenario_category") return out;
  auto take = [&](const json& obj) {
    if (obj.is_object() && obj.contains("uid") && obj["uid"].is_string()) {
      out.push_back(obj["uid"].get<std::string>());
    }
  };
  if (doc.contains("body")) take(doc["body"]);
  if (doc.contains("definitions") && doc["definitions"].is_array()) {
    for (const auto& d : doc["definitions"]) take(d);
  }
  return out;
}

std::optional<std::string> file_kind(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.is_object() && doc.contains("kind") && doc["kind"].is_string()) {
      return doc["kind"].get<std::string>();
    }
  } catch (const json::exception&) {
  }
  return std::nullopt;
}

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Error(Errc::kIOFailure, "cannot write " + path.string());
}

std::string library_key(Library* library, const fs::path& path) {
  if (!library) return "";
  auto& st = LibraryAccess::state(*library);
  if (!st.root) return normalize_key(path.generic_string());
  return fs::absolute(path).lexically_normal()
      .lexically_relative(fs::absolute(*st.root).lexically_normal())
      .generic_string();
}

}  // namespace

ParseError::ParseError(const std::string& origin, std::size_t line,
                       std::size_t column, const std::string& message)
    : Error(Errc::kParseError,
            origin + (line ? ":" + std::to_string(line) + ":" + std::to_string(column)
                           : std::string()) +
                ": " + message),
      line_(line),
      column_(column) {}

// --- Library -------------------------------------------------------------------

Library::Library(std::unique_ptr<State> state) : state_(std::move(state)) {}
Library::Library(Library&&) noexcept = default;
Library& Library::operator=(Library&&) noexcept = default;
Library::~Library() = default;

Library Library::open(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(Errc::kIOFailure, "library directory " + root.string() + " not found");
  }
  auto state = std::make_unique<State>();
  state->root = root;
  return Library(std::move(state));
}

Library Library::from_memory(std::map<std::string, std::string> files) {
  auto state = std::make_unique<State>();
  for (auto& [key, text] : files) state->memory[normalize_key(key)] = std::move(text);
  return Library(std::move(state));
}

std::vector<std::string> Library::files() const {
  std::vector<std::string> out;
  auto accept = [&](const std::string& key) {
    const bool scn = key.size() > kFileExtension.size() &&
                     key.compare(key.size() - kFileExtension.size(),
                                 kFileExtension.size(), kFileExtension) == 0;
    if (scn && fs::path(key).filename() != kIndexFile) out.push_back(key);
  };
  if (state_->root) {
    std::error_code ec;
    for (auto it = fs::recursive_directory_iterator(*state_->root, ec);
         !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (it->is_regular_file()) {
        accept(it->path().lexically_relative(*state_->root).generic_string());
      }
    }
  } else {
    for (const auto& [key, _] : state_->memory) accept(key);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> Library::read(const std::string& file) const {
  const std::string key = normalize_key(file);
  if (!state_->root) {
    const auto it = state_->memory.find(key);
    if (it == state_->memory.end()) return std::nullopt;
    return it->second;
  }
  std::ifstream in(*state_->root / key, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::map<std::string, std::string> Library::build_index() const {
  std::map<std::string, std::string> index;
  for (const auto& file : files()) {
    const auto text = read(file);
    if (!text) throw Error(Errc::kIOFailure, "cannot read " + file);
    for (const auto& uid : defined_uids(*text, file)) {
      const auto [it, inserted] = index.emplace(uid, file);
      if (!inserted && it->second != file) {
        throw Error(Errc::kDuplicateUid, "uid '" + uid + "' is defined in both " +
                                             it->second + " and " + file);
      }
    }
  }
  return index;
}

const std::map<std::string, std::string>& Library::index() {
  if (!state_->index) {
    const auto text = read(std::string(kIndexFile));
    if (text) {
      Document doc = parse_document(*text, nullptr, std::string(kIndexFile));
      if (doc.kind != "library_index") {
        throw ParseError(std::string(kIndexFile), 0, 0, "expected kind library_index");
      }
      state_->index = std::move(doc.index);
    } else {
      state_->index = build_index();
    }
  }
  return *state_->index;
}

std::optional<std::string> Library::locate(const std::string& uid) {
  const auto& idx = index();
  const auto it = idx.find(uid);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

const Document& Library::load_file(const std::string& file) {
  const std::string key = normalize_key(file);
  const auto done = state_->documents.find(key);
  if (done != state_->documents.end()) return done->second;
  if (!state_->loading.insert(key).second) {
    throw ParseError(key, 0, 0, "import cycle through " + key);
  }
  const auto text = read(key);
  if (!text) {
    state_->loading.erase(key);
    throw Error(Errc::kIOFailure, "cannot read " + key);
  }
  try {
    Document doc = Reader(this, key).read(*text);
    state_->loading.erase(key);
    return state_->documents.emplace(key, std::move(doc)).first->second;
  } catch (...) {
    state_->loading.erase(key);
    throw;
  }
}

AnyElement Library::element(const std::string& uid) {
  auto it = state_->cache.find(uid);
  if (it == state_->cache.end()) {
    const auto file = locate(uid);
    if (!file) {
      throw Error(Errc::kUnresolvedReference, "no element with uid '" + uid + "'");
    }
    load_file(*file);
    it = state_->cache.find(uid);
    if (it == state_->cache.end()) {
      throw Error(Errc::kUnresolvedReference,
                  "index names " + *file + " for uid '" + uid + "' but it is not there");
    }
  }
  return it->second;
}

std::vector<ScenarioPtr> Library::scenarios() {
  std::vector<ScenarioPtr> out;
  for (const auto& file : files()) {
    const auto text = read(file);
    if (!text || file_kind(*text) != "scenario") continue;
    out.push_back(load_file(file).scenario);
  }
  return out;
}

std::vector<ScenarioCategoryPtr> Library::categories() {
  std::vector<ScenarioCategoryPtr> out;
  for (const auto& file : files()) {
    const auto text = read(file);
    if (!text || file_kind(*text) != "scenario_category") continue;
    out.push_back(load_file(file).category);
  }
  return out;
}

const TagRegistry& Library::tags() {
  if (!state_->tags) {
    std::vector<TagTree> trees;
    for (const auto& file : files()) {
      const auto text = read(file);
      if (!text || file_kind(*text) != "tag_trees") continue;
      const auto& doc = load_file(file);
      trees.insert(trees.end(), doc.tag_trees.begin(), doc.tag_trees.end());
    }
    if (trees.empty()) {
      state_->tags = std::make_unique<TagRegistry>(default_tag_registry());
    } else {
      auto registry = std::make_unique<TagRegistry>();
      for (const auto& tree : trees) registry->add_tree(tree);
      state_->tags = std::move(registry);
    }
  }
  return *state_->tags;
}

Registries Library::registries() { return Registries{&tags(), &default_models()}; }

// --- Free functions ------------------------------------------------------------

std::string serialize(const Scenario& scenario, Library* library,
                      const std::string& file) {
  return Writer(library, file).write(scenario, "scenario");
}

std::string serialize(const ScenarioCategory& category, Library* library,
                      const std::string& file) {
  return Writer(library, file).write(category, "scenario_category");
}

std::string serialize(const std::vector<TagTree>& trees) {
  json body = json::object();
  body["class"] = "TagTrees";
  json list = json::array();
  for (const auto& t : trees) list.push_back(tree_json(t));
  body["trees"] = std::move(list);
  return dump(envelope("tag_trees", std::move(body), json::array(), {}));
}

std::string serialize_index(const std::map<std::string, std::string>& index) {
  json body = json::object();
  body["class"] = "LibraryIndex";
  body["entries"] = index;
  return dump(envelope("library_index", std::move(body), json::array(), {}));
}

Document parse_document(std::string_view text, Library* library,
                        const std::string& origin) {
  return Reader(library, origin).read(text);
}

void save(const Scenario& scenario, const fs::path& path, Library* library) {
  write_text(path, serialize(scenario, library, library_key(library, path)));
}

void save(const ScenarioCategory& category, const fs::path& path, Library* library) {
  write_text(path, serialize(category, library, library_key(library, path)));
}

void save(const std::vector<TagTree>& trees, const fs::path& path) {
  write_text(path, serialize(trees));
}

Document load(const fs::path& path, Library* library) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(Errc::kIOFailure, "cannot read " + path.string());
  }
  if (library) return library->load_file(library_key(library, path));
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  Library local = Library::open(dir);
  return local.load_file(path.filename().generic_string());
}

void write_index(const fs::path& root) {
  const auto index = Library::open(root).build_index();
  write_text(root / kIndexFile, serialize_index(index));
}

void write_fixtures(const fs::path& dir) {
  using namespace fixtures;
  std::error_code ec;
  fs::create_directories(dir, ec);
  for (const char* name : {kTagTreesFile, kCategoryFile, kQuantitativeFile,
                           kTestCategoryFile, kTestFile, kSpeedUpFile}) {
    fs::remove(dir / name, ec);
  }
  fs::remove(dir / kIndexFile, ec);

  save(default_tag_registry().trees(), dir / kTagTreesFile);
  save(*pedestrian_crossing_category(), dir / kCategoryFile);
  // Each later file imports what the earlier ones already define.
  auto next = [&](const auto& element, const char* name) {
    Library lib = Library::open(dir);
    save(element, dir / name, &lib);
  };
  next(*quantitative_scenario(), kQuantitativeFile);
  next(*test_category(), kTestCategoryFile);
  next(*test_scenario(), kTestFile);
  next(*test_scenario_speed_up(), kSpeedUpFile);
  write_index(dir);
}

Library bundled_fixtures() { return Library::from_memory(embedded_fixture_files()); }

}  // namespace sdm
