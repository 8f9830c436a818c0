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

#include "sdm/elements.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sdm {
namespace {

template <typename T>
bool same_target(const std::shared_ptr<const T>& a,
                 const std::shared_ptr<const T>& b) {
  if (a == b) return true;
  return a && b && *a == *b;
}

template <typename T>
bool same_targets(const std::vector<std::shared_ptr<const T>>& a,
                  const std::vector<std::shared_ptr<const T>>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const auto& x, const auto& y) { return same_target(x, y); });
}

const ScenarioElement& header(const ScenarioElement& e) { return e; }

std::string canonical_unit(std::string_view variable) {
  if (variable == "x" || variable == "y") return "m";
  if (variable == "v") return "m/s";
  if (variable == "a") return "m/s^2";
  return "";
}

std::string normalize_unit(std::string unit) {
  unit.erase(std::remove(unit.begin(), unit.end(), ' '), unit.end());
  if (unit == "m/s2" || unit == "m/s\xC2\xB2" || unit == "m/s/s") {
    return "m/s^2";
  }
  return unit;
}

/// Collects violations while walking one aggregate.
class Checker {
 public:
  explicit Checker(const Registries& reg) : reg_(reg) {}

  void add(std::string code, const std::string& uid, std::string message) {
    report_.violations.push_back({std::move(code), uid, std::move(message)});
  }

  /// Registers a uid; a second, different element with the same uid is a
  /// DuplicateUid violation.
  template <typename T>
  void claim(const std::shared_ptr<const T>& element) {
    if (!element) return;
    claim_header(*element, element.get(), [element](const void* other) {
      return *element == *static_cast<const T*>(other);
    });
  }

  template <typename T, typename Same>
  void claim_header(const T& element, const void* address, Same same) {
    const auto& h = header(element);
    if (h.uid.empty()) {
      add("EmptyUid", h.uid, "element '" + h.name + "' has an empty uid");
      return;
    }
    auto [it, inserted] = seen_.emplace(h.uid, address);
    if (!inserted && it->second != address && !same(it->second)) {
      add("DuplicateUid", h.uid, "uid '" + h.uid + "' names two different elements");
    }
  }

  void tags(const ScenarioElement& e,
            const std::vector<std::string>* category_tags = nullptr) {
    std::vector<std::string> all = e.tags;
    if (category_tags) {
      all.insert(all.end(), category_tags->begin(), category_tags->end());
    }
    try {
      reg_.tags->resolve_set(all);
    } catch (const Error& err) {
      add(err.code() == Errc::kAmbiguousTag ? "AmbiguousTag" : "UnresolvedTag",
          e.uid, err.what());
    }
  }

  void qualitative(const QualitativeElement& e) {
    tags(e);
    if (e.description.empty()) {
      add("EmptyDescription", e.uid, "qualitative element has no description");
    }
  }

  void category(const PhysicalElementCategory& c) { qualitative(c); }

  void category(const ActorCategory& c) {
    qualitative(c);
    if (c.actor_type != ActorType::kVehicle && carries_ego_tag(c.tags)) {
      add("EgoNotVehicle", c.uid,
          "actor category tagged 'Ego vehicle' must have actor_type vehicle");
    }
  }

  void category(const ActivityCategory& c) {
    qualitative(c);
    if (!reg_.models->contains(c.model)) {
      add("UnknownModel", c.uid, "unknown model '" + c.model + "'");
    }
    if (c.state_variables.empty()) {
      add("StateVariables", c.uid, "activity category has no state variables");
    }
    std::set<std::string> unique(c.state_variables.begin(),
                                 c.state_variables.end());
    if (unique.size() != c.state_variables.size()) {
      add("StateVariables", c.uid, "duplicate state variable names");
    }
  }

  bool carries_ego_tag(const std::vector<std::string>& tags) const {
    try {
      const Tag ego = reg_.tags->resolve(kEgoVehicleTag);
      for (const auto& t : reg_.tags->resolve_set(tags)) {
        if (t == ego) return true;
      }
    } catch (const Error&) {
      // Unresolvable tags are reported separately.
    }
    return false;
  }

  ValidationReport take() { return std::move(report_); }

  const Registries& reg_;

 private:
  ValidationReport report_;
  std::map<std::string, const void*> seen_;
};

std::string violation_summary(const ValidationReport& report) {
  std::string msg = "validation failed";
  if (!report.violations.empty()) {
    const auto& v = report.violations.front();
    msg += ": " + v.code + " [" + v.uid + "] " + v.message;
    if (report.violations.size() > 1) {
      msg += " (+" + std::to_string(report.violations.size() - 1) + " more)";
    }
  }
  return msg;
}

bool model_has_natural_end(const Registries& reg, const Activity& activity) {
  if (!activity.category || !reg.models->contains(activity.category->model)) {
    return false;
  }
  const auto& model = reg.models->get(activity.category->model);
  for (const auto& var : activity.category->state_variables) {
    try {
      if (!model.natural_end(activity_params(activity, var))) return false;
    } catch (const Error&) {
      return true;  // bad parameters are reported on their own
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(ActorType type) {
  switch (type) {
    case ActorType::kVehicle: return "vehicle";
    case ActorType::kPedestrian: return "pedestrian";
    case ActorType::kCyclist: return "cyclist";
    case ActorType::kRoadsideUnit: return "roadside_unit";
    case ActorType::kOther: return "other";
  }
  return "other";
}

ActorType actor_type_from_string(std::string_view text) {
  for (auto type : {ActorType::kVehicle, ActorType::kPedestrian,
                    ActorType::kCyclist, ActorType::kRoadsideUnit,
                    ActorType::kOther}) {
    if (to_string(type) == text) return type;
  }
  throw Error(Errc::kInvalidArgument,
              "unknown actor type '" + std::string(text) + "'");
}

bool operator==(const PhysicalElement& a, const PhysicalElement& b) {
  return header(a) == header(b) && same_target(a.category, b.category) &&
         a.properties == b.properties;
}

bool operator==(const Actor& a, const Actor& b) {
  return header(a) == header(b) && same_target(a.category, b.category) &&
         a.initial_state == b.initial_state && a.desired_state == b.desired_state;
}

bool operator==(const Event& a, const Event& b) {
  return header(a) == header(b) && a.condition == b.condition;
}

bool operator==(const Activity& a, const Activity& b) {
  return header(a) == header(b) && same_target(a.category, b.category) &&
         a.parameters == b.parameters &&
         same_target(a.start_event, b.start_event) &&
         same_target(a.end_event, b.end_event);
}

bool operator==(const Act& a, const Act& b) {
  return same_target(a.actor, b.actor) && same_target(a.activity, b.activity);
}

bool operator==(const TimeInterval& a, const TimeInterval& b) {
  return header(a) == header(b) && same_target(a.start_event, b.start_event) &&
         same_target(a.end_event, b.end_event);
}

bool operator==(const Scenario& a, const Scenario& b) {
  return static_cast<const TimeInterval&>(a) ==
             static_cast<const TimeInterval&>(b) &&
         same_targets(a.physical_elements, b.physical_elements) &&
         same_targets(a.actors, b.actors) &&
         same_targets(a.activities, b.activities) &&
         same_targets(a.events, b.events) && a.acts == b.acts;
}

bool operator==(const CategoryAct& a, const CategoryAct& b) {
  return same_target(a.actor_category, b.actor_category) &&
         same_target(a.activity_category, b.activity_category);
}

bool operator==(const ScenarioCategory& a, const ScenarioCategory& b) {
  return static_cast<const QualitativeElement&>(a) ==
             static_cast<const QualitativeElement&>(b) &&
         same_targets(a.physical_element_categories,
                      b.physical_element_categories) &&
         same_targets(a.actor_categories, b.actor_categories) &&
         same_targets(a.activity_categories, b.activity_categories) &&
         a.acts == b.acts;
}

EventPtr make_event(std::string uid, std::string name, std::string_view condition,
                    std::vector<std::string> tags) {
  auto event = std::make_shared<Event>(parse(condition));
  event->uid = std::move(uid);
  event->name = std::move(name);
  event->tags = std::move(tags);
  return event;
}

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& v : violations) {
    out += v.code + " [" + v.uid + "]: " + v.message + "\n";
  }
  return out;
}

ValidationFailed::ValidationFailed(ValidationReport report)
    : Error(Errc::kValidationFailed, violation_summary(report)),
      report_(std::move(report)) {}

std::optional<std::pair<std::string, std::string>> split_state_name(
    std::string_view name) {
  const auto us = name.find('_');
  if (us == std::string_view::npos || us == 0 || us + 1 == name.size()) {
    return std::nullopt;
  }
  return std::pair{std::string(name.substr(0, us)),
                   std::string(name.substr(us + 1))};
}

std::string actor_symbol(const Actor& actor) {
  std::optional<std::string> symbol;
  for (const auto& [name, _] : actor.initial_state) {
    const auto parts = split_state_name(name);
    if (!parts || (symbol && *symbol != parts->second)) {
      throw Error(Errc::kInvalidArgument,
                  "actor '" + actor.uid +
                      "': initial-state names must share one '_<symbol>' "
                      "suffix, got '" + name + "'");
    }
    symbol = parts->second;
  }
  if (!symbol) {
    throw Error(Errc::kInvalidArgument,
                "actor '" + actor.uid + "' has an empty initial state");
  }
  return *symbol;
}

std::set<std::string> state_schema(const Scenario& scenario) {
  std::set<std::string> out{"t"};
  for (const auto& actor : scenario.actors) {
    if (!actor) continue;
    for (const auto& [name, _] : actor->initial_state) out.insert(name);
    try {
      const auto symbol = actor_symbol(*actor);
      for (auto var : kStateSchema) out.insert(std::string(var) + "_" + symbol);
    } catch (const Error&) {
      // Reported by validate().
    }
  }
  return out;
}

ActorPtr find_actor(const Scenario& scenario, std::string_view reference) {
  for (const auto& actor : scenario.actors) {
    try {
      if (actor && actor_symbol(*actor) == reference) return actor;
    } catch (const Error&) {
    }
  }
  for (const auto& actor : scenario.actors) {
    if (actor && actor->uid == reference) return actor;
  }
  return nullptr;
}

std::string parameter_key(const ActivityCategory& category,
                          std::string_view variable, std::string_view param) {
  if (category.state_variables.size() <= 1) return std::string(param);
  return std::string(variable) + "." + std::string(param);
}

ModelParams activity_params(const Activity& activity, std::string_view variable) {
  if (!activity.category) {
    throw Error(Errc::kDanglingReference,
                "activity '" + activity.uid + "' has no category");
  }
  const auto& cat = *activity.category;
  ModelParams params{cat.model, {}};
  if (cat.state_variables.size() <= 1) {
    params.values = activity.parameters;
    return params;
  }
  const std::string prefix = std::string(variable) + ".";
  for (const auto& [key, value] : activity.parameters) {
    if (key.rfind(prefix, 0) == 0) params.values[key.substr(prefix.size())] = value;
  }
  return params;
}

std::set<Tag> resolved_tags(const TagRegistry& registry,
                            const std::vector<std::string>& own,
                            const std::vector<std::string>* category) {
  std::vector<std::string> all = own;
  if (category) all.insert(all.end(), category->begin(), category->end());
  const auto tags = registry.resolve_set(all);
  return with_ancestors(registry, tags);
}

ValidationReport validate(const ScenarioCategory& category, const Registries& reg) {
  Checker check(reg);
  check.claim_header(category, &category, [](const void*) { return false; });
  check.qualitative(category);

  auto members = [&](const auto& list, const char* what) {
    std::set<std::string> uids;
    for (const auto& element : list) {
      if (!element) {
        check.add("DanglingReference", category.uid,
                  std::string("null ") + what + " reference");
        continue;
      }
      check.claim(element);
      check.category(*element);
      uids.insert(element->uid);
    }
    return uids;
  };
  members(category.physical_element_categories, "physical element category");
  const auto actor_uids = members(category.actor_categories, "actor category");
  const auto activity_uids =
      members(category.activity_categories, "activity category");

  for (const auto& act : category.acts) {
    if (!act.actor_category || !actor_uids.count(act.actor_category->uid)) {
      check.add("DanglingReference", category.uid,
                "act references an actor category outside the category");
    }
    if (!act.activity_category ||
        !activity_uids.count(act.activity_category->uid)) {
      check.add("DanglingReference", category.uid,
                "act references an activity category outside the category");
    }
  }
  return check.take();
}

ValidationReport validate(const Scenario& scenario, const Registries& reg) {
  Checker check(reg);
  check.claim_header(scenario, &scenario, [](const void*) { return false; });
  check.tags(scenario);

  // Events.
  std::map<std::string, EventPtr> events;
  auto add_event = [&](const EventPtr& e) {
    if (!e) return;
    check.claim(e);
    events.emplace(e->uid, e);
  };
  if (!scenario.start_event || !scenario.end_event) {
    check.add("DanglingReference", scenario.uid,
              "scenario needs both a start and an end event");
  }
  add_event(scenario.start_event);
  add_event(scenario.end_event);
  for (const auto& e : scenario.events) {
    if (!e) {
      check.add("DanglingReference", scenario.uid, "null event reference");
      continue;
    }
    add_event(e);
  }
  if (scenario.start_event && scenario.end_event &&
      scenario.start_event->uid == scenario.end_event->uid) {
    check.add("SameStartEnd", scenario.uid,
              "scenario start and end events must differ");
  }

  // Physical elements.
  for (const auto& pe : scenario.physical_elements) {
    if (!pe) {
      check.add("DanglingReference", scenario.uid,
                "null physical element reference");
      continue;
    }
    check.claim(pe);
    if (!pe->category) {
      check.add("DanglingReference", pe->uid, "physical element has no category");
      check.tags(*pe);
      continue;
    }
    check.claim(pe->category);
    check.category(*pe->category);
    check.tags(*pe, &pe->category->tags);
  }

  // Actors.
  std::map<std::string, ActorPtr> actors;
  std::map<std::string, std::string> symbols;
  bool has_ego = false;
  for (const auto& actor : scenario.actors) {
    if (!actor) {
      check.add("DanglingReference", scenario.uid, "null actor reference");
      continue;
    }
    check.claim(actor);
    actors.emplace(actor->uid, actor);
    const std::vector<std::string>* category_tags = nullptr;
    if (!actor->category) {
      check.add("DanglingReference", actor->uid, "actor has no category");
    } else {
      check.claim(actor->category);
      check.category(*actor->category);
      category_tags = &actor->category->tags;
    }
    check.tags(*actor, category_tags);
    std::vector<std::string> all = actor->tags;
    if (category_tags) all.insert(all.end(), category_tags->begin(), category_tags->end());
    has_ego = has_ego || check.carries_ego_tag(all);

    if (actor->initial_state.empty()) {
      check.add("EmptyInitialState", actor->uid, "actor has no initial state");
      continue;
    }
    std::string symbol;
    try {
      symbol = actor_symbol(*actor);
      auto [it, inserted] = symbols.emplace(symbol, actor->uid);
      if (!inserted) {
        check.add("ActorSymbol", actor->uid,
                  "state suffix '" + symbol + "' already used by actor '" +
                      it->second + "'");
      }
    } catch (const Error& err) {
      check.add("ActorSymbol", actor->uid, err.what());
    }
    auto check_vector = [&](const StateVector& sv, bool desired) {
      for (const auto& [name, q] : sv) {
        if (!std::isfinite(q.value)) {
          check.add("NonFinite", actor->uid, "state value '" + name + "' is not finite");
        }
        const auto parts = split_state_name(name);
        const std::string var = parts ? parts->first : name;
        const std::string expected = canonical_unit(var);
        if (!q.unit.empty() && !expected.empty() &&
            normalize_unit(q.unit) != expected) {
          check.add("UnitMismatch", actor->uid,
                    "'" + name + "' has unit '" + q.unit + "', expected '" +
                        expected + "'");
        }
        if (desired) {
          const auto init = actor->initial_state.find(name);
          const bool in_schema =
              parts && parts->second == symbol &&
              std::find(std::begin(kStateSchema), std::end(kStateSchema),
                        parts->first) != std::end(kStateSchema);
          if (init == actor->initial_state.end() && !in_schema) {
            check.add("UnknownVariable", actor->uid,
                      "desired state names unknown variable '" + name + "'");
          }
          if (init != actor->initial_state.end() && !q.unit.empty() &&
              !init->second.unit.empty() &&
              normalize_unit(q.unit) != normalize_unit(init->second.unit)) {
            check.add("UnitMismatch", actor->uid,
                      "'" + name + "' uses units '" + init->second.unit +
                          "' and '" + q.unit + "'");
          }
        }
      }
    };
    check_vector(actor->initial_state, false);
    if (actor->desired_state) check_vector(*actor->desired_state, true);
  }
  if (!has_ego) {
    check.add("MissingEgo", scenario.uid,
              "no actor carries the tag 'Ego vehicle'");
  }

  // Activities.
  std::map<std::string, ActivityPtr> activities;
  for (const auto& activity : scenario.activities) {
    if (!activity) {
      check.add("DanglingReference", scenario.uid, "null activity reference");
      continue;
    }
    check.claim(activity);
    activities.emplace(activity->uid, activity);
    const std::vector<std::string>* category_tags = nullptr;
    if (!activity->category) {
      check.add("DanglingReference", activity->uid, "activity has no category");
    } else {
      const auto& cat = *activity->category;
      check.claim(activity->category);
      check.category(cat);
      category_tags = &cat.tags;
      for (const auto& var : cat.state_variables) {
        if (std::find(std::begin(kStateSchema), std::end(kStateSchema), var) ==
            std::end(kStateSchema)) {
          check.add("StateVariables", cat.uid,
                    "state variable '" + var + "' is not one of x, y, v, a");
        }
      }
      if (reg.models->contains(cat.model)) {
        const auto& model = reg.models->get(cat.model);
        std::set<std::string> expected;
        for (const auto& var : cat.state_variables) {
          for (const auto& p : model.parameter_schema()) {
            expected.insert(parameter_key(cat, var, p));
          }
        }
        std::set<std::string> actual;
        for (const auto& [k, _] : activity->parameters) actual.insert(k);
        if (actual != expected) {
          std::string want;
          for (const auto& k : expected) want += (want.empty() ? "" : ", ") + k;
          check.add("ParameterSchemaMismatch", activity->uid,
                    "parameters must be exactly {" + want + "} for model " +
                        cat.model);
        } else {
          for (const auto& var : cat.state_variables) {
            try {
              model.check(activity_params(*activity, var));
            } catch (const Error& err) {
              check.add(err.code() == Errc::kNonFinite ? "NonFinite"
                                                       : "ParameterSchemaMismatch",
                        activity->uid, err.what());
            }
          }
        }
      }
    }
    check.tags(*activity, category_tags);
    for (const auto* ev : {&activity->start_event, &activity->end_event}) {
      if (!*ev || !events.count((*ev)->uid)) {
        check.add("DanglingReference", activity->uid,
                  "activity start/end event is not an event of the scenario");
      }
    }
    if (activity->start_event && activity->end_event &&
        activity->start_event->uid == activity->end_event->uid) {
      check.add("SameStartEnd", activity->uid,
                "activity start and end events must differ");
    }
  }

  // Event conditions.
  const auto schema = state_schema(scenario);
  for (const auto& [uid, event] : events) {
    check.tags(*event);
    for (const auto& var : free_variables(event->condition)) {
      if (!schema.count(var)) {
        check.add("UnknownVariable", uid,
                  "condition references unknown variable '" + var + "'");
      }
    }
    for (const auto& name : collision_actors(event->condition)) {
      if (!find_actor(scenario, name)) {
        check.add("DanglingReference", uid,
                  "collision() names unknown actor '" + name + "'");
      }
    }
    for (const auto& link : link_references(event->condition)) {
      const auto it = activities.find(link.activity_uid);
      if (it == activities.end()) {
        check.add("DanglingReference", uid,
                  "linked() names unknown activity '" + link.activity_uid + "'");
        continue;
      }
      const auto& target = *it->second;
      const bool self_start = link.boundary == LinkBoundary::kStart &&
                              target.start_event &&
                              target.start_event->uid == uid;
      const bool self_end = link.boundary == LinkBoundary::kEnd &&
                            target.end_event && target.end_event->uid == uid &&
                            !model_has_natural_end(reg, target);
      if (self_start || self_end) {
        check.add("UnresolvableLink", uid,
                  "event is defined by the boundary it is supposed to mark");
      }
    }
  }

  // Acts and behaviour.
  std::set<std::string> acting;
  for (const auto& act : scenario.acts) {
    if (!act.actor || !actors.count(act.actor->uid)) {
      check.add("DanglingReference", scenario.uid,
                "act references an actor outside the scenario");
    } else {
      acting.insert(act.actor->uid);
    }
    if (!act.activity || !activities.count(act.activity->uid)) {
      check.add("DanglingReference", scenario.uid,
                "act references activity '" +
                    (act.activity ? act.activity->uid : std::string("null")) +
                    "' outside the scenario");
    }
  }
  for (const auto& [uid, actor] : actors) {
    if (!acting.count(uid) && !actor->desired_state) {
      check.add("NoBehavior", uid,
                "actor has neither activities nor a desired state");
    }
  }
  return check.take();
}

ScenarioPtr build_scenario(Scenario parts, const Registries& reg) {
  auto report = validate(parts, reg);
  if (!report.ok()) throw ValidationFailed(std::move(report));
  return std::make_shared<const Scenario>(std::move(parts));
}

ScenarioCategoryPtr build_category(ScenarioCategory parts, const Registries& reg) {
  auto report = validate(parts, reg);
  if (!report.ok()) throw ValidationFailed(std::move(report));
  return std::make_shared<const ScenarioCategory>(std::move(parts));
}

std::set<Tag> derived_tags(const Scenario& scenario, const Registries& reg) {
  const auto& tags = *reg.tags;
  std::set<Tag> out = resolved_tags(tags, scenario.tags);
  auto merge = [&](const ScenarioElement& e, const std::vector<std::string>* cat) {
    out.merge(resolved_tags(tags, e.tags, cat));
  };
  for (const auto& pe : scenario.physical_elements) {
    merge(*pe, pe->category ? &pe->category->tags : nullptr);
  }
  for (const auto& actor : scenario.actors) {
    merge(*actor, actor->category ? &actor->category->tags : nullptr);
  }
  for (const auto& activity : scenario.activities) {
    merge(*activity, activity->category ? &activity->category->tags : nullptr);
  }
  return out;
}

}  // namespace sdm
