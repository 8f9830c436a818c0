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

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sdm/condition.hpp"
#include "sdm/dynamics.hpp"
#include "sdm/error.hpp"
#include "sdm/tags.hpp"

namespace sdm {

/// Header shared by every element: opaque uid, display name, tag references.
/// Tags are kept as written (label, suffix or path) and resolved against a
/// TagRegistry on validation.
struct ScenarioElement {
  std::string uid;
  std::string name;
  std::vector<std::string> tags;

  bool operator==(const ScenarioElement&) const = default;
};

struct QualitativeElement : ScenarioElement {
  std::string description;

  bool operator==(const QualitativeElement&) const = default;
};

enum class ActorType { kVehicle, kPedestrian, kCyclist, kRoadsideUnit, kOther };

std::string_view to_string(ActorType type);
/// Throws InvalidArgument.
ActorType actor_type_from_string(std::string_view text);

struct PhysicalElementCategory : QualitativeElement {
  bool operator==(const PhysicalElementCategory&) const = default;
};

struct ActorCategory : QualitativeElement {
  ActorType actor_type = ActorType::kOther;

  bool operator==(const ActorCategory&) const = default;
};

struct ActivityCategory : QualitativeElement {
  /// Generic names from the simulator schema (x, y, v, a); the act binds them
  /// to an actor.
  std::vector<std::string> state_variables;
  std::string model;

  bool operator==(const ActivityCategory&) const = default;
};

struct Quantity {
  double value = 0.0;
  std::string unit;

  bool operator==(const Quantity&) const = default;
};

/// Scalar or text, with an optional unit.
struct PropertyValue {
  std::variant<double, std::string> value;
  std::string unit;

  bool operator==(const PropertyValue&) const = default;
};

/// Variable name -> value. Actor state variables are written
/// "<variable>_<symbol>", e.g. x_ego or y_ped.
using StateVector = std::map<std::string, Quantity>;

using PhysicalElementCategoryPtr = std::shared_ptr<const PhysicalElementCategory>;
using ActorCategoryPtr = std::shared_ptr<const ActorCategory>;
using ActivityCategoryPtr = std::shared_ptr<const ActivityCategory>;

struct PhysicalElement : ScenarioElement {
  PhysicalElementCategoryPtr category;
  std::map<std::string, PropertyValue> properties;

  friend bool operator==(const PhysicalElement& a, const PhysicalElement& b);
};

struct Actor : ScenarioElement {
  ActorCategoryPtr category;
  StateVector initial_state;
  std::optional<StateVector> desired_state;

  friend bool operator==(const Actor& a, const Actor& b);
};

struct Event : ScenarioElement {
  explicit Event(ConditionExpr condition) : condition(std::move(condition)) {}

  ConditionExpr condition;

  friend bool operator==(const Event& a, const Event& b);
};

using PhysicalElementPtr = std::shared_ptr<const PhysicalElement>;
using ActorPtr = std::shared_ptr<const Actor>;
using EventPtr = std::shared_ptr<const Event>;

struct Activity : ScenarioElement {
  ActivityCategoryPtr category;
  /// Model parameters. With several state variables, keys are
  /// "<variable>.<parameter>".
  std::map<std::string, double> parameters;
  EventPtr start_event;
  EventPtr end_event;

  friend bool operator==(const Activity& a, const Activity& b);
};

using ActivityPtr = std::shared_ptr<const Activity>;

struct Act {
  ActorPtr actor;
  ActivityPtr activity;

  friend bool operator==(const Act& a, const Act& b);
};

struct TimeInterval : ScenarioElement {
  EventPtr start_event;
  EventPtr end_event;

  friend bool operator==(const TimeInterval& a, const TimeInterval& b);
};

struct Scenario : TimeInterval {
  std::vector<PhysicalElementPtr> physical_elements;
  std::vector<ActorPtr> actors;
  std::vector<ActivityPtr> activities;
  std::vector<EventPtr> events;
  std::vector<Act> acts;

  friend bool operator==(const Scenario& a, const Scenario& b);
};

struct CategoryAct {
  ActorCategoryPtr actor_category;
  ActivityCategoryPtr activity_category;

  friend bool operator==(const CategoryAct& a, const CategoryAct& b);
};

struct ScenarioCategory : QualitativeElement {
  std::vector<PhysicalElementCategoryPtr> physical_element_categories;
  std::vector<ActorCategoryPtr> actor_categories;
  std::vector<ActivityCategoryPtr> activity_categories;
  std::vector<CategoryAct> acts;

  friend bool operator==(const ScenarioCategory& a, const ScenarioCategory& b);
};

using ScenarioPtr = std::shared_ptr<const Scenario>;
using ScenarioCategoryPtr = std::shared_ptr<const ScenarioCategory>;

/// Parses the condition text. Throws SyntaxError / TypeError.
EventPtr make_event(std::string uid, std::string name, std::string_view condition,
                    std::vector<std::string> tags = {});

// --- Validation -------------------------------------------------------------

struct Violation {
  /// MissingEgo, DanglingReference, ParameterSchemaMismatch, UnknownVariable,
  /// DuplicateUid, UnresolvedTag, AmbiguousTag, EgoNotVehicle,
  /// EmptyDescription, EmptyUid, EmptyInitialState, UnknownModel,
  /// StateVariables, UnitMismatch, NonFinite, SameStartEnd, NoBehavior,
  /// ActorSymbol, UnresolvableLink.
  std::string code;
  std::string uid;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view code) const;
  /// One "code [uid]: message" line per violation.
  std::string to_string() const;
};

/// Registries consulted by validation, matching and simulation.
struct Registries {
  const TagRegistry* tags = &default_tag_registry();
  const ModelRegistry* models = &default_models();
};

ValidationReport validate(const Scenario& scenario, const Registries& reg = {});
ValidationReport validate(const ScenarioCategory& category,
                          const Registries& reg = {});

/// Thrown by the build_* functions; carries the full report.
class ValidationFailed : public Error {
 public:
  explicit ValidationFailed(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

ScenarioPtr build_scenario(Scenario parts, const Registries& reg = {});
ScenarioCategoryPtr build_category(ScenarioCategory parts,
                                   const Registries& reg = {});

/// Own tags of the scenario and of every element and category reachable from
/// it, closed under tree ancestors. Throws UnknownTag / AmbiguousTag.
std::set<Tag> derived_tags(const Scenario& scenario, const Registries& reg = {});

/// Resolved tags of an element plus those of its category, with ancestors.
std::set<Tag> resolved_tags(const TagRegistry& registry,
                            const std::vector<std::string>& own,
                            const std::vector<std::string>* category = nullptr);

// --- State naming -----------------------------------------------------------

/// The simulator's per-actor variables.
inline constexpr std::string_view kStateSchema[] = {"x", "y", "v", "a"};

/// "x_ego" -> {"x", "ego"}; nullopt when there is no '_' separator.
std::optional<std::pair<std::string, std::string>> split_state_name(
    std::string_view name);

/// Common suffix of the actor's initial-state names ("ego" for x_ego, v_ego).
/// Throws InvalidArgument when the names disagree or carry no suffix.
std::string actor_symbol(const Actor& actor);

/// Every variable an event condition of this scenario may reference: t plus
/// x/y/v/a of each actor and its initial-state names.
std::set<std::string> state_schema(const Scenario& scenario);

/// Actor addressed by symbol first, uid second; nullptr when neither matches.
ActorPtr find_actor(const Scenario& scenario, std::string_view reference);

/// Parameter key of one state variable of a (possibly multi-variable)
/// activity category.
std::string parameter_key(const ActivityCategory& category,
                          std::string_view variable, std::string_view param);

/// Extracts the ModelParams governing one state variable of an activity.
ModelParams activity_params(const Activity& activity, std::string_view variable);

}  // namespace sdm
