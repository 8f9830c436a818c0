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

// Hand-rolled random generators for property tests: condition trees, valid
// scenarios and categories, and small matching instances.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sdm/condition.hpp"
#include "sdm/dynamics.hpp"
#include "sdm/elements.hpp"

namespace sdm::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  /// Integer in [0, n).
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  int between(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }

  /// Finite doubles of widely varying magnitude and precision.
  double any_double() {
    switch (below(5)) {
      case 0:
        return static_cast<double>(between(-1000, 1000));
      case 1:
        return uniform(-10.0, 10.0);
      case 2:
        return std::ldexp(uniform(-1.0, 1.0), between(-60, 60));
      case 3:
        return between(-99, 99) / 8.0;
      default:
        return uniform(-1e6, 1e6);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// --- Condition trees ------------------------------------------------------------

inline ExprPtr random_numeric(Rng& rng, int depth) {
  using K = ExprNode::Kind;
  static const std::vector<std::string> kNames = {"t",     "x_ego", "v_ego", "y_ped",
                                                  "a_1",   "q",     "speed", "_x9"};
  if (depth <= 0 || rng.chance(0.3)) {
    if (rng.chance(0.5)) return expr::number(rng.any_double());
    return expr::variable(rng.pick(kNames));
  }
  switch (rng.below(6)) {
    case 0:
      return expr::negate(random_numeric(rng, depth - 1));
    case 1:
      return expr::abs(random_numeric(rng, depth - 1));
    default: {
      static const K kOps[] = {K::kAdd, K::kSubtract, K::kMultiply, K::kDivide};
      return expr::arithmetic(kOps[rng.below(4)], random_numeric(rng, depth - 1),
                              random_numeric(rng, depth - 1));
    }
  }
}

inline ExprPtr random_boolean(Rng& rng, int depth) {
  using K = ExprNode::Kind;
  if (depth <= 1 || rng.chance(0.25)) {
    switch (rng.below(6)) {
      case 0:
        return expr::collision(rng.chance(0.5) ? "ego" : "ped",
                               rng.chance(0.5) ? "ped test" : "car_2");
      case 1:
        return expr::linked(rng.chance(0.5) ? "ego braking" : "walk",
                            rng.chance(0.5) ? LinkBoundary::kStart : LinkBoundary::kEnd);
      default: {
        static const CompareOp kOps[] = {CompareOp::kLess, CompareOp::kLessEqual,
                                         CompareOp::kGreater, CompareOp::kGreaterEqual,
                                         CompareOp::kEqual};
        const int sub = std::max(0, depth - 1);
        return expr::compare(kOps[rng.below(5)], random_numeric(rng, sub),
                             random_numeric(rng, sub));
      }
    }
  }
  switch (rng.below(3)) {
    case 0:
      return expr::logical_not(random_boolean(rng, depth - 1));
    default: {
      std::vector<ExprPtr> operands;
      const int n = rng.between(2, 4);
      for (int i = 0; i < n; ++i) operands.push_back(random_boolean(rng, depth - 1));
      return expr::logical(rng.chance(0.5) ? K::kAnd : K::kOr, std::move(operands));
    }
  }
}

/// Well-typed condition tree of depth at most `max_depth`.
inline ConditionExpr random_condition(Rng& rng, int max_depth = 8) {
  return ConditionExpr(random_boolean(rng, rng.between(1, max_depth)));
}

// --- Elements -------------------------------------------------------------------

inline std::vector<std::string> random_tags(Rng& rng,
                                            const std::vector<std::string>& pool,
                                            std::size_t max) {
  std::vector<std::string> out;
  const std::size_t n = rng.below(max + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& tag = rng.pick(pool);
    if (std::find(out.begin(), out.end(), tag) == out.end()) out.push_back(tag);
  }
  return out;
}

/// Tag references that resolve in the default registry: labels, suffixes and
/// full paths.
inline const std::vector<std::string>& tag_pool() {
  static const std::vector<std::string> pool = {
      "Decelerating", "Cruising", "Accelerating", "Driving forward", "Reversing",
      "Standing still", "Going straight", "Turning/Left", "Changing lane/Right",
      "Vehicle lateral activity/Swerving/Left", "Vehicle longitudinal activity"};
  return pool;
}

inline std::string random_text(Rng& rng) {
  static const std::vector<std::string> words = {
      "lane", "crossing", "ego", "w\u00e4hrend", "\"quoted\"", "tab\tstop",
      "slash/path", "back\\slash", "line\nbreak", "42"};
  std::string out = rng.pick(words);
  const int n = rng.between(0, 3);
  for (int i = 0; i < n; ++i) out += " " + rng.pick(words);
  return out;
}

inline std::map<std::string, double> random_parameters(Rng& rng,
                                                       const ActivityCategory& cat) {
  const auto& schema = default_models().get(cat.model).parameter_schema();
  std::map<std::string, double> out;
  for (const auto& var : cat.state_variables) {
    for (const auto& name : schema) {
      double value = rng.any_double();
      if (name == "T") value = std::abs(value) + 0.5;
      out[parameter_key(cat, var, name)] = value;
    }
  }
  return out;
}

inline Scenario random_scenario(Rng& rng, const std::string& tag) {
  static const std::vector<std::string> kModels = {"Sinusoidal", "Linear", "Constant"};
  static const std::vector<std::string> kVars = {"x", "y", "v", "a"};
  static const char* kUnits[] = {"m", "m", "m/s", "m/s^2"};
  const auto& pool = tag_pool();
  auto uid = [&](const std::string& what, std::size_t i) {
    return tag + " " + what + " " + std::to_string(i);
  };

  Scenario s;
  s.uid = tag + " scenario";
  s.name = random_text(rng);
  s.tags = random_tags(rng, pool, 2);

  const std::size_t n_pe = rng.below(3);
  for (std::size_t i = 0; i < n_pe; ++i) {
    auto cat = std::make_shared<PhysicalElementCategory>();
    cat->uid = uid("pe category", i);
    cat->name = random_text(rng);
    cat->description = random_text(rng);
    cat->tags = random_tags(rng, pool, 1);
    auto pe = std::make_shared<PhysicalElement>();
    pe->uid = uid("pe", i);
    pe->name = random_text(rng);
    pe->category = cat;
    const std::size_t n_props = rng.below(4);
    for (std::size_t k = 0; k < n_props; ++k) {
      PropertyValue v;
      if (rng.chance(0.5)) {
        v.value = rng.any_double();
      } else {
        v.value = random_text(rng);
      }
      if (rng.chance(0.5)) v.unit = rng.chance(0.5) ? "m" : "deg";
      pe->properties["prop_" + std::to_string(k)] = v;
    }
    s.physical_elements.push_back(pe);
  }

  const std::size_t n_actors = 1 + rng.below(3);
  std::vector<std::shared_ptr<Actor>> actors;
  for (std::size_t i = 0; i < n_actors; ++i) {
    auto cat = std::make_shared<ActorCategory>();
    cat->uid = uid("actor category", i);
    cat->name = random_text(rng);
    cat->description = random_text(rng);
    cat->actor_type = i == 0 ? ActorType::kVehicle
                             : static_cast<ActorType>(rng.below(5));
    if (i == 0) cat->tags.push_back(std::string(kEgoVehicleTag));
    auto actor = std::make_shared<Actor>();
    actor->uid = uid("actor", i);
    actor->name = random_text(rng);
    actor->category = cat;
    actor->tags = random_tags(rng, pool, 1);
    const std::string symbol = i == 0 ? "ego" : "a" + std::to_string(i);
    for (std::size_t v = 0; v < 4; ++v) {
      if (v == 0 || rng.chance(0.6)) {
        actor->initial_state[kVars[v] + "_" + symbol] = {rng.any_double(), kUnits[v]};
      }
    }
    actors.push_back(actor);
  }

  auto start = make_event(tag + " start", "Start", "t >= 0");
  auto end = make_event(tag + " end", "End",
                        n_actors > 1 ? "t > 50 || collision(ego, a1)" : "t > 50");
  s.start_event = start;
  s.end_event = end;
  s.events = {start};
  const std::size_t n_events = rng.below(3);
  for (std::size_t i = 0; i < n_events; ++i) {
    const std::string var = rng.pick(kVars) + "_ego";
    s.events.push_back(make_event(uid("event", i), random_text(rng),
                                  var + " >= " + std::to_string(rng.between(-50, 50)),
                                  random_tags(rng, pool, 1)));
  }
  s.events.push_back(end);

  const std::size_t n_acts = rng.below(4);
  for (std::size_t i = 0; i < n_acts; ++i) {
    auto cat = std::make_shared<ActivityCategory>();
    cat->uid = uid("activity category", i);
    cat->name = random_text(rng);
    cat->description = random_text(rng);
    cat->model = rng.pick(kModels);
    cat->tags = random_tags(rng, pool, 1);
    cat->state_variables = {rng.pick(kVars)};
    if (rng.chance(0.3)) {
      const std::string second = rng.pick(kVars);
      if (second != cat->state_variables[0]) cat->state_variables.push_back(second);
    }
    auto activity = std::make_shared<Activity>();
    activity->uid = uid("activity", i);
    activity->name = random_text(rng);
    activity->category = cat;
    activity->parameters = random_parameters(rng, *cat);
    const std::size_t a = rng.below(s.events.size() - 1);
    const std::size_t b = a + 1 + rng.below(s.events.size() - 1 - a);
    activity->start_event = s.events[a];
    activity->end_event = s.events[b];
    s.activities.push_back(activity);
    s.acts.push_back({actors[rng.below(actors.size())], activity});
  }
  for (auto& actor : actors) {
    const bool acting = std::any_of(s.acts.begin(), s.acts.end(), [&](const Act& act) {
      return act.actor == actor;
    });
    if (!acting || rng.chance(0.3)) {
      StateVector desired;
      const auto& first = *actor->initial_state.begin();
      desired[first.first] = {rng.any_double(), first.second.unit};
      actor->desired_state = desired;
    }
    s.actors.push_back(actor);
  }
  return s;
}

inline ScenarioCategory random_category(Rng& rng, const std::string& tag) {
  static const std::vector<std::string> kModels = {"Sinusoidal", "Linear", "Constant"};
  static const std::vector<std::string> kVars = {"x", "y", "v", "a"};
  const auto& pool = tag_pool();
  auto uid = [&](const std::string& what, std::size_t i) {
    return tag + " " + what + " " + std::to_string(i);
  };
  ScenarioCategory c;
  c.uid = tag + " category";
  c.name = random_text(rng);
  c.description = random_text(rng);
  c.tags = random_tags(rng, pool, 2);
  const std::size_t n_pe = rng.below(3);
  for (std::size_t i = 0; i < n_pe; ++i) {
    auto pe = std::make_shared<PhysicalElementCategory>();
    pe->uid = uid("pe category", i);
    pe->name = random_text(rng);
    pe->description = random_text(rng);
    pe->tags = random_tags(rng, pool, 1);
    c.physical_element_categories.push_back(pe);
  }
  const std::size_t n_actors = 1 + rng.below(3);
  for (std::size_t i = 0; i < n_actors; ++i) {
    auto a = std::make_shared<ActorCategory>();
    a->uid = uid("actor category", i);
    a->name = random_text(rng);
    a->description = random_text(rng);
    a->actor_type = i == 0 ? ActorType::kVehicle : static_cast<ActorType>(rng.below(5));
    if (i == 0) a->tags.push_back(std::string(kEgoVehicleTag));
    c.actor_categories.push_back(a);
  }
  const std::size_t n_acts = rng.below(4);
  for (std::size_t i = 0; i < n_acts; ++i) {
    auto v = std::make_shared<ActivityCategory>();
    v->uid = uid("activity category", i);
    v->name = random_text(rng);
    v->description = random_text(rng);
    v->model = rng.pick(kModels);
    v->state_variables = {rng.pick(kVars)};
    v->tags = random_tags(rng, pool, 1);
    c.activity_categories.push_back(v);
    c.acts.push_back({rng.pick(c.actor_categories), v});
  }
  return c;
}

/// Parameters of one model kind; t0 in [-10, 10].
inline ModelParams random_model_params(Rng& rng, const std::string& kind) {
  ModelParams p{kind, {}};
  const double t0 = rng.uniform(-10.0, 10.0);
  if (kind == "Sinusoidal") {
    p.values = {{"A", rng.uniform(-50.0, 50.0)},
                {"T", rng.uniform(0.5, 10.0)},
                {"t0", t0},
                {"z0", rng.uniform(-50.0, 50.0)}};
  } else if (kind == "Linear") {
    p.values = {{"s", rng.uniform(-20.0, 20.0)}, {"t0", t0}, {"z0", rng.uniform(-50.0, 50.0)}};
  } else {
    p.values = {{"z0", rng.uniform(-50.0, 50.0)}};
  }
  return p;
}

/// dz/dt written out independently of the model classes, clamped to the
/// domain like DomainPolicy::kClamp.
inline std::function<double(double)> reference_rate(const ModelParams& p) {
  if (p.kind == "Sinusoidal") {
    const double a = p.at("A");
    const double period = p.at("T");
    const double t0 = p.at("t0");
    return [=](double t) {
      if (t <= t0 || t >= t0 + period) return 0.0;
      return std::numbers::pi * a / (2 * period) * std::sin(std::numbers::pi * (t - t0) / period);
    };
  }
  if (p.kind == "Linear") {
    const double slope = p.at("s");
    const double t0 = p.at("t0");
    return [=](double t) { return t < t0 ? 0.0 : slope; };
  }
  return [](double) { return 0.0; };
}

inline double domain_start(const ModelParams& p) {
  return p.values.count("t0") ? p.at("t0") : 0.0;
}

/// End of the Sinusoidal domain; 5 s past the start for unbounded kinds.
inline double domain_end(const ModelParams& p) {
  if (p.kind == "Sinusoidal") return p.at("t0") + p.at("T");
  return domain_start(p) + 5.0;
}

}  // namespace sdm::testing
