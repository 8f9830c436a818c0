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

#include "sdm/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace sdm {
namespace {

// Two instants closer than this are the same grid point.
constexpr double kSameInstant = 1e-12;

double* field(ActorState& s, std::string_view var) {
  if (var == "x") return &s.x;
  if (var == "y") return &s.y;
  if (var == "v") return &s.v;
  if (var == "a") return &s.a;
  return nullptr;
}

double field_value(const ActorState& s, std::string_view var) {
  return *field(const_cast<ActorState&>(s), var);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// One activity performed by one actor.
struct Performance {
  ActivityPtr activity;
  std::size_t actor = 0;
  enum class Phase { kPending, kActive, kDone } phase = Phase::kPending;
  double start = 0.0;
  std::map<std::string, ModelParams> params;  // per state variable
  std::map<std::string, const Model*> models;
  // Position and speed at the last re-anchoring instant.
  double anchor_t = 0.0;
  double anchor_x = 0.0;
  double anchor_v = 0.0;
};

class Engine {
 public:
  Engine(const Scenario& scenario, const SimConfig& config,
         const PolicyMap& policies, const Registries& reg)
      : scenario_(scenario), config_(config), reg_(reg), layout_(scenario, config) {
    config_.check();
    collect_events();
    bind_behaviour(policies);
    init_world();
  }

  Trace run() {
    trace_.actor_uids.reserve(layout_.size());
    for (std::size_t i = 0; i < layout_.size(); ++i) {
      trace_.actor_uids.push_back(layout_.uid(i));
    }
    if (!holds(*scenario_.start_event, world_)) {
      throw Error(Errc::kStartConditionUnsatisfied,
                  "start condition '" + print(scenario_.start_event->condition) +
                      "' does not hold at t = 0");
    }
    fire({start_index_});
    record();
    step_loop();
    finish();
    return std::move(trace_);
  }

 private:
  void collect_events() {
    auto add = [&](const EventPtr& e) {
      if (!e) return;
      for (const auto& known : events_) {
        if (known->uid == e->uid) return;
      }
      events_.push_back(e);
    };
    add(scenario_.start_event);
    for (const auto& e : scenario_.events) {
      if (e->uid != scenario_.end_event->uid) add(e);
    }
    add(scenario_.end_event);
    for (std::size_t i = 0; i < events_.size(); ++i) {
      if (events_[i]->uid == scenario_.start_event->uid) start_index_ = i;
      if (events_[i]->uid == scenario_.end_event->uid) end_index_ = i;
      mode_link_.push_back(as_mode_transition(events_[i]->condition));
    }
  }

  void bind_behaviour(const PolicyMap& policies) {
    policies_.assign(layout_.size(), nullptr);
    desired_.assign(layout_.size(), nullptr);
    std::vector<bool> acting(layout_.size(), false);
    for (const auto& act : scenario_.acts) {
      const auto i = *layout_.find(act.actor->uid);
      acting[i] = true;
      Performance p;
      p.activity = act.activity;
      p.actor = i;
      performances_.push_back(std::move(p));
    }
    for (const auto& [uid, policy] : policies) {
      std::optional<std::size_t> idx;
      for (std::size_t i = 0; i < layout_.size(); ++i) {
        if (layout_.uid(i) == uid) idx = i;
      }
      if (!idx) {
        throw Error(Errc::kInvalidArgument,
                    "policy given for unknown actor '" + uid + "'");
      }
      if (acting[*idx]) {
        throw Error(Errc::kInvalidArgument,
                    "actor '" + uid + "' has both activities and a policy");
      }
      if (!policy) throw Error(Errc::kInvalidArgument, "null policy for '" + uid + "'");
      policies_[*idx] = policy.get();
    }
    for (std::size_t i = 0; i < layout_.size(); ++i) {
      const auto& actor = *scenario_.actors[i];
      if (actor.desired_state) desired_[i] = &*actor.desired_state;
      if (!acting[i] && !policies_[i]) {
        throw Error(Errc::kNoGoverningBehavior,
                    "actor '" + actor.uid + "' has neither activities nor a policy");
      }
    }
  }

  void init_world() {
    world_.t = 0.0;
    for (const auto& actor : scenario_.actors) {
      ActorState s;
      for (const auto& [name, q] : actor->initial_state) {
        const auto parts = split_state_name(name);
        double* f = parts ? field(s, parts->first) : nullptr;
        if (f) {
          *f = q.value;
        } else {
          s.extra[name] = q.value;
        }
      }
      world_.actors.push_back(std::move(s));
    }
    governors_.assign(layout_.size(), {});
    commands_.assign(layout_.size(), {});
  }

  bool holds(const Event& event, const WorldState& world) const {
    return evaluate(event.condition, WorldView(layout_, world));
  }

  // --- State propagation --------------------------------------------------

  const Performance* governor(std::size_t actor, std::string_view var) const {
    const auto& g = governors_[actor];
    const auto it = g.find(std::string(var));
    return it == g.end() ? nullptr : &performances_[it->second];
  }

  static double model_state(const Performance& p, const std::string& var, double t) {
    return p.models.at(var)->state(p.params.at(var), t, DomainPolicy::kClamp);
  }

  /// State at `tau` >= from.t, holding the step's policy commands fixed.
  WorldState advance(const WorldState& from, double tau) const {
    WorldState out = from;
    out.t = tau;
    const double h = tau - from.t;
    for (std::size_t i = 0; i < layout_.size(); ++i) {
      const ActorState& s = from.actors[i];
      ActorState& n = out.actors[i];
      if (policies_[i]) {
        const auto& cmd = commands_[i];
        n.v = s.v + cmd.acceleration * h;
        if (s.v >= 0.0 && n.v < 0.0) n.v = 0.0;  // brakes do not reverse
        n.x = s.x + n.v * h;
        n.y = s.y + cmd.lateral_rate * h;
        n.a = cmd.acceleration;
        continue;
      }
      const Performance* gx = governor(i, "x");
      const Performance* gy = governor(i, "y");
      const Performance* gv = governor(i, "v");
      const Performance* ga = governor(i, "a");
      if (gy) n.y = model_state(*gy, "y", tau);
      if (gx) {
        const auto& params = gx->params.at("x");
        const Model& m = *gx->models.at("x");
        n.x = m.state(params, tau, DomainPolicy::kClamp);
        if (!gv) n.v = m.derivative(params, tau, DomainPolicy::kClamp);
        if (!gv && !ga) n.a = m.second_derivative(params, tau, DomainPolicy::kClamp);
      }
      if (gv) {
        const auto& params = gv->params.at("v");
        const Model& m = *gv->models.at("v");
        n.v = m.state(params, tau, DomainPolicy::kClamp);
        if (!ga) n.a = m.derivative(params, tau, DomainPolicy::kClamp);
        if (!gx) {
          n.x = gv->anchor_x +
                m.displacement(params, gv->anchor_t, tau, DomainPolicy::kClamp);
        }
      }
      if (ga) {
        const auto& params = ga->params.at("a");
        const Model& m = *ga->models.at("a");
        n.a = m.state(params, tau, DomainPolicy::kClamp);
        if (!gv && !gx) {
          n.v = ga->anchor_v +
                m.displacement(params, ga->anchor_t, tau, DomainPolicy::kClamp);
          n.x = s.x + 0.5 * (s.v + n.v) * h;
        }
      }
      if (!gx && !gv && !ga) {
        n.a = 0.0;
        n.x = s.x + s.v * h;
      }
    }
    return out;
  }

  void refresh_commands() {
    for (std::size_t i = 0; i < layout_.size(); ++i) {
      if (!policies_[i]) continue;
      static const StateVector kNone;
      commands_[i] = policies_[i]->command(world_, layout_, i,
                                           desired_[i] ? *desired_[i] : kNone);
      if (!std::isfinite(commands_[i].acceleration) ||
          !std::isfinite(commands_[i].lateral_rate)) {
        throw Error(Errc::kNonFinite,
                    "policy for '" + layout_.uid(i) + "' returned a non-finite command");
      }
    }
  }

  // --- Events and activity switching ----------------------------------------

  void start_performance(Performance& p) {
    const auto& activity = *p.activity;
    const auto& cat = *activity.category;
    const Model& model = reg_.models->get(cat.model);
    p.phase = Performance::Phase::kActive;
    p.start = world_.t;
    const ActorState& s = world_.actors[p.actor];
    for (const auto& var : cat.state_variables) {
      ModelParams params = activity_params(activity, var);
      const auto t0 = params.values.find("t0");
      // Activities starting later than their nominal t0 are re-timed to the
      // event instant and continue from the current value.
      if (t0 != params.values.end() &&
          std::fabs(t0->second - world_.t) > config_.event_tolerance) {
        t0->second = world_.t;
        const auto z0 = params.values.find("z0");
        if (z0 != params.values.end()) z0->second = field_value(s, var);
      }
      p.params[var] = std::move(params);
      p.models[var] = &model;
    }
    world_.started.insert(activity.uid);
    trace_.activities.emplace(activity.uid, ActivitySpan{world_.t, std::nullopt});
  }

  void end_performance(Performance& p) {
    p.phase = Performance::Phase::kDone;
    world_.ended.insert(p.activity->uid);
    auto& span = trace_.activities[p.activity->uid];
    if (!span.end) span.end = world_.t;
  }

  void rebuild_governors() {
    for (auto& g : governors_) g.clear();
    // Later starts override earlier ones; ties keep act order.
    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < performances_.size(); ++k) {
      if (performances_[k].phase == Performance::Phase::kActive) order.push_back(k);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return performances_[a].start < performances_[b].start;
    });
    for (const auto k : order) {
      auto& p = performances_[k];
      for (const auto& var : p.activity->category->state_variables) {
        governors_[p.actor][var] = k;
      }
      p.anchor_t = world_.t;
      p.anchor_x = world_.actors[p.actor].x;
      p.anchor_v = world_.actors[p.actor].v;
    }
  }

  bool boundary_passed(const LinkReference& link) const {
    return link.boundary == LinkBoundary::kStart
               ? world_.started.count(link.activity_uid) > 0
               : world_.ended.count(link.activity_uid) > 0;
  }

  /// Fires `batch` at world_.t, switches activities, then fires every event
  /// that the switch makes due at the same instant.
  void fire(std::vector<std::size_t> batch) {
    while (!batch.empty()) {
      std::sort(batch.begin(), batch.end());
      for (const auto e : batch) {
        world_.fired.insert(events_[e]->uid);
        trace_.events.push_back({events_[e]->uid, world_.t});
      }
      for (auto& p : performances_) {
        if (p.phase != Performance::Phase::kActive) continue;
        for (const auto e : batch) {
          if (p.activity->end_event->uid == events_[e]->uid) {
            end_performance(p);
            break;
          }
        }
      }
      for (auto& p : performances_) {
        if (p.phase != Performance::Phase::kPending) continue;
        for (const auto e : batch) {
          if (p.activity->start_event->uid == events_[e]->uid) {
            start_performance(p);
            break;
          }
        }
      }
      for (const auto e : batch) {
        if (e == end_index_) {
          ended_ = true;
          return;
        }
      }
      rebuild_governors();
      world_ = advance(world_, world_.t);  // settle switched variables
      batch.clear();
      for (std::size_t e = 0; e < events_.size(); ++e) {
        if (world_.fired.count(events_[e]->uid)) continue;
        if (mode_link_[e]) {
          if (boundary_passed(*mode_link_[e])) batch.push_back(e);
        } else if (holds(*events_[e], world_)) {
          batch.push_back(e);
        }
      }
    }
  }

  /// Earliest natural end of an active activity whose end event is defined
  /// by that very end, with the events it fires.
  std::optional<std::pair<double, std::vector<std::size_t>>> next_scheduled() const {
    std::optional<std::pair<double, std::vector<std::size_t>>> best;
    for (const auto& p : performances_) {
      if (p.phase != Performance::Phase::kActive) continue;
      std::size_t e = 0;
      while (e < events_.size() && events_[e]->uid != p.activity->end_event->uid) ++e;
      if (e == events_.size() || world_.fired.count(events_[e]->uid)) continue;
      const auto& link = mode_link_[e];
      if (!link || link->boundary != LinkBoundary::kEnd ||
          link->activity_uid != p.activity->uid) {
        continue;
      }
      std::optional<double> end;
      for (const auto& [var, model] : p.models) {
        const auto ne = model->natural_end(p.params.at(var));
        if (!ne) {
          end.reset();
          break;
        }
        end = std::max(end.value_or(*ne), *ne);
      }
      if (!end) continue;
      if (!best || *end < best->first - kSameInstant) {
        best = std::pair{*end, std::vector<std::size_t>{e}};
      } else if (std::fabs(*end - best->first) <= kSameInstant) {
        best->second.push_back(e);
      }
    }
    return best;
  }

  void record() {
    if (!trace_.samples.empty() &&
        std::fabs(trace_.samples.back().t - world_.t) <= kSameInstant) {
      trace_.samples.back() = {world_.t, world_.actors};
      return;
    }
    trace_.samples.push_back({world_.t, world_.actors});
  }

  void step_loop() {
    std::size_t k = 0;
    const double dt = config_.dt;
    while (!ended_) {
      const double t = world_.t;
      double grid = static_cast<double>(k + 1) * dt;
      if (grid <= t + kSameInstant) {
        ++k;
        continue;
      }
      if (t >= config_.t_max - kSameInstant) return;
      double target = std::min(grid, config_.t_max);
      auto scheduled = next_scheduled();
      bool is_scheduled = false;
      if (scheduled && scheduled->first <= target + kSameInstant) {
        target = std::max(scheduled->first, t);
        is_scheduled = true;
      }
      refresh_commands();
      const WorldState next = advance(world_, target);

      std::vector<std::pair<double, std::size_t>> crossings;
      for (std::size_t e = 0; e < events_.size(); ++e) {
        if (mode_link_[e] || world_.fired.count(events_[e]->uid)) continue;
        if (!holds(*events_[e], next)) continue;
        const double te = holds(*events_[e], world_)
                              ? t
                              : locate_event(
                                    [&](double tau) {
                                      return holds(*events_[e], advance(world_, tau));
                                    },
                                    t, target, config_.event_tolerance);
        crossings.emplace_back(te, e);
      }
      if (!crossings.empty()) {
        double first = crossings.front().first;
        for (const auto& [te, _] : crossings) first = std::min(first, te);
        std::vector<std::size_t> batch;
        for (const auto& [te, e] : crossings) {
          if (te <= first + config_.event_tolerance) batch.push_back(e);
        }
        world_ = advance(world_, first);
        fire(batch);
        record();
        continue;
      }
      world_ = next;
      if (is_scheduled) {
        fire(scheduled->second);
      } else if (std::fabs(target - grid) <= kSameInstant) {
        ++k;
      }
      record();
    }
  }

  void finish() {
    trace_.ended = ended_;
    if (!ended_) {
      trace_.outcome = {"timeout"};
      return;
    }
    const WorldView view(layout_, world_);
    // Desired values stand in for the current state when naming goal
    // disjuncts.
    std::map<std::string, double> desired;
    for (const auto& actor : scenario_.actors) {
      if (!actor->desired_state) continue;
      for (const auto& [name, q] : *actor->desired_state) desired[name] = q.value;
    }
    struct GoalView : EvaluationContext {
      const std::map<std::string, double>& values;
      double t;
      GoalView(const std::map<std::string, double>& v, double time)
          : values(v), t(time) {}
      std::optional<double> variable(std::string_view name) const override {
        if (name == "t") return t;
        const auto it = values.find(std::string(name));
        if (it == values.end()) return std::nullopt;
        return it->second;
      }
    };
    for (const auto& d : disjuncts(scenario_.end_event->condition)) {
      if (!evaluate(*d, view)) continue;
      std::string name;
      auto vars = free_variables(*d);
      vars.erase("t");
      if (d->kind == ExprNode::Kind::kCollision) {
        name = "collision";
      } else if (vars.empty() && free_variables(*d).count("t") &&
                 link_references(ConditionExpr(d)).empty() &&
                 collision_actors(ConditionExpr(d)).empty()) {
        name = "timeout";
      } else if (!vars.empty() &&
                 std::all_of(vars.begin(), vars.end(),
                             [&](const std::string& v) { return desired.count(v); }) &&
                 [&] {
                   try {
                     return evaluate(*d, GoalView(desired, world_.t));
                   } catch (const Error&) {
                     return false;
                   }
                 }()) {
        name = "destination";
      } else {
        name = print(*d);
      }
      if (std::find(trace_.outcome.begin(), trace_.outcome.end(), name) ==
          trace_.outcome.end()) {
        trace_.outcome.push_back(name);
      }
    }
  }

  const Scenario& scenario_;
  SimConfig config_;
  Registries reg_;
  ActorLayout layout_;
  std::vector<EventPtr> events_;
  std::vector<std::optional<LinkReference>> mode_link_;
  std::size_t start_index_ = 0;
  std::size_t end_index_ = 0;
  std::vector<const EgoPolicy*> policies_;
  std::vector<const StateVector*> desired_;
  std::vector<PolicyCommand> commands_;
  std::vector<Performance> performances_;
  std::vector<std::map<std::string, std::size_t>> governors_;
  WorldState world_;
  Trace trace_;
  bool ended_ = false;
};

}  // namespace

std::optional<Shape> default_shape(ActorType type) {
  switch (type) {
    case ActorType::kVehicle: return Shape{4.5, 1.8};
    case ActorType::kPedestrian: return Shape{0.5, 0.5};
    case ActorType::kCyclist: return Shape{1.8, 0.6};
    default: return std::nullopt;
  }
}

void SimConfig::check() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(Errc::kInvalidArgument, "dt must be positive");
  }
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw Error(Errc::kInvalidArgument, "t_max must be positive");
  }
  if (!(event_tolerance > 0.0) || !(event_tolerance < dt)) {
    throw Error(Errc::kInvalidArgument, "event tolerance must lie in (0, dt)");
  }
  for (const auto& [uid, s] : shapes) {
    if (!(s.length > 0.0) || !(s.width > 0.0)) {
      throw Error(Errc::kInvalidArgument, "shape of '" + uid + "' must be positive");
    }
  }
}

ActorLayout::ActorLayout(const Scenario& scenario, const SimConfig& config) {
  for (const auto& actor : scenario.actors) {
    uids_.push_back(actor->uid);
    symbols_.push_back(actor_symbol(*actor));
    const auto it = config.shapes.find(actor->uid);
    if (it != config.shapes.end()) {
      shapes_.push_back(it->second);
    } else {
      shapes_.push_back(actor->category ? default_shape(actor->category->actor_type)
                                        : std::nullopt);
    }
  }
}

std::optional<std::size_t> ActorLayout::find(std::string_view reference) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == reference) return i;
  }
  for (std::size_t i = 0; i < uids_.size(); ++i) {
    if (uids_[i] == reference) return i;
  }
  return std::nullopt;
}

const Shape& ActorLayout::shape(std::size_t i) const {
  if (!shapes_.at(i)) {
    throw Error(Errc::kMissingShape, "actor '" + uids_[i] + "' has no collision shape");
  }
  return *shapes_[i];
}

std::optional<double> WorldView::variable(std::string_view name) const {
  if (name == "t") return world_.t;
  const auto parts = split_state_name(name);
  if (!parts) return std::nullopt;
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    if (layout_.symbol(i) != parts->second) continue;
    const ActorState& s = world_.actors[i];
    if (field(const_cast<ActorState&>(s), parts->first)) {
      return field_value(s, parts->first);
    }
    const auto it = s.extra.find(std::string(name));
    if (it != s.extra.end()) return it->second;
  }
  return std::nullopt;
}

bool WorldView::collision(std::string_view a, std::string_view b) const {
  const auto i = layout_.find(a);
  const auto j = layout_.find(b);
  if (!i || !j) {
    throw Error(Errc::kInvalidArgument, "collision(" + std::string(a) + ", " +
                                            std::string(b) + ") names an unknown actor");
  }
  return rectangles_overlap(world_.actors[*i], layout_.shape(*i),
                            world_.actors[*j], layout_.shape(*j));
}

bool WorldView::linked(std::string_view activity_uid, LinkBoundary boundary) const {
  const auto& set = boundary == LinkBoundary::kStart ? world_.started : world_.ended;
  return set.count(std::string(activity_uid)) > 0;
}

bool rectangles_overlap(const ActorState& p, const Shape& ps, const ActorState& q,
                        const Shape& qs) {
  return std::fabs(p.x - q.x) < 0.5 * (ps.length + qs.length) &&
         std::fabs(p.y - q.y) < 0.5 * (ps.width + qs.width);
}

std::map<std::pair<std::string, std::string>, bool> check_collision(
    const WorldState& state, const ActorLayout& layout) {
  std::map<std::pair<std::string, std::string>, bool> out;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    for (std::size_t j = i + 1; j < layout.size(); ++j) {
      out[{layout.uid(i), layout.uid(j)}] = rectangles_overlap(
          state.actors.at(i), layout.shape(i), state.actors.at(j), layout.shape(j));
    }
  }
  return out;
}

std::optional<double> Trace::event_time(std::string_view uid) const {
  for (const auto& e : events) {
    if (e.uid == uid) return e.t;
  }
  return std::nullopt;
}

std::size_t Trace::actor_index(std::string_view uid) const {
  for (std::size_t i = 0; i < actor_uids.size(); ++i) {
    if (actor_uids[i] == uid) return i;
  }
  throw Error(Errc::kInvalidArgument, "no actor '" + std::string(uid) + "' in trace");
}

Trace simulate(const Scenario& scenario, const SimConfig& config,
               const PolicyMap& policies, const Registries& reg) {
  auto report = validate(scenario, reg);
  if (!report.ok()) throw ValidationFailed(std::move(report));
  return Engine(scenario, config, policies, reg).run();
}

Trace run_test_scenario(const Scenario& scenario,
                        std::shared_ptr<const EgoPolicy> ego_policy,
                        const SimConfig& config, const Registries& reg) {
  std::set<std::string> acting;
  for (const auto& act : scenario.acts) {
    if (act.actor) acting.insert(act.actor->uid);
  }
  const Tag ego = reg.tags->resolve(kEgoVehicleTag);
  PolicyMap policies;
  for (const auto& actor : scenario.actors) {
    const auto tags = resolved_tags(*reg.tags, actor->tags,
                                    actor->category ? &actor->category->tags : nullptr);
    if (!tags.count(ego) || acting.count(actor->uid)) continue;
    if (!actor->desired_state) {
      throw Error(Errc::kInvalidArgument,
                  "ego actor '" + actor->uid + "' has no desired state");
    }
    policies[actor->uid] = ego_policy;
  }
  if (policies.empty()) {
    throw Error(Errc::kInvalidArgument,
                "test scenario needs an ego actor without activities");
  }
  return simulate(scenario, config, policies, reg);
}

double locate_event(const std::function<bool(double)>& holds, double t_lo,
                    double t_hi, double tolerance) {
  if (!(t_lo <= t_hi) || holds(t_lo) || !holds(t_hi)) {
    throw Error(Errc::kNoSignChange,
                "condition must be false at the lower and true at the upper end "
                "of the bracket");
  }
  while (t_hi - t_lo > tolerance) {
    const double mid = 0.5 * (t_lo + t_hi);
    if (mid <= t_lo || mid >= t_hi) break;
    if (holds(mid)) {
      t_hi = mid;
    } else {
      t_lo = mid;
    }
  }
  return t_hi;
}

double locate_event(const ConditionExpr& condition,
                    const std::function<WorldState(double)>& state_fn,
                    const ActorLayout& layout, double t_lo, double t_hi,
                    double tolerance) {
  return locate_event(
      [&](double t) {
        const WorldState w = state_fn(t);
        return evaluate(condition, WorldView(layout, w));
      },
      t_lo, t_hi, tolerance);
}

WorldState state_at(const Trace& trace, double t) {
  if (trace.samples.empty() || !(t >= trace.samples.front().t) ||
      !(t <= trace.samples.back().t)) {
    throw Error(Errc::kOutOfRange, "time " + format_double(t) + " outside the trace");
  }
  const auto upper = std::lower_bound(
      trace.samples.begin(), trace.samples.end(), t,
      [](const TraceSample& s, double value) { return s.t < value; });
  WorldState out;
  out.t = t;
  if (upper->t == t) {
    out.actors = upper->actors;
  } else {
    const auto& hi = *upper;
    const auto& lo = *(upper - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    out.actors = lo.actors;
    for (std::size_t i = 0; i < out.actors.size(); ++i) {
      auto lerp = [&](double a, double b) { return a + w * (b - a); };
      out.actors[i].x = lerp(lo.actors[i].x, hi.actors[i].x);
      out.actors[i].y = lerp(lo.actors[i].y, hi.actors[i].y);
      out.actors[i].v = lerp(lo.actors[i].v, hi.actors[i].v);
      out.actors[i].a = lerp(lo.actors[i].a, hi.actors[i].a);
    }
  }
  for (const auto& e : trace.events) {
    if (e.t <= t) out.fired.insert(e.uid);
  }
  for (const auto& [uid, span] : trace.activities) {
    if (span.start <= t) out.started.insert(uid);
    if (span.end && *span.end <= t) out.ended.insert(uid);
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  if (value == 0.0) value = 0.0;  // no "-0"
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << "t,actor_uid,x,y,v,a\n";
  for (const auto& sample : trace.samples) {
    const std::string t = format_double(sample.t);
    for (std::size_t i = 0; i < sample.actors.size(); ++i) {
      const auto& s = sample.actors[i];
      out << t << ',' << csv_field(trace.actor_uids[i]) << ',' << format_double(s.x)
          << ',' << format_double(s.y) << ',' << format_double(s.v) << ','
          << format_double(s.a) << '\n';
    }
  }
}

void write_events_csv(const Trace& trace, std::ostream& out) {
  out << "event_uid,t\n";
  for (const auto& e : trace.events) {
    out << csv_field(e.uid) << ',' << format_double(e.t) << '\n';
  }
}

}  // namespace sdm
