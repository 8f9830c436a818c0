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

#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sdm/elements.hpp"

namespace sdm {

/// Axis-aligned rectangle centred on the actor position.
struct Shape {
  double length = 0.0;  // along x
  double width = 0.0;   // along y

  bool operator==(const Shape&) const = default;
};

/// Vehicle 4.5 x 1.8, pedestrian 0.5 x 0.5, cyclist 1.8 x 0.6; nullopt for
/// other actor types.
std::optional<Shape> default_shape(ActorType type);

struct SimConfig {
  double dt = 0.01;
  double t_max = 200.0;
  /// Width of the final bisection bracket of a threshold event.
  double event_tolerance = 1e-6;
  /// Per actor uid; overrides default_shape().
  std::map<std::string, Shape> shapes;

  /// Throws InvalidArgument unless dt > 0, t_max > 0 and tolerance < dt.
  void check() const;
};

struct ActorState {
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double a = 0.0;
  /// Initial-state entries outside x/y/v/a, held constant.
  std::map<std::string, double> extra;

  bool operator==(const ActorState&) const = default;
};

struct WorldState {
  double t = 0.0;
  std::vector<ActorState> actors;  // scenario actor order
  std::set<std::string> fired;     // event uids
  std::set<std::string> started;   // activity uids
  std::set<std::string> ended;     // activity uids

  bool operator==(const WorldState&) const = default;
};

/// Static per-run lookup: actor order, state-name symbols and shapes.
class ActorLayout {
 public:
  ActorLayout(const Scenario& scenario, const SimConfig& config);

  std::size_t size() const { return uids_.size(); }
  const std::string& uid(std::size_t i) const { return uids_[i]; }
  const std::string& symbol(std::size_t i) const { return symbols_[i]; }
  /// Symbol first, uid second.
  std::optional<std::size_t> find(std::string_view reference) const;
  /// Throws MissingShape.
  const Shape& shape(std::size_t i) const;

 private:
  std::vector<std::string> uids_;
  std::vector<std::string> symbols_;
  std::vector<std::optional<Shape>> shapes_;
};

/// Binds condition variables (t, x_ego, ...), collision(...) and
/// linked(...) to one world state.
class WorldView : public EvaluationContext {
 public:
  WorldView(const ActorLayout& layout, const WorldState& world)
      : layout_(layout), world_(world) {}

  std::optional<double> variable(std::string_view name) const override;
  bool collision(std::string_view a, std::string_view b) const override;
  bool linked(std::string_view activity_uid, LinkBoundary boundary) const override;

 private:
  const ActorLayout& layout_;
  const WorldState& world_;
};

/// Strict overlap of the two rectangles (touching edges do not collide).
bool rectangles_overlap(const ActorState& p, const Shape& ps, const ActorState& q,
                        const Shape& qs);

/// Overlap test for every actor pair (i < j), keyed by uid pair. Throws
/// MissingShape when an actor of the state has no shape.
std::map<std::pair<std::string, std::string>, bool> check_collision(
    const WorldState& state, const ActorLayout& layout);

struct PolicyCommand {
  double acceleration = 0.0;  // m/s^2 along x
  double lateral_rate = 0.0;  // m/s along y
};

/// Goal-driven behaviour for an actor without activities. Must be
/// deterministic; called at the start of every step with the state at that
/// instant.
class EgoPolicy {
 public:
  virtual ~EgoPolicy() = default;
  virtual PolicyCommand command(const WorldState& world, const ActorLayout& layout,
                                std::size_t self,
                                const StateVector& desired) const = 0;
};

using PolicyMap = std::map<std::string, std::shared_ptr<const EgoPolicy>>;

struct FiredEvent {
  std::string uid;
  double t = 0.0;

  bool operator==(const FiredEvent&) const = default;
};

struct ActivitySpan {
  double start = 0.0;
  std::optional<double> end;

  bool operator==(const ActivitySpan&) const = default;
};

struct TraceSample {
  double t = 0.0;
  std::vector<ActorState> actors;

  bool operator==(const TraceSample&) const = default;
};

struct Trace {
  std::vector<std::string> actor_uids;
  /// Grid samples plus every event instant (state after the switch).
  std::vector<TraceSample> samples;
  std::vector<FiredEvent> events;  // in firing order
  std::map<std::string, ActivitySpan> activities;
  /// "collision", "destination", "timeout" or the text of each end-condition
  /// disjunct that holds at the end instant.
  std::vector<std::string> outcome;
  bool ended = false;  // false when t_max was reached first

  std::optional<double> event_time(std::string_view uid) const;
  std::size_t actor_index(std::string_view uid) const;

  bool operator==(const Trace&) const = default;
};

/// Runs the scenario from its start event to its end event (or t_max).
/// Activity-governed variables follow their closed forms; actors listed in
/// `policies` are integrated with semi-implicit Euler. Throws
/// NoGoverningBehavior, StartConditionUnsatisfied, DivisionGuard,
/// MissingShape, InvalidArgument.
Trace simulate(const Scenario& scenario, const SimConfig& config = {},
               const PolicyMap& policies = {}, const Registries& reg = {});

/// simulate() with `ego_policy` driving the ego actor, which must have a
/// desired state and no acts.
Trace run_test_scenario(const Scenario& scenario, std::shared_ptr<const EgoPolicy> ego_policy,
                        const SimConfig& config = {}, const Registries& reg = {});

/// Bisection on [t_lo, t_hi] for a predicate false at t_lo and true at
/// t_hi, down to a bracket no wider than `tolerance`. Returns the upper end.
/// Throws NoSignChange.
double locate_event(const std::function<bool(double)>& holds, double t_lo,
                    double t_hi, double tolerance);

/// Same, evaluating `condition` on `state_fn(t)`.
double locate_event(const ConditionExpr& condition,
                    const std::function<WorldState(double)>& state_fn,
                    const ActorLayout& layout, double t_lo, double t_hi,
                    double tolerance = 1e-6);

/// Linear interpolation between neighbouring samples; exact at samples.
/// Fired-event and activity flags reflect the trace up to t. Throws
/// OutOfRange.
WorldState state_at(const Trace& trace, double t);

/// Header t,actor_uid,x,y,v,a; time-major, scenario actor order.
void write_trace_csv(const Trace& trace, std::ostream& out);
/// Header event_uid,t; firing order.
void write_events_csv(const Trace& trace, std::ostream& out);

/// Shortest round-trip decimal form.
std::string format_double(double value);

}  // namespace sdm
