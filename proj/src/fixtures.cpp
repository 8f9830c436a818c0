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

#include "sdm/fixtures.hpp"

namespace sdm::fixtures {
namespace {

template <typename T>
std::shared_ptr<T> named(std::string uid, std::string name,
                         std::vector<std::string> tags = {}) {
  auto out = std::make_shared<T>();
  out->uid = std::move(uid);
  out->name = std::move(name);
  out->tags = std::move(tags);
  return out;
}

ActivityCategoryPtr activity_category(std::string uid, std::string name,
                                      std::string description,
                                      std::string variable, std::string model,
                                      std::vector<std::string> tags) {
  auto c = named<ActivityCategory>(std::move(uid), std::move(name), std::move(tags));
  c->description = std::move(description);
  c->state_variables = {std::move(variable)};
  c->model = std::move(model);
  return c;
}

ActivityPtr activity(std::string uid, std::string name, ActivityCategoryPtr category,
                     std::map<std::string, double> parameters, EventPtr start,
                     EventPtr end) {
  auto a = named<Activity>(std::move(uid), std::move(name));
  a->category = std::move(category);
  a->parameters = std::move(parameters);
  a->start_event = std::move(start);
  a->end_event = std::move(end);
  return a;
}

struct Qualitative {
  PhysicalElementCategoryPtr crossing;
  ActorCategoryPtr ego;
  ActorCategoryPtr pedestrian;
  ActivityCategoryPtr braking;
  ActivityCategoryPtr stationary;
  ActivityCategoryPtr accelerating;
  ActivityCategoryPtr walking;
};

const Qualitative& qualitative() {
  static const Qualitative q = [] {
    Qualitative out;
    auto crossing = named<PhysicalElementCategory>(
        "pedestrian crossing qualitative", "Pedestrian crossing qualitative");
    crossing->description =
        "Straight road with a non-signalized pedestrian crossing where the "
        "pedestrian has priority";
    out.crossing = crossing;

    auto ego = named<ActorCategory>("ego qualitative", "Ego qualitative",
                                    {std::string(kEgoVehicleTag)});
    ego->description = "Passenger car under test";
    ego->actor_type = ActorType::kVehicle;
    out.ego = ego;

    auto pedestrian =
        named<ActorCategory>("pedestrian qualitative", "Pedestrian qualitative");
    pedestrian->description = "Pedestrian approaching the crossing";
    pedestrian->actor_type = ActorType::kPedestrian;
    out.pedestrian = pedestrian;

    out.braking = activity_category("braking", "Braking",
                                    "Ego vehicle slows down to a standstill", "v",
                                    "Sinusoidal", {"Decelerating"});
    out.stationary = activity_category("stationary", "Stationary",
                                       "Ego vehicle waits in front of the crossing",
                                       "v", "Constant", {"Standing still"});
    out.accelerating =
        activity_category("accelerating", "Accelerating",
                          "Ego vehicle drives off after the pedestrian passed",
                          "v", "Linear", {"Accelerating"});
    out.walking = activity_category("walking straight", "Walking straight",
                                    "Pedestrian crosses the road at constant speed",
                                    "y", "Linear", {});
    return out;
  }();
  return q;
}

struct Quantitative {
  PhysicalElementPtr crossing;
  EventPtr start;
  ScenarioPtr scenario;
};

const Quantitative& quantitative() {
  static const Quantitative q = [] {
    const auto& cat = qualitative();
    Quantitative out;
    auto crossing = named<PhysicalElement>("pedestrian crossing", "Pedestrian crossing");
    crossing->category = cat.crossing;
    crossing->properties = {
        {"lane_width", {3.5, "m"}},
        {"number_of_lanes", {1.0, ""}},
        {"crossing_width", {4.0, "m"}},
        {"road_layout", {std::string("straight"), ""}}};
    out.crossing = crossing;

    auto ego = named<Actor>("ego vehicle", "Ego vehicle");
    ego->category = cat.ego;
    ego->initial_state = {{"x_ego", {-20.0, "m"}},
                          {"y_ego", {0.0, "m"}},
                          {"v_ego", {8.0, "m/s"}}};
    auto pedestrian = named<Actor>("pedestrian", "Pedestrian");
    pedestrian->category = cat.pedestrian;
    pedestrian->initial_state = {{"x_ped", {0.0, "m"}}, {"y_ped", {-6.0, "m"}}};

    out.start = make_event("start scenario", "Start scenario", "t >= 0");
    auto stopped =
        make_event("ego stopped", "Ego stopped", "linked(\"ego braking\", end)");
    auto go = make_event("ego starts accelerating", "Ego starts accelerating",
                         "y_ped >= 1");
    auto end = make_event("end scenario", "End scenario",
                          "v_ego >= 7.5 && linked(\"ego accelerating\", start)");

    auto braking = activity("ego braking", "Ego braking", cat.braking,
                            {{"A", -8.0}, {"T", 4.0}, {"t0", 0.0}, {"z0", 8.0}},
                            out.start, stopped);
    auto waiting = activity("ego stationary", "Ego stationary", cat.stationary,
                            {{"z0", 0.0}}, stopped, go);
    auto accelerating = activity("ego accelerating", "Ego accelerating",
                                 cat.accelerating,
                                 {{"s", 1.5}, {"t0", 7.0}, {"z0", 0.0}}, go, end);
    auto walking = activity("pedestrian walking", "Pedestrian walking", cat.walking,
                            {{"s", 1.0}, {"t0", 0.0}, {"z0", -6.0}}, out.start, end);

    Scenario s;
    s.uid = "pedestrian crossing scenario";
    s.name = "Pedestrian crossing";
    s.start_event = out.start;
    s.end_event = end;
    s.physical_elements = {crossing};
    s.actors = {ego, pedestrian};
    s.activities = {braking, waiting, accelerating, walking};
    s.events = {out.start, stopped, go, end};
    s.acts = {{ego, braking}, {ego, waiting}, {ego, accelerating},
              {pedestrian, walking}};
    out.scenario = build_scenario(std::move(s));
    return out;
  }();
  return q;
}

struct TestParts {
  ActorPtr ego;
  ActorPtr pedestrian;
  EventPtr trigger;
  EventPtr end;
};

const TestParts& test_parts() {
  static const TestParts t = [] {
    const auto& cat = qualitative();
    TestParts out;
    auto ego = named<Actor>("ego test", "Ego vehicle under test");
    ego->category = cat.ego;
    ego->initial_state = {{"x_ego", {-60.0, "m"}},
                          {"y_ego", {0.0, "m"}},
                          {"v_ego", {8.0, "m/s"}}};
    ego->desired_state = StateVector{{"x_ego", {20.0, "m"}}, {"v_ego", {8.0, "m/s"}}};
    out.ego = ego;
    auto pedestrian = named<Actor>("pedestrian test", "Pedestrian near the kerb");
    pedestrian->category = cat.pedestrian;
    pedestrian->initial_state = {{"x_ped", {0.0, "m"}}, {"y_ped", {-2.5, "m"}}};
    out.pedestrian = pedestrian;
    out.trigger = make_event("pedestrian starts walking", "Pedestrian starts walking",
                             "x_ego / v_ego >= -2.5 && x_ego / v_ego <= 0");
    out.end = make_event(
        "end test", "End test",
        "x_ego >= 20 || collision(ego, ped) || y_ego <= -2 || y_ego >= 1 || t > 100");
    return out;
  }();
  return t;
}

ScenarioPtr test_with(std::string uid, std::string name,
                      std::vector<ActivityPtr> walking,
                      std::vector<EventPtr> extra_events) {
  const auto& parts = test_parts();
  Scenario s;
  s.uid = std::move(uid);
  s.name = std::move(name);
  s.start_event = quantitative().start;
  s.end_event = parts.end;
  s.physical_elements = {quantitative().crossing};
  s.actors = {parts.ego, parts.pedestrian};
  s.activities = walking;
  s.events = {quantitative().start, parts.trigger};
  s.events.insert(s.events.end(), extra_events.begin(), extra_events.end());
  s.events.push_back(parts.end);
  for (const auto& a : walking) s.acts.push_back({parts.pedestrian, a});
  return build_scenario(std::move(s));
}

}  // namespace

ScenarioCategoryPtr pedestrian_crossing_category() {
  static const ScenarioCategoryPtr c = [] {
    const auto& q = qualitative();
    ScenarioCategory c;
    c.uid = "pedestrian crossing category";
    c.name = "Pedestrian crossing";
    c.description =
        "Ego vehicle and pedestrian approach a pedestrian crossing; the ego "
        "vehicle stops, waits until the pedestrian has crossed and drives off";
    c.physical_element_categories = {q.crossing};
    c.actor_categories = {q.ego, q.pedestrian};
    c.activity_categories = {q.braking, q.stationary, q.accelerating, q.walking};
    c.acts = {{q.ego, q.braking},
              {q.ego, q.stationary},
              {q.ego, q.accelerating},
              {q.pedestrian, q.walking}};
    return build_category(std::move(c));
  }();
  return c;
}

ScenarioCategoryPtr test_category() {
  static const ScenarioCategoryPtr c = [] {
    const auto& q = qualitative();
    ScenarioCategory c;
    c.uid = "pedestrian crossing test category";
    c.name = "Pedestrian crossing test";
    c.description =
        "Ego vehicle approaches a pedestrian crossing while a pedestrian "
        "starts to cross; the ego behaviour is left to the system under test";
    c.physical_element_categories = {q.crossing};
    c.actor_categories = {q.ego, q.pedestrian};
    c.activity_categories = {q.walking};
    c.acts = {{q.pedestrian, q.walking}};
    return build_category(std::move(c));
  }();
  return c;
}

ScenarioPtr quantitative_scenario() { return quantitative().scenario; }

ScenarioPtr test_scenario() {
  static const ScenarioPtr s = [] {
    const auto& parts = test_parts();
    auto walking = activity("pedestrian walking test", "Pedestrian walking",
                            qualitative().walking,
                            {{"s", 1.0}, {"t0", 5.0}, {"z0", -2.5}}, parts.trigger,
                            parts.end);
    return test_with("pedestrian crossing test", "Pedestrian crossing test",
                     {walking}, {});
  }();
  return s;
}

ScenarioPtr test_scenario_speed_up() {
  static const ScenarioPtr s = [] {
    const auto& parts = test_parts();
    // Short-circuit order keeps the division out of reach once the
    // pedestrian has reached the ego lane centre.
    auto notices = make_event("pedestrian notices ego", "Pedestrian notices ego",
                              "y_ped < 0 && abs(x_ego / v_ego) <= 1");
    auto walking = activity("pedestrian walking until noticed", "Pedestrian walking",
                            qualitative().walking,
                            {{"s", 1.0}, {"t0", 5.0}, {"z0", -2.5}}, parts.trigger,
                            notices);
    auto faster = activity("pedestrian speeding up", "Pedestrian speeding up",
                           qualitative().walking,
                           {{"s", 2.0}, {"t0", 6.5}, {"z0", -1.0}}, notices,
                           parts.end);
    return test_with("pedestrian crossing test speed-up",
                     "Pedestrian crossing test with speed-up", {walking, faster},
                     {notices});
  }();
  return s;
}

}  // namespace sdm::fixtures
