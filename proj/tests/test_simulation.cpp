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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "sdm/error.hpp"
#include "sdm/fixtures.hpp"
#include "sdm/policies.hpp"
#include "sdm/simulation.hpp"
#include "support/oracles.hpp"

namespace sdm {
namespace {

using fixtures::quantitative_scenario;
using fixtures::test_scenario;
using fixtures::test_scenario_speed_up;

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::kInvalidArgument;
}

const Trace& quantitative_trace() {
  static const Trace t = simulate(*quantitative_scenario());
  return t;
}

TEST(Simulate, QuantitativeTimeline) {
  const auto& tr = quantitative_trace();
  EXPECT_TRUE(tr.ended);
  EXPECT_NEAR(*tr.event_time("ego stopped"), 4.0, 1e-6);
  EXPECT_NEAR(*tr.event_time("ego starts accelerating"), 7.0, 1e-6);
  EXPECT_NEAR(*tr.event_time("end scenario"), 12.0, 1e-6);
  EXPECT_EQ(*tr.event_time("start scenario"), 0.0);
  EXPECT_EQ(tr.events.front().uid, "start scenario");
  EXPECT_EQ(tr.events.back().uid, "end scenario");
  EXPECT_NEAR(tr.activities.at("ego braking").end.value(), 4.0, 1e-6);
  EXPECT_NEAR(tr.activities.at("ego accelerating").start, 7.0, 1e-6);

  const auto ego = tr.actor_index("ego vehicle");
  const auto stop = state_at(tr, 4.0);
  EXPECT_NEAR(stop.actors[ego].x, -4.0, 1e-6);
  EXPECT_NEAR(stop.actors[ego].v, 0.0, 1e-6);
  const auto end = tr.samples.back();
  EXPECT_NEAR(end.t, 12.0, 1e-6);
  EXPECT_NEAR(end.actors[ego].v, 7.5, 1e-5);
  // 18.75 m covered while accelerating.
  EXPECT_NEAR(end.actors[ego].x, -4.0 + 18.75, 1e-4);
}

TEST(Simulate, BrakingPositionMatchesQuadrature) {
  const auto& tr = quantitative_trace();
  const double expected = -20.0 + testing::simpson(
                                      [](double t) {
                                        return 8.0 - 4.0 * (1 - std::cos(std::numbers::pi * t / 4));
                                      },
                                      0.0, 2.0);
  EXPECT_NEAR(state_at(tr, 2.0).actors[tr.actor_index("ego vehicle")].x, expected, 1e-6);
}

TEST(Simulate, StationaryTraceIsFlat) {
  const auto& tr = quantitative_trace();
  const auto ego = tr.actor_index("ego vehicle");
  for (const auto& s : tr.samples) {
    if (s.t >= 4.0 + 1e-6 && s.t <= 7.0 - 1e-6) {
      ASSERT_NEAR(s.actors[ego].x, -4.0, 1e-6) << s.t;
      ASSERT_NEAR(s.actors[ego].v, 0.0, 1e-9) << s.t;
    }
  }
}

TEST(Simulate, PedestrianReachesLaneCentreAtSix) {
  const auto& tr = quantitative_trace();
  const auto ped = tr.actor_index("pedestrian");
  EXPECT_NEAR(state_at(tr, 6.0).actors[ped].y, 0.0, 1e-9);
  EXPECT_NEAR(state_at(tr, 6.0).actors[ped].x, 0.0, 1e-12);
}

TEST(Simulate, Deterministic) {
  EXPECT_EQ(simulate(*quantitative_scenario()), quantitative_trace());
  const auto p = make_policy("demo-aeb");
  EXPECT_EQ(run_test_scenario(*test_scenario(), p), run_test_scenario(*test_scenario(), p));
}

TEST(LocateEvent, Threshold) {
  const double t = locate_event([](double x) { return x >= 5.0; }, 4.0, 6.0, 1e-9);
  EXPECT_GE(t, 5.0);
  EXPECT_LE(t - 5.0, 1e-9);
  EXPECT_EQ(code_of([] { locate_event([](double) { return true; }, 0.0, 1.0, 1e-6); }),
            Errc::kNoSignChange);
  EXPECT_EQ(code_of([] { locate_event([](double) { return false; }, 0.0, 1.0, 1e-6); }),
            Errc::kNoSignChange);
}

TEST(LocateEvent, ConditionOnStates) {
  const auto s = quantitative_scenario();
  const ActorLayout layout(*s, {});
  const auto cond = parse("t >= 5");
  const auto state_fn = [](double t) {
    WorldState w;
    w.t = t;
    w.actors.resize(2);
    return w;
  };
  EXPECT_NEAR(locate_event(cond, state_fn, layout, 4.99, 5.01), 5.0, 1e-6);
}

TEST(CheckCollision, RectanglesAgainstPointSampling) {
  const auto s = quantitative_scenario();
  const ActorLayout layout(*s, {});
  const Shape car = layout.shape(0);
  const Shape ped = layout.shape(1);
  EXPECT_EQ(car, (Shape{4.5, 1.8}));
  EXPECT_EQ(ped, (Shape{0.5, 0.5}));

  WorldState w;
  w.actors = {ActorState{}, ActorState{}};
  w.actors[1].x = 2.0;
  EXPECT_TRUE(check_collision(w, layout).at({"ego vehicle", "pedestrian"}));
  w.actors[1].x = 2.5;  // edges touch
  EXPECT_FALSE(check_collision(w, layout).at({"ego vehicle", "pedestrian"}));

  // Point sampling over a fine grid of the pedestrian footprint.
  auto sampled = [&](const ActorState& p, const ActorState& q) {
    const int n = 40;
    for (int i = 1; i < n; ++i) {
      for (int j = 1; j < n; ++j) {
        const double x = q.x - ped.length / 2 + ped.length * i / n;
        const double y = q.y - ped.width / 2 + ped.width * j / n;
        if (std::abs(x - p.x) < car.length / 2 && std::abs(y - p.y) < car.width / 2) {
          return true;
        }
      }
    }
    return false;
  };
  for (double dx = -3.0; dx <= 3.0; dx += 0.37) {
    for (double dy = -1.5; dy <= 1.5; dy += 0.23) {
      ActorState q;
      q.x = dx;
      q.y = dy;
      EXPECT_EQ(rectangles_overlap(ActorState{}, car, q, ped), sampled(ActorState{}, q))
          << dx << "," << dy;
    }
  }
}

TEST(CheckCollision, MissingShape) {
  Scenario s = *quantitative_scenario();
  auto ped = std::make_shared<Actor>(*s.actors[1]);
  auto cat = std::make_shared<ActorCategory>(*ped->category);
  cat->actor_type = ActorType::kOther;
  ped->category = cat;
  s.actors[1] = ped;
  const ActorLayout layout(s, {});
  EXPECT_EQ(code_of([&] { layout.shape(1); }), Errc::kMissingShape);
  SimConfig config;
  config.shapes["pedestrian"] = {0.5, 0.5};
  EXPECT_EQ(ActorLayout(s, config).shape(1), (Shape{0.5, 0.5}));
}

TEST(TestScenario, ConstantSpeedCollides) {
  const auto tr = run_test_scenario(*test_scenario(), make_policy("constant-speed"));
  EXPECT_NEAR(*tr.event_time("pedestrian starts walking"), 5.0, 1e-5);
  const auto ego = tr.actor_index("ego test");
  EXPECT_NEAR(state_at(tr, *tr.event_time("pedestrian starts walking")).actors[ego].x, -20.0,
              1e-4);
  ASSERT_TRUE(tr.ended);
  EXPECT_NE(std::find(tr.outcome.begin(), tr.outcome.end(), "collision"), tr.outcome.end());
  // The front bumper meets the pedestrian's near edge at x = -2.5.
  EXPECT_NEAR(*tr.event_time("end test"), 57.5 / 8.0, 1e-5);
}

TEST(TestScenario, DemoAebReachesDestination) {
  const auto tr = run_test_scenario(*test_scenario(), make_policy("demo-aeb"));
  ASSERT_TRUE(tr.ended);
  EXPECT_EQ(std::find(tr.outcome.begin(), tr.outcome.end(), "collision"), tr.outcome.end());
  EXPECT_NE(std::find(tr.outcome.begin(), tr.outcome.end(), "destination"), tr.outcome.end());
  const auto ego = tr.actor_index("ego test");
  EXPECT_GE(tr.samples.back().actors[ego].x, 20.0 - 1e-6);
  const ActorLayout layout(*test_scenario(), {});
  for (const auto& s : tr.samples) {
    WorldState w;
    w.t = s.t;
    w.actors = s.actors;
    ASSERT_FALSE(check_collision(w, layout).begin()->second) << s.t;
  }
}

TEST(TestScenario, DegenerateEndAtStart) {
  Scenario s = *test_scenario();
  auto ego = std::make_shared<Actor>(*s.actors[0]);
  ego->initial_state["x_ego"].value = 25.0;
  s.actors[0] = ego;
  const auto tr = run_test_scenario(s, make_policy("constant-speed"));
  EXPECT_TRUE(tr.ended);
  EXPECT_EQ(*tr.event_time("end test"), 0.0);
  EXPECT_NE(std::find(tr.outcome.begin(), tr.outcome.end(), "destination"), tr.outcome.end());
}

TEST(TestScenario, SpeedUpNoticeMatchesDenseScan) {
  const auto tr = run_test_scenario(*test_scenario_speed_up(), make_policy("constant-speed"));
  const auto noticed = tr.event_time("pedestrian notices ego");
  ASSERT_TRUE(noticed);
  // Under constant speed x_ego = -60 + 8 t and the pedestrian is still short
  // of the lane centre, so the event is |x_ego / v_ego| <= 1.
  const auto scan = testing::dense_scan(
      [](double t) { return std::abs((-60.0 + 8.0 * t) / 8.0) <= 1.0; }, 0.0, 10.0, 1e-5);
  ASSERT_TRUE(scan);
  EXPECT_NEAR(*noticed, *scan, 2e-5);
  EXPECT_NEAR(*noticed, 6.5, 1e-5);
  const auto ped = tr.actor_index("pedestrian test");
  EXPECT_NEAR(state_at(tr, *noticed).actors[ped].y, -1.0, 1e-4);
  EXPECT_NEAR(state_at(tr, *noticed + 0.25).actors[ped].y, -0.5, 1e-4);
}

// demo-aeb stops the ego short of the crossing while the pedestrian is still
// in the kerb half, so the notice condition divides by a zero speed.
TEST(TestScenario, SpeedUpUnderDemoAebHitsDivisionGuard) {
  EXPECT_EQ(code_of([] {
              run_test_scenario(*test_scenario_speed_up(), make_policy("demo-aeb"));
            }),
            Errc::kDivisionGuard);
}

TEST(StateAt, SamplesInterpolationAndRange) {
  const auto& tr = quantitative_trace();
  const auto& s = tr.samples[10];
  EXPECT_EQ(state_at(tr, s.t).actors, s.actors);
  const auto mid = state_at(tr, 0.105);
  const auto ego = tr.actor_index("ego vehicle");
  EXPECT_NEAR(mid.actors[ego].x,
              0.5 * (state_at(tr, 0.10).actors[ego].x + state_at(tr, 0.11).actors[ego].x),
              1e-9);
  EXPECT_TRUE(state_at(tr, 5.0).fired.count("ego stopped"));
  EXPECT_FALSE(state_at(tr, 3.0).fired.count("ego stopped"));
  EXPECT_EQ(code_of([&] { state_at(tr, -0.1); }), Errc::kOutOfRange);
  EXPECT_EQ(code_of([&] { state_at(tr, 12.5); }), Errc::kOutOfRange);
}

// A policy-driven closed loop converges at first order: halving dt roughly
// halves the difference to the next refinement.
TEST(Refinement, DemoAebConvergesUnderDtHalving) {
  const auto p = make_policy("demo-aeb");
  std::vector<Trace> runs;
  for (double dt : {0.01, 0.005, 0.0025}) {
    SimConfig c;
    c.dt = dt;
    c.event_tolerance = 1e-9;
    runs.push_back(run_test_scenario(*test_scenario(), p, c));
  }
  const auto ego = runs[0].actor_index("ego test");
  auto x_at = [&](const Trace& tr, double t) { return state_at(tr, t).actors[ego].x; };
  double e1 = 0.0;
  double e2 = 0.0;
  const double t_end = std::min({runs[0].samples.back().t, runs[1].samples.back().t,
                                 runs[2].samples.back().t});
  for (int k = 0; k * 0.01 <= t_end; ++k) {
    const double t = k * 0.01;
    e1 = std::max(e1, std::abs(x_at(runs[0], t) - x_at(runs[1], t)));
    e2 = std::max(e2, std::abs(x_at(runs[1], t) - x_at(runs[2], t)));
  }
  ASSERT_GT(e2, 0.0);
  EXPECT_GE(e1 / e2, 1.8) << e1 << " " << e2;
}

TEST(Csv, TraceAndEvents) {
  const auto& tr = quantitative_trace();
  std::ostringstream trace;
  write_trace_csv(tr, trace);
  std::istringstream lines(trace.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "t,actor_uid,x,y,v,a");
  std::getline(lines, line);
  EXPECT_EQ(line, "0,ego vehicle,-20,0,8,0");
  std::getline(lines, line);
  EXPECT_EQ(line, "0,pedestrian,0,-6,0,0");  // walking moves y, v is along x
  std::ostringstream events;
  write_events_csv(tr, events);
  EXPECT_EQ(events.str().rfind("event_uid,t\nstart scenario,0\n", 0), 0u) << events.str();
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-20.0), "-20");
}

TEST(Errors, NoGoverningBehaviorAndStart) {
  EXPECT_EQ(code_of([] { simulate(*test_scenario()); }), Errc::kNoGoverningBehavior);
  Scenario s = *quantitative_scenario();
  auto start = make_event("start scenario", "Start scenario", "x_ego >= 0");
  s.start_event = start;
  s.events[0] = start;
  for (auto& a : s.activities) {
    if (a->start_event->uid != start->uid) continue;
    auto copy = std::make_shared<Activity>(*a);
    copy->start_event = start;
    for (auto& act : s.acts) {
      if (act.activity == a) act.activity = copy;
    }
    a = copy;
  }
  ASSERT_TRUE(validate(s).ok()) << validate(s).to_string();
  EXPECT_EQ(code_of([&] { simulate(s); }), Errc::kStartConditionUnsatisfied);
  SimConfig bad;
  bad.dt = 0.0;
  EXPECT_EQ(code_of([&] { simulate(*quantitative_scenario(), bad); }), Errc::kInvalidArgument);
}

}  // namespace
}  // namespace sdm
