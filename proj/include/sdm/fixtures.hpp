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

#include "sdm/elements.hpp"

namespace sdm::fixtures {

// Builders for the pedestrian-crossing example. Objects with the same uid
// are the same instance across builders, so the test scenario shares the
// qualitative categories, the crossing and the start event with the
// quantitative scenario.

/// Ego vehicle braking, stationary and accelerating; pedestrian walking.
ScenarioCategoryPtr pedestrian_crossing_category();
/// Same category without activity categories for the ego vehicle.
ScenarioCategoryPtr test_category();

/// Ego starts at x = -20 m with 8 m/s, brakes to a stop in 4 s, waits 3 s and
/// accelerates at 1.5 m/s^2 to 7.5 m/s; the pedestrian walks from y = -6 m
/// at 1 m/s.
ScenarioPtr quantitative_scenario();
/// Goal-driven ego from x = -60 m at 8 m/s towards x = 20 m; the pedestrian
/// starts walking when the ego is 2.5 s from the crossing.
ScenarioPtr test_scenario();
/// test_scenario() plus a faster (2 m/s) walk once the ego is within 1 s.
ScenarioPtr test_scenario_speed_up();

/// Fixture file names, relative to the fixture directory.
inline constexpr const char* kTagTreesFile = "tag_trees.scn.json";
inline constexpr const char* kCategoryFile = "pedestrian_crossing_qualitative.scn.json";
inline constexpr const char* kQuantitativeFile =
    "pedestrian_crossing_quantitative.scn.json";
inline constexpr const char* kTestCategoryFile =
    "pedestrian_crossing_test_category.scn.json";
inline constexpr const char* kTestFile = "pedestrian_crossing_test.scn.json";
inline constexpr const char* kSpeedUpFile =
    "pedestrian_crossing_test_speed_up.scn.json";

}  // namespace sdm::fixtures
