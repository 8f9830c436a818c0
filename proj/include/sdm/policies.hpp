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
#include <string>
#include <string_view>

#include "sdm/simulation.hpp"

namespace sdm {

/// Keeps the current speed: zero acceleration, no lateral motion.
class ConstantSpeedPolicy final : public EgoPolicy {
 public:
  PolicyCommand command(const WorldState& world, const ActorLayout& layout,
                        std::size_t self, const StateVector& desired) const override;
};

struct AebParams {
  double decel = 6.0;          // full braking, m/s^2
  double threshold = 10.0;     // predicted gap that starts braking, m
  double horizon = 1.0;        // gap prediction horizon, s
  double brake_ramp = 1.0;     // gap span over which braking ramps to full, m
  double gain = 1.0;           // speed tracking gain, 1/s
  double max_accel = 2.0;      // m/s^2
  double lateral_margin = 1.0; // lateral clearance below which objects count, m
  double lateral_ramp = 0.5;   // m
};

/// Demonstration emergency-braking controller. Tracks the desired speed and
/// blends in full braking as the predicted bumper gap to an object ahead
/// falls below the threshold. Every term is a continuous ramp, so the
/// closed loop converges at first order under dt refinement.
class DemoAebPolicy final : public EgoPolicy {
 public:
  explicit DemoAebPolicy(AebParams params = {}) : params_(params) {}

  PolicyCommand command(const WorldState& world, const ActorLayout& layout,
                        std::size_t self, const StateVector& desired) const override;
  const AebParams& params() const { return params_; }

 private:
  AebParams params_;
};

/// "k=v,k2=v2" -> map. Throws InvalidArgument.
std::map<std::string, double> parse_policy_args(std::string_view text);

/// "constant-speed" or "demo-aeb" (keys named as the AebParams fields).
/// Throws InvalidArgument for unknown names or keys.
std::shared_ptr<const EgoPolicy> make_policy(
    std::string_view name, const std::map<std::string, double>& args = {});

}  // namespace sdm
