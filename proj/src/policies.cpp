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

#include "sdm/policies.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace sdm {

PolicyCommand ConstantSpeedPolicy::command(const WorldState&, const ActorLayout&,
                                           std::size_t, const StateVector&) const {
  return {};
}

PolicyCommand DemoAebPolicy::command(const WorldState& world,
                                     const ActorLayout& layout, std::size_t self,
                                     const StateVector& desired) const {
  const auto& p = params_;
  const ActorState& ego = world.actors.at(self);
  const Shape& own = layout.shape(self);

  double v_target = ego.v;
  const auto want = desired.find("v_" + layout.symbol(self));
  if (want != desired.end()) v_target = want->second.value;
  const double cruise =
      std::clamp(p.gain * (v_target - ego.v), -p.decel, p.max_accel);

  double brake = 0.0;
  for (std::size_t j = 0; j < layout.size(); ++j) {
    if (j == self) continue;
    const ActorState& other = world.actors[j];
    if (other.x <= ego.x) continue;
    const Shape& shape = layout.shape(j);
    const double gap = other.x - ego.x - 0.5 * (own.length + shape.length);
    const double lateral =
        std::fabs(other.y - ego.y) - 0.5 * (own.width + shape.width);
    const double weight =
        std::clamp((p.lateral_margin - lateral) / p.lateral_ramp, 0.0, 1.0);
    const double predicted = gap - ego.v * p.horizon;
    const double level =
        std::clamp((p.threshold - predicted) / p.brake_ramp, 0.0, 1.0);
    brake = std::max(brake, weight * level);
  }
  return {(1.0 - brake) * cruise - brake * p.decel, 0.0};
}

std::map<std::string, double> parse_policy_args(std::string_view text) {
  std::map<std::string, double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{}
                                           : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    double value = 0.0;
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(Errc::kInvalidArgument,
                  "policy argument '" + std::string(item) + "' is not k=v");
    }
    const auto number = item.substr(eq + 1);
    const auto [ptr, ec] =
        std::from_chars(number.data(), number.data() + number.size(), value);
    if (ec != std::errc() || ptr != number.data() + number.size() ||
        !std::isfinite(value)) {
      throw Error(Errc::kInvalidArgument,
                  "policy argument '" + std::string(item) + "' has no numeric value");
    }
    out[std::string(item.substr(0, eq))] = value;
  }
  return out;
}

std::shared_ptr<const EgoPolicy> make_policy(
    std::string_view name, const std::map<std::string, double>& args) {
  if (name == "constant-speed") {
    if (!args.empty()) {
      throw Error(Errc::kInvalidArgument, "constant-speed takes no arguments");
    }
    return std::make_shared<ConstantSpeedPolicy>();
  }
  if (name == "demo-aeb") {
    AebParams p;
    const std::map<std::string, double AebParams::*> fields = {
        {"decel", &AebParams::decel},
        {"threshold", &AebParams::threshold},
        {"horizon", &AebParams::horizon},
        {"brake_ramp", &AebParams::brake_ramp},
        {"gain", &AebParams::gain},
        {"max_accel", &AebParams::max_accel},
        {"lateral_margin", &AebParams::lateral_margin},
        {"lateral_ramp", &AebParams::lateral_ramp}};
    for (const auto& [key, value] : args) {
      const auto it = fields.find(key);
      if (it == fields.end()) {
        throw Error(Errc::kInvalidArgument, "demo-aeb has no argument '" + key + "'");
      }
      p.*(it->second) = value;
    }
    if (!(p.decel > 0) || !(p.brake_ramp > 0) || !(p.lateral_ramp > 0) ||
        !(p.horizon >= 0) || !(p.max_accel >= 0) || !(p.gain >= 0)) {
      throw Error(Errc::kInvalidArgument, "demo-aeb arguments out of range");
    }
    return std::make_shared<DemoAebPolicy>(p);
  }
  throw Error(Errc::kInvalidArgument, "unknown policy '" + std::string(name) +
                                          "' (expected constant-speed or demo-aeb)");
}

}  // namespace sdm
