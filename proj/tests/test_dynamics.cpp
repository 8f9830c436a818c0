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

#include "sdm/dynamics.hpp"
#include "sdm/error.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace sdm {
namespace {

using std::numbers::pi;
using testing::Rng;

ModelParams braking() {
  return {"Sinusoidal", {{"A", -8.0}, {"T", 4.0}, {"t0", 0.0}, {"z0", 8.0}}};
}
ModelParams accelerating() { return {"Linear", {{"s", 1.5}, {"t0", 7.0}, {"z0", 0.0}}}; }
ModelParams standing() { return {"Constant", {{"z0", 0.0}}}; }

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::kInvalidArgument;
}

TEST(State, BrakingStopsAfterFourSeconds) {
  EXPECT_NEAR(state(braking(), 4.0), 0.0, 1e-12);
  EXPECT_NEAR(state(braking(), 2.0), 4.0, 1e-12);
  EXPECT_EQ(state(braking(), 0.0), 8.0);
}

TEST(State, BrakingAtMidpointMatchesRk4) {
  const double A = -8.0;
  const double T = 4.0;
  const double z = testing::rk4(
      [&](double t, double) { return pi * A / (2 * T) * std::sin(pi * t / T); }, 0.0,
      8.0, 2.0);
  EXPECT_NEAR(z, 4.0, 1e-6);
  EXPECT_NEAR(state(braking(), 2.0), z, 1e-6);
}

TEST(State, LinearReachesCruiseSpeed) { EXPECT_DOUBLE_EQ(state(accelerating(), 12.0), 7.5); }

TEST(State, OutOfDomainByDefaultAndClampOnRequest) {
  EXPECT_EQ(code_of([] { state(braking(), -0.1); }), Errc::kOutOfDomain);
  EXPECT_EQ(code_of([] { state(braking(), 4.1); }), Errc::kOutOfDomain);
  EXPECT_EQ(code_of([] { state(accelerating(), 6.0); }), Errc::kOutOfDomain);
  EXPECT_NEAR(state(braking(), 5.0, DomainPolicy::kClamp), 0.0, 1e-12);
  EXPECT_EQ(state(accelerating(), 6.0, DomainPolicy::kClamp), 0.0);
  EXPECT_EQ(state(standing(), -100.0), 0.0);
}

TEST(Derivative, BrakingProfile) {
  EXPECT_NEAR(derivative(braking(), 0.0), 0.0, 1e-12);
  EXPECT_NEAR(derivative(braking(), 4.0), 0.0, 1e-12);
  EXPECT_NEAR(derivative(braking(), 2.0), -pi, 1e-12);
  const double fd = testing::central_difference(
      [](double t) { return state(braking(), t); }, 2.0);
  EXPECT_NEAR(fd, -pi, 1e-5);
  EXPECT_EQ(derivative(standing(), 3.0), 0.0);
  EXPECT_EQ(derivative(accelerating(), 9.0), 1.5);
}

TEST(Displacement, CrossingExamples) {
  EXPECT_NEAR(displacement(braking(), 0.0, 4.0), 16.0, 1e-12);
  EXPECT_EQ(displacement(standing(), 4.0, 7.0), 0.0);
  EXPECT_NEAR(displacement(accelerating(), 7.0, 12.0), 18.75, 1e-12);
  const double quad = testing::simpson(
      [](double t) { return state(accelerating(), t); }, 7.0, 12.0);
  EXPECT_NEAR(quad, 18.75, 1e-6);
}

TEST(Displacement, ReversedIntervalIsOutOfDomain) {
  EXPECT_EQ(code_of([] { displacement(braking(), 3.0, 1.0); }), Errc::kOutOfDomain);
}

TEST(Check, SchemaAndConstraints) {
  const auto& sin = default_models().get("Sinusoidal");
  EXPECT_EQ(code_of([&] { sin.check({"Sinusoidal", {{"A", 1.0}, {"T", 2.0}}}); }),
            Errc::kParameterSchemaMismatch);
  auto p = braking();
  p.values["T"] = 0.0;
  EXPECT_EQ(code_of([&] { sin.check(p); }), Errc::kInvalidArgument);
  p.values["T"] = NAN;
  EXPECT_EQ(code_of([&] { sin.check(p); }), Errc::kNonFinite);
  auto extra = accelerating();
  extra.values["A"] = 1.0;
  EXPECT_EQ(code_of([&] { default_models().get("Linear").check(extra); }),
            Errc::kParameterSchemaMismatch);
  EXPECT_EQ(code_of([] { default_models().get("Spline"); }), Errc::kUnknownModel);
}

TEST(Registry, OpenForExtension) {
  ModelRegistry r;
  r.add(std::make_shared<ConstantModel>());
  EXPECT_TRUE(r.contains("Constant"));
  EXPECT_FALSE(r.contains("Linear"));
  EXPECT_THROW(r.add(std::make_shared<ConstantModel>()), Error);
  EXPECT_EQ(default_models().kinds(),
            (std::vector<std::string>{"Constant", "Linear", "Sinusoidal"}));
}

TEST(Fit, LinearExactRecovery) {
  std::vector<Sample> samples;
  for (int i = 0; i <= 10; ++i) {
    const double t = 7.0 + 0.5 * i;
    samples.push_back({t, state(accelerating(), t)});
  }
  const auto r = fit("Linear", samples);
  EXPECT_NEAR(r.params.at("s"), 1.5, 1e-9);
  EXPECT_NEAR(r.params.at("z0"), 0.0, 1e-9);
  EXPECT_EQ(r.params.at("t0"), 7.0);
  EXPECT_NEAR(r.residual, 0.0, 1e-9);
}

TEST(Fit, ConstantSymmetricNoise) {
  std::vector<Sample> samples = {{0, 5.0}, {1, 5.1}, {2, 4.9}, {3, 5.0}};
  const auto r = fit("Constant", samples);
  EXPECT_NEAR(r.params.at("z0"), 5.0, 1e-12);
  EXPECT_GT(r.residual, 0.0);
}

TEST(Fit, BrakingProfile) {
  std::vector<Sample> samples;
  for (int i = 0; i <= 40; ++i) {
    samples.push_back({0.1 * i, state(braking(), 0.1 * i, DomainPolicy::kClamp)});
  }
  const auto r = fit("Sinusoidal", samples);
  EXPECT_NEAR(r.params.at("A"), -8.0, 1e-6);
  EXPECT_NEAR(r.params.at("z0"), 8.0, 1e-6);
  EXPECT_NEAR(r.params.at("T"), 4.0, 1e-9);
}

TEST(Fit, Errors) {
  std::vector<Sample> same = {{1, 0}, {1, 1}, {1, 2}};
  EXPECT_EQ(code_of([&] { fit("Linear", same); }), Errc::kDegenerateSamples);
  std::vector<Sample> one = {{1, 0}};
  EXPECT_EQ(code_of([&] { fit("Constant", one); }), Errc::kInsufficientSamples);
  std::vector<Sample> bad = {{0, 0}, {1, INFINITY}};
  EXPECT_EQ(code_of([&] { fit("Linear", bad); }), Errc::kNonFinite);
  std::vector<Sample> unordered = {{0, 0}, {2, 1}, {1, 2}};
  EXPECT_EQ(code_of([&] { fit("Linear", unordered); }), Errc::kDegenerateSamples);
}

// --- Properties against numeric oracles ------------------------------------------

class ModelOracle : public ::testing::TestWithParam<std::string> {};

TEST_P(ModelOracle, ClosedFormsMatchNumericOracles) {
  Rng rng(2024 + GetParam().size());
  const auto& model = default_models().get(GetParam());
  for (int draw = 0; draw < 1000; ++draw) {
    const auto p = testing::random_model_params(rng, GetParam());
    const double lo = testing::domain_start(p);
    const double hi = testing::domain_end(p);
    const double t = rng.uniform(lo, hi);
    const auto rate = testing::reference_rate(p);
    const auto f = [&](double tau, double) { return rate(tau); };
    // RK4 on z' = f(t) from (t0, z0).
    ASSERT_NEAR(model.state(p, t), testing::rk4(f, lo, model.state(p, lo), t), 1e-6)
        << "draw " << draw;
    // Quadrature of the state.
    const double a = rng.uniform(lo, t);
    ASSERT_NEAR(model.displacement(p, a, t),
                testing::simpson([&](double s) { return model.state(p, s); }, a, t),
                1e-6)
        << "draw " << draw;
    // Central difference, kept inside the domain.
    const double h = 1e-6;
    const double tc = std::clamp(t, lo + 2 * h, hi - 2 * h);
    ASSERT_NEAR(model.derivative(p, tc),
                testing::central_difference([&](double s) { return model.state(p, s); },
                                            tc, h),
                1e-5)
        << "draw " << draw;
    ASSERT_NEAR(model.second_derivative(p, tc),
                testing::central_difference(
                    [&](double s) { return model.derivative(p, s); }, tc, 1e-5),
                1e-4)
        << "draw " << draw;
    // Additivity of displacement over a random split point.
    const double mid = rng.uniform(a, t);
    ASSERT_NEAR(model.displacement(p, a, mid) + model.displacement(p, mid, t),
                model.displacement(p, a, t), 1e-9 * (1 + std::abs(model.displacement(p, a, t))));
    ASSERT_EQ(model.state(p, lo), p.at("z0"));
  }
}

TEST_P(ModelOracle, FitRecoversGeneratingParameters) {
  Rng rng(77 + GetParam().size());
  const auto& model = default_models().get(GetParam());
  for (int draw = 0; draw < 200; ++draw) {
    const auto p = testing::random_model_params(rng, GetParam());
    const double lo = testing::domain_start(p);
    const double hi = testing::domain_end(p);
    std::vector<Sample> samples;
    for (int i = 0; i <= 20; ++i) {
      const double t = lo + (hi - lo) * i / 20.0;
      samples.push_back({t, model.state(p, t, DomainPolicy::kClamp)});
    }
    const auto r = model.fit(samples);
    ASSERT_LT(r.residual, 1e-6) << "draw " << draw;
    for (const auto& [name, value] : p.values) {
      ASSERT_NEAR(r.params.at(name), value, 1e-6 * (1 + std::abs(value)))
          << name << " draw " << draw;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllKinds, ModelOracle,
                         ::testing::Values("Sinusoidal", "Linear", "Constant"));

TEST(SinusoidalProperty, EndpointIsZ0PlusA) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto p = testing::random_model_params(rng, "Sinusoidal");
    EXPECT_NEAR(state(p, p.at("t0") + p.at("T")), p.at("z0") + p.at("A"),
                1e-12 * (1 + std::abs(p.at("z0")) + std::abs(p.at("A"))));
  }
}

}  // namespace
}  // namespace sdm
