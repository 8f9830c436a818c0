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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdm {

/// Parameter values of one activity model, keyed by the model's schema names.
struct ModelParams {
  std::string kind;
  std::map<std::string, double> values;

  double at(const std::string& name) const;
  bool operator==(const ModelParams&) const = default;
};

/// What to do when a model is queried outside its time domain.
enum class DomainPolicy { kError, kClamp };

struct Sample {
  double t = 0.0;
  double z = 0.0;
};

struct FitResult {
  ModelParams params;
  double residual = 0.0;  // RMS error over the samples
};

/// Parametric, autonomous time evolution z(t) of one state variable.
///
/// Implementations provide closed forms for the state, its first two time
/// derivatives, and its time integral. All queries take the parameter set by
/// value-map so one model instance serves every activity of its kind.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string_view name() const = 0;
  virtual const std::vector<std::string>& parameter_schema() const = 0;

  /// Throws ParameterSchemaMismatch when names differ from the schema,
  /// NonFinite for inf/nan values and InvalidArgument for violated
  /// model-specific constraints.
  void check(const ModelParams& params) const;

  virtual double state(const ModelParams& params, double t,
                       DomainPolicy policy = DomainPolicy::kError) const = 0;
  virtual double derivative(const ModelParams& params, double t,
                            DomainPolicy policy = DomainPolicy::kError) const = 0;
  virtual double second_derivative(
      const ModelParams& params, double t,
      DomainPolicy policy = DomainPolicy::kError) const = 0;
  /// Integral of state over [t_a, t_b].
  virtual double displacement(const ModelParams& params, double t_a, double t_b,
                              DomainPolicy policy = DomainPolicy::kError) const = 0;
  /// End of the model's own time domain, when it has one.
  virtual std::optional<double> natural_end(const ModelParams&) const {
    return std::nullopt;
  }
  virtual FitResult fit(std::span<const Sample> samples) const = 0;

 protected:
  virtual void check_constraints(const ModelParams&) const {}
};

/// z(t) = z0 + A/2 (1 - cos(pi (t - t0) / T)),  t in [t0, t0 + T].
class SinusoidalModel final : public Model {
 public:
  std::string_view name() const override { return "Sinusoidal"; }
  const std::vector<std::string>& parameter_schema() const override;
  double state(const ModelParams& p, double t, DomainPolicy policy) const override;
  double derivative(const ModelParams& p, double t,
                    DomainPolicy policy) const override;
  double second_derivative(const ModelParams& p, double t,
                           DomainPolicy policy) const override;
  double displacement(const ModelParams& p, double t_a, double t_b,
                      DomainPolicy policy) const override;
  std::optional<double> natural_end(const ModelParams& p) const override;
  /// Pins t0 to the first sample and T to the sample span, then solves
  /// (A, z0) by linear least squares.
  FitResult fit(std::span<const Sample> samples) const override;

 protected:
  void check_constraints(const ModelParams& p) const override;
};

/// z(t) = z0 + s (t - t0),  t >= t0.
class LinearModel final : public Model {
 public:
  std::string_view name() const override { return "Linear"; }
  const std::vector<std::string>& parameter_schema() const override;
  double state(const ModelParams& p, double t, DomainPolicy policy) const override;
  double derivative(const ModelParams& p, double t,
                    DomainPolicy policy) const override;
  double second_derivative(const ModelParams& p, double t,
                           DomainPolicy policy) const override;
  double displacement(const ModelParams& p, double t_a, double t_b,
                      DomainPolicy policy) const override;
  /// t0 is pinned to the first sample time (t0 and z0 are not jointly
  /// identifiable), slope and intercept by ordinary least squares.
  FitResult fit(std::span<const Sample> samples) const override;
};

/// z(t) = z0.
class ConstantModel final : public Model {
 public:
  std::string_view name() const override { return "Constant"; }
  const std::vector<std::string>& parameter_schema() const override;
  double state(const ModelParams& p, double t, DomainPolicy policy) const override;
  double derivative(const ModelParams& p, double t,
                    DomainPolicy policy) const override;
  double second_derivative(const ModelParams& p, double t,
                           DomainPolicy policy) const override;
  double displacement(const ModelParams& p, double t_a, double t_b,
                      DomainPolicy policy) const override;
  FitResult fit(std::span<const Sample> samples) const override;
};

/// Open registry of model kinds, keyed by Model::name().
class ModelRegistry {
 public:
  /// Throws InvalidArgument when the name is already taken.
  void add(std::shared_ptr<const Model> model);
  bool contains(std::string_view kind) const;
  /// Throws UnknownModel.
  const Model& get(std::string_view kind) const;
  std::vector<std::string> kinds() const;

 private:
  std::map<std::string, std::shared_ptr<const Model>, std::less<>> models_;
};

/// Registry holding Sinusoidal, Linear and Constant.
const ModelRegistry& default_models();

// Convenience wrappers dispatching through default_models().
double state(const ModelParams& params, double t,
             DomainPolicy policy = DomainPolicy::kError);
double derivative(const ModelParams& params, double t,
                  DomainPolicy policy = DomainPolicy::kError);
double displacement(const ModelParams& params, double t_a, double t_b,
                    DomainPolicy policy = DomainPolicy::kError);
/// Requires at least max(2, schema size) samples with strictly increasing,
/// finite times.
FitResult fit(std::string_view kind, std::span<const Sample> samples);

}  // namespace sdm
