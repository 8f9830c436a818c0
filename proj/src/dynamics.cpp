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

#include "sdm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sdm/error.hpp"

namespace sdm {
namespace {

using std::numbers::pi;
constexpr double kForever = std::numeric_limits<double>::infinity();

[[noreturn]] void out_of_domain(std::string_view model, double t, double lo,
                                double hi) {
  std::ostringstream msg;
  msg << model << ": t=" << t << " outside [" << lo << ", " << hi << "]";
  throw Error(Errc::kOutOfDomain, msg.str());
}

// Maps t into [lo, hi] according to the policy.
double domain_time(std::string_view model, double t, double lo, double hi,
                   DomainPolicy policy) {
  if (t >= lo && t <= hi) return t;
  if (policy == DomainPolicy::kError) out_of_domain(model, t, lo, hi);
  return std::clamp(t, lo, hi);
}

void check_interval(std::string_view model, double t_a, double t_b) {
  if (!(t_a <= t_b)) {
    std::ostringstream msg;
    msg << model << ": displacement interval [" << t_a << ", " << t_b
        << "] is reversed";
    throw Error(Errc::kOutOfDomain, msg.str());
  }
}

void check_samples(std::span<const Sample> samples, std::size_t minimum) {
  for (const auto& s : samples) {
    if (!std::isfinite(s.t) || !std::isfinite(s.z)) {
      throw Error(Errc::kNonFinite, "fit: non-finite sample");
    }
  }
  if (samples.size() < minimum) {
    throw Error(Errc::kInsufficientSamples,
                "fit: need at least " + std::to_string(minimum) + " samples");
  }
  if (samples.front().t == samples.back().t) {
    throw Error(Errc::kDegenerateSamples, "fit: all sample times are equal");
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t)) {
      throw Error(Errc::kDegenerateSamples,
                  "fit: sample times must be strictly increasing");
    }
  }
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

// Least-squares z = intercept + slope * u.
LineFit fit_line(std::span<const double> u, std::span<const Sample> samples) {
  const double n = static_cast<double>(samples.size());
  double u_mean = 0.0;
  double z_mean = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    u_mean += u[i];
    z_mean += samples[i].z;
  }
  u_mean /= n;
  z_mean /= n;
  double sxx = 0.0;
  double sxz = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    sxx += (u[i] - u_mean) * (u[i] - u_mean);
    sxz += (u[i] - u_mean) * (samples[i].z - z_mean);
  }
  if (sxx == 0.0) {
    throw Error(Errc::kDegenerateSamples, "fit: regressor has no spread");
  }
  const double slope = sxz / sxx;
  return {z_mean - slope * u_mean, slope};
}

double rms_residual(const Model& model, const ModelParams& params,
                    std::span<const Sample> samples) {
  double sum = 0.0;
  for (const auto& s : samples) {
    const double e = model.state(params, s.t, DomainPolicy::kClamp) - s.z;
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(samples.size()));
}

}  // namespace

double ModelParams::at(const std::string& name) const {
  const auto it = values.find(name);
  if (it == values.end()) {
    throw Error(Errc::kParameterSchemaMismatch,
                kind + ": missing parameter '" + name + "'");
  }
  return it->second;
}

void Model::check(const ModelParams& params) const {
  const auto& schema = parameter_schema();
  std::vector<std::string> missing;
  for (const auto& name : schema) {
    if (!params.values.count(name)) missing.push_back(name);
  }
  std::vector<std::string> extra;
  for (const auto& [name, _] : params.values) {
    if (std::find(schema.begin(), schema.end(), name) == schema.end()) {
      extra.push_back(name);
    }
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg(name());
    msg += ": parameters do not match schema";
    if (!missing.empty()) {
      msg += "; missing";
      for (const auto& m : missing) msg += " " + m;
    }
    if (!extra.empty()) {
      msg += "; unexpected";
      for (const auto& e : extra) msg += " " + e;
    }
    throw Error(Errc::kParameterSchemaMismatch, msg);
  }
  for (const auto& [key, value] : params.values) {
    if (!std::isfinite(value)) {
      throw Error(Errc::kNonFinite,
                  std::string(name()) + ": parameter " + key + " not finite");
    }
  }
  check_constraints(params);
}

// --- Sinusoidal -------------------------------------------------------------

const std::vector<std::string>& SinusoidalModel::parameter_schema() const {
  static const std::vector<std::string> schema{"A", "T", "t0", "z0"};
  return schema;
}

void SinusoidalModel::check_constraints(const ModelParams& p) const {
  if (!(p.at("T") > 0.0)) {
    throw Error(Errc::kInvalidArgument, "Sinusoidal: duration T must be > 0");
  }
}

double SinusoidalModel::state(const ModelParams& p, double t,
                              DomainPolicy policy) const {
  const double amplitude = p.at("A");
  const double duration = p.at("T");
  const double t0 = p.at("t0");
  t = domain_time(name(), t, t0, t0 + duration, policy);
  return p.at("z0") + 0.5 * amplitude * (1.0 - std::cos(pi * (t - t0) / duration));
}

double SinusoidalModel::derivative(const ModelParams& p, double t,
                                   DomainPolicy policy) const {
  const double amplitude = p.at("A");
  const double duration = p.at("T");
  const double t0 = p.at("t0");
  const double tt = domain_time(name(), t, t0, t0 + duration, policy);
  if (tt != t) return 0.0;  // clamped: held at an endpoint
  return pi * amplitude / (2.0 * duration) * std::sin(pi * (t - t0) / duration);
}

double SinusoidalModel::second_derivative(const ModelParams& p, double t,
                                          DomainPolicy policy) const {
  const double amplitude = p.at("A");
  const double duration = p.at("T");
  const double t0 = p.at("t0");
  const double tt = domain_time(name(), t, t0, t0 + duration, policy);
  if (tt != t) return 0.0;
  return pi * pi * amplitude / (2.0 * duration * duration) *
         std::cos(pi * (t - t0) / duration);
}

double SinusoidalModel::displacement(const ModelParams& p, double t_a,
                                     double t_b, DomainPolicy policy) const {
  check_interval(name(), t_a, t_b);
  const double amplitude = p.at("A");
  const double duration = p.at("T");
  const double t0 = p.at("t0");
  const double z0 = p.at("z0");
  const double t_end = t0 + duration;
  if (policy == DomainPolicy::kError) {
    domain_time(name(), t_a, t0, t_end, policy);
    domain_time(name(), t_b, t0, t_end, policy);
  }
  // Clamped state is z0 before t0 and z0 + A after t0 + T.
  const double lo = std::clamp(t_a, t0, t_end);
  const double hi = std::clamp(t_b, t0, t_end);
  const double before = z0 * (std::min(t_b, t0) - std::min(t_a, t0));
  const double after =
      (z0 + amplitude) * (std::max(t_b, t_end) - std::max(t_a, t_end));
  const double inside =
      (z0 + 0.5 * amplitude) * (hi - lo) -
      amplitude * duration / (2.0 * pi) *
          (std::sin(pi * (hi - t0) / duration) -
           std::sin(pi * (lo - t0) / duration));
  return before + inside + after;
}

std::optional<double> SinusoidalModel::natural_end(const ModelParams& p) const {
  return p.at("t0") + p.at("T");
}

FitResult SinusoidalModel::fit(std::span<const Sample> samples) const {
  check_samples(samples, std::max<std::size_t>(2, parameter_schema().size()));
  const double t0 = samples.front().t;
  const double duration = samples.back().t - t0;
  std::vector<double> basis;
  basis.reserve(samples.size());
  for (const auto& s : samples) {
    basis.push_back(0.5 * (1.0 - std::cos(pi * (s.t - t0) / duration)));
  }
  const auto line = fit_line(basis, samples);
  FitResult out;
  out.params = {std::string(name()),
                {{"A", line.slope}, {"T", duration}, {"t0", t0},
                 {"z0", line.intercept}}};
  out.residual = rms_residual(*this, out.params, samples);
  return out;
}

// --- Linear -----------------------------------------------------------------

const std::vector<std::string>& LinearModel::parameter_schema() const {
  static const std::vector<std::string> schema{"s", "t0", "z0"};
  return schema;
}

double LinearModel::state(const ModelParams& p, double t,
                          DomainPolicy policy) const {
  const double t0 = p.at("t0");
  t = domain_time(name(), t, t0, kForever, policy);
  return p.at("z0") + p.at("s") * (t - t0);
}

double LinearModel::derivative(const ModelParams& p, double t,
                               DomainPolicy policy) const {
  const double t0 = p.at("t0");
  const double tt = domain_time(name(), t, t0, kForever, policy);
  return tt == t ? p.at("s") : 0.0;
}

double LinearModel::second_derivative(const ModelParams& p, double t,
                                      DomainPolicy policy) const {
  domain_time(name(), t, p.at("t0"), kForever, policy);
  return 0.0;
}

double LinearModel::displacement(const ModelParams& p, double t_a, double t_b,
                                 DomainPolicy policy) const {
  check_interval(name(), t_a, t_b);
  const double t0 = p.at("t0");
  const double z0 = p.at("z0");
  if (policy == DomainPolicy::kError) {
    domain_time(name(), t_a, t0, kForever, policy);
  }
  const double before = z0 * (std::min(t_b, t0) - std::min(t_a, t0));
  const double ua = std::max(t_a, t0) - t0;
  const double ub = std::max(t_b, t0) - t0;
  return before + z0 * (ub - ua) + 0.5 * p.at("s") * (ub * ub - ua * ua);
}

FitResult LinearModel::fit(std::span<const Sample> samples) const {
  check_samples(samples, std::max<std::size_t>(2, parameter_schema().size()));
  const double t0 = samples.front().t;
  std::vector<double> u;
  u.reserve(samples.size());
  for (const auto& s : samples) u.push_back(s.t - t0);
  const auto line = fit_line(u, samples);
  FitResult out;
  out.params = {std::string(name()),
                {{"s", line.slope}, {"t0", t0}, {"z0", line.intercept}}};
  out.residual = rms_residual(*this, out.params, samples);
  return out;
}

// --- Constant ---------------------------------------------------------------

const std::vector<std::string>& ConstantModel::parameter_schema() const {
  static const std::vector<std::string> schema{"z0"};
  return schema;
}

double ConstantModel::state(const ModelParams& p, double,
                            DomainPolicy) const {
  return p.at("z0");
}

double ConstantModel::derivative(const ModelParams&, double,
                                 DomainPolicy) const {
  return 0.0;
}

double ConstantModel::second_derivative(const ModelParams&, double,
                                        DomainPolicy) const {
  return 0.0;
}

double ConstantModel::displacement(const ModelParams& p, double t_a,
                                   double t_b, DomainPolicy) const {
  check_interval(name(), t_a, t_b);
  return p.at("z0") * (t_b - t_a);
}

FitResult ConstantModel::fit(std::span<const Sample> samples) const {
  check_samples(samples, std::max<std::size_t>(2, parameter_schema().size()));
  double mean = 0.0;
  for (const auto& s : samples) mean += s.z;
  mean /= static_cast<double>(samples.size());
  FitResult out;
  out.params = {std::string(name()), {{"z0", mean}}};
  out.residual = rms_residual(*this, out.params, samples);
  return out;
}

// --- Registry ---------------------------------------------------------------

void ModelRegistry::add(std::shared_ptr<const Model> model) {
  std::string key(model->name());
  if (!models_.emplace(key, std::move(model)).second) {
    throw Error(Errc::kInvalidArgument,
                "model '" + key + "' is already registered");
  }
}

bool ModelRegistry::contains(std::string_view kind) const {
  return models_.find(kind) != models_.end();
}

const Model& ModelRegistry::get(std::string_view kind) const {
  const auto it = models_.find(kind);
  if (it == models_.end()) {
    throw Error(Errc::kUnknownModel, "unknown model '" + std::string(kind) + "'");
  }
  return *it->second;
}

std::vector<std::string> ModelRegistry::kinds() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : models_) out.push_back(k);
  return out;
}

const ModelRegistry& default_models() {
  static const ModelRegistry registry = [] {
    ModelRegistry r;
    r.add(std::make_shared<SinusoidalModel>());
    r.add(std::make_shared<LinearModel>());
    r.add(std::make_shared<ConstantModel>());
    return r;
  }();
  return registry;
}

double state(const ModelParams& params, double t, DomainPolicy policy) {
  const auto& model = default_models().get(params.kind);
  model.check(params);
  return model.state(params, t, policy);
}

double derivative(const ModelParams& params, double t, DomainPolicy policy) {
  const auto& model = default_models().get(params.kind);
  model.check(params);
  return model.derivative(params, t, policy);
}

double displacement(const ModelParams& params, double t_a, double t_b,
                    DomainPolicy policy) {
  const auto& model = default_models().get(params.kind);
  model.check(params);
  return model.displacement(params, t_a, t_b, policy);
}

FitResult fit(std::string_view kind, std::span<const Sample> samples) {
  return default_models().get(kind).fit(samples);
}

}  // namespace sdm
