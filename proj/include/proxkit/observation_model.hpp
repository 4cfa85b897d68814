// Copyright 2026 The Proxkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxkit/conjugate.hpp"
#include "proxkit/errors.hpp"
#include "proxkit/friis.hpp"
#include "proxkit/shifts.hpp"
#include "proxkit/transform.hpp"

namespace proxkit {

/// Parametric families for the observation mean.
/// kScaledBase: theta_mu1 * f(d) + theta_mu2 on top of the free-space base
/// function; kLogLinear: theta_mu1 * ln(d) + theta_mu2.
enum class MeanForm {
  kScaledBase,
  kLogLinear,
};

inline std::string_view form_name(MeanForm form) {
  return form == MeanForm::kScaledBase ? "scaled_base" : "log_linear";
}

inline MeanForm form_from_name(std::string_view name) {
  if (name == "scaled_base") return MeanForm::kScaledBase;
  if (name == "log_linear") return MeanForm::kLogLinear;
  throw ConfigError("unknown mean form: " + std::string(name));
}

/// Observation mean at distance d under the chosen parametric form.
inline double discriminative_mean(double d, double theta_mu1, double theta_mu2,
                                  MeanForm form, TransformMode mode) {
  if (!(d > 0.0)) {
    throw DomainError("mean function requires d > 0, got " + std::to_string(d));
  }
  if (form == MeanForm::kScaledBase) {
    return theta_mu1 * base_function(d, mode) + theta_mu2;
  }
  return theta_mu1 * std::log(d) + theta_mu2;
}

/// Gaussian data distribution X | D = d ~ N(mean(d), var(d)).
///
/// The mean is always the parametric form above. The variance is either the
/// constant theta_r (discriminative models) or, when grid/grid_var are set,
/// a piecewise-linear interpolation in ln(d) clamped to the end values
/// (generative models). q is the per-step transition variance the smoother
/// pairs with this model.
struct ObservationModel {
  TransformMode mode = TransformMode::kLogNegRssi;
  MeanForm form = MeanForm::kLogLinear;
  double theta_mu1 = 0.0;
  double theta_mu2 = 0.0;
  double theta_r = 1.0;
  double q = 0.02;
  std::vector<double> grid;
  std::vector<double> grid_var;

  void validate() const {
    if (grid.size() != grid_var.size()) {
      throw LengthMismatch("grid and grid_var lengths differ");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!(grid[i] > 0.0)) {
        throw InvalidDistribution("grid distances must be positive");
      }
      if (i > 0 && !(grid[i] > grid[i - 1])) {
        throw InvalidDistribution("grid distances must be strictly increasing");
      }
      if (!(grid_var[i] > 0.0)) {
        throw InvalidDistribution("grid variances must be positive");
      }
    }
    if (grid.empty() && !(theta_r > 0.0)) {
      throw InvalidDistribution("observation variance theta_r must be positive");
    }
    if (!(q > 0.0)) {
      throw InvalidDistribution("transition variance q must be positive");
    }
  }

  double mean(double d) const {
    return discriminative_mean(d, theta_mu1, theta_mu2, form, mode);
  }

  double var(double d) const {
    if (grid.empty()) return theta_r;
    if (!(d > 0.0)) {
      throw DomainError("variance function requires d > 0");
    }
    const double u = std::log(d);
    if (u <= std::log(grid.front())) return grid_var.front();
    if (u >= std::log(grid.back())) return grid_var.back();
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double hi = std::log(grid[i]);
      if (u <= hi) {
        const double lo = std::log(grid[i - 1]);
        const double w = (u - lo) / (hi - lo);
        return (1.0 - w) * grid_var[i - 1] + w * grid_var[i];
      }
    }
    return grid_var.back();
  }

  /// Smallest distance the smoother may evaluate this model at. Sigma points
  /// below the floor are clamped before mean/var evaluation; the floor sits
  /// 5% above the free-space singularity when the base function is involved.
  double domain_floor() const {
    if (form == MeanForm::kScaledBase && mode == TransformMode::kLogNegRssi) {
      return 1.05 * min_model_distance();
    }
    return 0.01;
  }
};

/// Least-squares line a*ln(d) + b through (grid, mu) with an L2 penalty on
/// both coefficients.
inline void ridge_log_fit(std::span<const double> grid,
                          std::span<const double> mu, double regularizer,
                          double* a, double* b) {
  double suu = regularizer, su = 0.0, n = regularizer;
  double sum = 0.0, sm = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double u = std::log(grid[i]);
    suu += u * u;
    su += u;
    n += 1.0;
    sum += u * mu[i];
    sm += mu[i];
  }
  const double det = suu * n - su * su;
  if (!(det > 0.0)) {
    throw NumericError("degenerate design in log-linear fit");
  }
  *a = (sum * n - su * sm) / det;
  *b = (suu * sm - su * sum) / det;
}

/// Builds the conjugate-mixture observation model on a distance grid.
/// At each grid point d_i the mean is base_function(d_i) plus the sum of the
/// shift-variable means, and the variance is the sum of shift variances plus
/// the expected measurement-noise variance. The mean curve is then summarized
/// as a log-linear fit; the variance stays gridded.
inline ObservationModel build_generative_model(
    std::span<const std::vector<ShiftVariable>> shifts, const NoiseVariance& noise,
    std::span<const double> grid, TransformMode mode,
    bool include_weight_uncertainty = false) {
  if (grid.empty()) throw EmptySequence("grid must be non-empty");
  if (!shifts.empty() && shifts.size() != grid.size()) {
    throw LengthMismatch("need one shift list per grid distance");
  }
  const double var_z = noise_variance(noise);

  std::vector<double> mu(grid.size());
  ObservationModel model;
  model.mode = mode;
  model.form = MeanForm::kLogLinear;
  model.q = 0.02;
  model.grid.assign(grid.begin(), grid.end());
  model.grid_var.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InvalidDistribution("grid distances must be strictly increasing");
    }
    mu[i] = base_function(grid[i], mode);
    double var = var_z;
    if (!shifts.empty()) {
      for (const ShiftVariable& sv : shifts[i]) {
        const ShiftMoments m = shift_moments(sv, include_weight_uncertainty);
        mu[i] += m.mean;
        var += m.variance;
      }
    }
    model.grid_var[i] = var;
  }

  ridge_log_fit(grid, mu, 1e-6, &model.theta_mu1, &model.theta_mu2);
  double r_mean = 0.0;
  for (double v : model.grid_var) r_mean += v;
  model.theta_r = r_mean / static_cast<double>(model.grid_var.size());
  model.validate();
  return model;
}

/// Fitted observation model for the calibrated same-device pair, one per
/// transform mode. q matches the synthetic-walk transition variance the fit
/// was reported with.
inline ObservationModel known_pair_model(TransformMode mode) {
  ObservationModel model;
  model.mode = mode;
  model.form = MeanForm::kLogLinear;
  model.q = 0.09;
  if (mode == TransformMode::kLogNegRssi) {
    model.theta_mu1 = 0.21;
    model.theta_mu2 = 3.92;
    model.theta_r = 0.33;
  } else {
    model.theta_mu1 = -8.69;
    model.theta_mu2 = -67.9;
    model.theta_r = 97.03;
  }
  return model;
}

}  // namespace proxkit
