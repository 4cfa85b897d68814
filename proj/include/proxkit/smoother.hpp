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

#include <array>
#include <cmath>
#include <concepts>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <boost/math/distributions/gamma.hpp>

#include "proxkit/csv.hpp"
#include "proxkit/errors.hpp"
#include "proxkit/scenario.hpp"

namespace proxkit {

/// Anything the smoother can use as an observation model: mean and variance
/// of X given a distance, and the smallest distance they may be evaluated at.
template <typename M>
concept ObservationModelLike = requires(const M& m, double d) {
  { m.mean(d) } -> std::convertible_to<double>;
  { m.var(d) } -> std::convertible_to<double>;
  { m.domain_floor() } -> std::convertible_to<double>;
};

/// Scaled unscented transform parameters. In one dimension the scaled
/// dimension is lambda = alpha_ut^2 * (1 + kappa_ut) - 1, which must stay
/// above -1 so the sigma-point spread sqrt((1 + lambda) * var) is real.
struct UtParams {
  double alpha_ut = 1.0;
  double beta_ut = 2.0;
  double kappa_ut = 2.0;

  double lambda() const { return alpha_ut * alpha_ut * (1.0 + kappa_ut) - 1.0; }

  void validate() const {
    if (!(alpha_ut > 0.0) || !(lambda() > -1.0)) {
      throw InvalidDistribution(
          "unscented parameters require alpha_ut > 0 and "
          "alpha_ut^2*(1+kappa_ut) > 0");
    }
  }
};

struct GaussBelief {
  double mean = 0.0;
  double var = 1.0;

  void validate() const {
    if (!(var > 0.0)) throw InvalidDistribution("belief variance must be > 0");
  }
};

/// Variance floor applied after nonlinear moment updates; keeps beliefs
/// valid when the fold or the gain degenerate numerically.
inline constexpr double kMinBeliefVariance = 1e-12;

struct SigmaPoints {
  std::array<double, 3> point;
  std::array<double, 3> w_mean;
  std::array<double, 3> w_cov;
};

/// Three-point scaled unscented set for a 1-D Gaussian: {mean, mean +- s}
/// with s = sqrt((1 + lambda) var). Mean weights sum to 1; the centre
/// covariance weight carries the (1 - alpha^2 + beta) correction.
inline SigmaPoints sigma_points(const GaussBelief& belief,
                                const UtParams& params) {
  belief.validate();
  params.validate();
  const double lambda = params.lambda();
  const double s = std::sqrt((1.0 + lambda) * belief.var);
  SigmaPoints sp;
  sp.point = {belief.mean, belief.mean + s, belief.mean - s};
  const double w0 = lambda / (1.0 + lambda);
  const double wi = 0.5 / (1.0 + lambda);
  sp.w_mean = {w0, wi, wi};
  sp.w_cov = {w0 + (1.0 - params.alpha_ut * params.alpha_ut + params.beta_ut),
              wi, wi};
  return sp;
}

/// One stored prediction step. The sigma points describe the pre-fold sum
/// D_t + w ~ N(filtered mean, filtered var + q); the backward pass reuses
/// them to rebuild the transition cross-covariance.
struct PredictRecord {
  SigmaPoints joint;
  GaussBelief predicted;
  double source_var = 0.0;  // filtered variance at the source step
  double q = 0.0;
};

/// Folded-transition prediction: widen the belief by the transition noise,
/// place sigma points on D_t + w, push them through |.|, and re-form moments.
/// Far from the origin the fold is inactive and this reduces exactly to
/// mean' = mean, var' = var + q.
inline PredictRecord predict_record(const GaussBelief& belief, double q,
                                    const UtParams& params) {
  if (!(q > 0.0)) throw InvalidDistribution("transition variance must be > 0");
  const GaussBelief joint{belief.mean, belief.var + q};
  PredictRecord rec;
  rec.joint = sigma_points(joint, params);
  rec.source_var = belief.var;
  rec.q = q;

  double mean = 0.0;
  for (int i = 0; i < 3; ++i) {
    mean += rec.joint.w_mean[i] * std::abs(rec.joint.point[i]);
  }
  double var = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double dev = std::abs(rec.joint.point[i]) - mean;
    var += rec.joint.w_cov[i] * dev * dev;
  }
  rec.predicted = {mean, std::max(var, kMinBeliefVariance)};
  return rec;
}

inline GaussBelief predict(const GaussBelief& belief, double q,
                           const UtParams& params) {
  return predict_record(belief, q, params).predicted;
}

/// Unscented measurement update. Sigma points are clamped to the model's
/// domain floor before evaluating mean/var; the cross-covariance keeps the
/// raw state deviations so affine observation models reduce exactly to the
/// closed-form Kalman update. The corrected mean is reported folded (|mean|).
template <ObservationModelLike M>
GaussBelief update(const GaussBelief& predicted, double x_obs, const M& model,
                   const UtParams& params) {
  const SigmaPoints sp = sigma_points(predicted, params);
  const double floor = model.domain_floor();

  std::array<double, 3> z;
  double r_bar = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = std::max(sp.point[i], floor);
    z[i] = model.mean(d);
    const double r = model.var(d);
    if (!(r > 0.0)) {
      throw InvalidDistribution("observation variance must be positive");
    }
    r_bar += sp.w_mean[i] * r;
  }

  double z_hat = 0.0;
  for (int i = 0; i < 3; ++i) z_hat += sp.w_mean[i] * z[i];
  double s = r_bar;
  double c = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double dz = z[i] - z_hat;
    s += sp.w_cov[i] * dz * dz;
    c += sp.w_cov[i] * (sp.point[i] - predicted.mean) * dz;
  }
  if (!(s > 0.0)) {
    throw NumericError("non-positive innovation variance");
  }
  const double gain = c / s;
  const double mean = predicted.mean + gain * (x_obs - z_hat);
  const double var = predicted.var - gain * gain * s;
  return {std::abs(mean), std::max(var, kMinBeliefVariance)};
}

/// Posterior moments per step. imputed marks steps that had no observation.
/// Smoothing never increases variance: smoothed var <= filtered var at
/// every step.
struct SmoothResult {
  std::vector<GaussBelief> filtered;
  std::vector<GaussBelief> smoothed;
  std::vector<bool> imputed;
};

/// Forward unscented filter plus backward Rauch-Tung-Striebel pass.
///
/// Step 1 starts from `init` (updated in place if observed). Missing slots
/// take the prediction as their filtered belief. The backward gain is
/// G_t = C_t / predicted_var(t+1) with the transition cross-covariance
///   C_t = var_f / (var_f + q) * sum_i w_c (p_i - m_f)(|p_i| - m_pred),
/// the exact Gaussian projection of D_t onto D_t + w applied to the stored
/// pre-fold sigma points p_i. Smoothed means are reported folded.
template <ObservationModelLike M>
SmoothResult smooth(const Scenario& scenario, const M& model, double q,
                    const GaussBelief& init, const UtParams& params = {}) {
  scenario.validate();
  init.validate();
  const int steps = scenario.steps;

  std::vector<std::optional<double>> obs(static_cast<std::size_t>(steps) + 1);
  for (const Observation& o : scenario.observations) {
    obs[static_cast<std::size_t>(o.t)] = o.x;
  }

  SmoothResult result;
  result.filtered.resize(static_cast<std::size_t>(steps));
  result.smoothed.resize(static_cast<std::size_t>(steps));
  result.imputed.resize(static_cast<std::size_t>(steps));
  std::vector<PredictRecord> records(static_cast<std::size_t>(steps));

  for (int t = 1; t <= steps; ++t) {
    const std::size_t i = static_cast<std::size_t>(t - 1);
    GaussBelief predicted;
    if (t == 1) {
      predicted = init;
    } else {
      records[i] = predict_record(result.filtered[i - 1], q, params);
      predicted = records[i].predicted;
    }
    result.imputed[i] = !obs[static_cast<std::size_t>(t)].has_value();
    result.filtered[i] =
        result.imputed[i]
            ? predicted
            : update(predicted, *obs[static_cast<std::size_t>(t)], model,
                     params);
  }

  result.smoothed[static_cast<std::size_t>(steps - 1)] =
      result.filtered[static_cast<std::size_t>(steps - 1)];
  for (int t = steps - 1; t >= 1; --t) {
    const std::size_t i = static_cast<std::size_t>(t - 1);
    const PredictRecord& rec = records[i + 1];
    const GaussBelief& filt = result.filtered[i];

    double cross = 0.0;
    for (int j = 0; j < 3; ++j) {
      cross += rec.joint.w_cov[j] * (rec.joint.point[j] - filt.mean) *
               (std::abs(rec.joint.point[j]) - rec.predicted.mean);
    }
    cross *= filt.var / (filt.var + rec.q);

    const double gain = cross / rec.predicted.var;
    const GaussBelief& next = result.smoothed[i + 1];
    const double mean = filt.mean + gain * (next.mean - rec.predicted.mean);
    const double var =
        filt.var + gain * gain * (next.var - rec.predicted.var);
    result.smoothed[i] = {std::abs(mean), std::max(var, kMinBeliefVariance)};
  }
  return result;
}

/// p-quantile of the moment-matched gamma: shape mean^2/var, scale var/mean.
inline double posterior_quantiles(const GaussBelief& belief, double p) {
  belief.validate();
  if (!(belief.mean > 0.0)) {
    throw DomainError("gamma moment match requires mean > 0");
  }
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("quantile probability must lie in (0, 1)");
  }
  const double shape = belief.mean * belief.mean / belief.var;
  const double scale = belief.var / belief.mean;
  const boost::math::gamma_distribution<double> dist(shape, scale);
  return boost::math::quantile(dist, p);
}

inline constexpr const char* kSmoothCsvHeader =
    "t,imputed,filt_mean,filt_var,smooth_mean,smooth_var,q05,q95";

inline void write_smooth_csv(std::ostream& out, const SmoothResult& result) {
  out << kSmoothCsvHeader << "\n";
  for (std::size_t i = 0; i < result.smoothed.size(); ++i) {
    const GaussBelief& f = result.filtered[i];
    const GaussBelief& s = result.smoothed[i];
    out << (i + 1) << "," << (result.imputed[i] ? 1 : 0) << "," << fmt_g(f.mean)
        << "," << fmt_g(f.var) << "," << fmt_g(s.mean) << "," << fmt_g(s.var)
        << "," << fmt_g(posterior_quantiles(s, 0.05)) << ","
        << fmt_g(posterior_quantiles(s, 0.95)) << "\n";
  }
}

}  // namespace proxkit
