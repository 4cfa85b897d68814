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
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "proxkit/errors.hpp"

namespace proxkit {

/// Normal-inverse-gamma state over (mean, variance) of a scalar normal.
/// m is the location, lambda the pseudo-observation count tied to it,
/// (alpha, beta) the inverse-gamma shape and scale of the variance.
struct NigPosterior {
  double m = 0.0;
  double lambda = 1.0;
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const {
    if (!(lambda > 0.0) || !(alpha > 0.0) || !(beta > 0.0)) {
      throw InvalidDistribution(
          "normal-inverse-gamma requires lambda, alpha, beta > 0");
    }
  }
};

/// Closed-form posterior after absorbing iid normal draws.
/// Empty data returns the prior unchanged.
inline NigPosterior nig_update(const NigPosterior& prior,
                               std::span<const double> data) {
  prior.validate();
  const double n = static_cast<double>(data.size());
  if (data.empty()) return prior;

  const double sum = std::accumulate(data.begin(), data.end(), 0.0);
  const double mean = sum / n;
  double centered = 0.0;
  for (double y : data) centered += (y - mean) * (y - mean);

  NigPosterior post;
  post.lambda = prior.lambda + n;
  post.m = (prior.lambda * prior.m + n * mean) / post.lambda;
  post.alpha = prior.alpha + 0.5 * n;
  post.beta = prior.beta + 0.5 * centered +
              0.5 * (n * prior.lambda / post.lambda) * (mean - prior.m) *
                  (mean - prior.m);
  return post;
}

/// Location-scale Student-t: nu degrees of freedom, location mu, scale sigma.
struct TComponent {
  double nu = 1.0;
  double mu = 0.0;
  double sigma = 1.0;

  void validate() const {
    if (!(nu > 0.0) || !(sigma > 0.0)) {
      throw InvalidDistribution("student-t requires nu > 0 and sigma > 0");
    }
  }

  /// Second central moment, sigma^2 * nu / (nu - 2). Undefined for nu <= 2.
  double variance() const {
    validate();
    if (!(nu > 2.0)) {
      throw InfiniteVariance("student-t variance undefined for nu = " +
                             std::to_string(nu));
    }
    return sigma * sigma * nu / (nu - 2.0);
  }
};

/// Marginal distribution of one future draw under a NigPosterior:
/// t with nu = 2 alpha, location m, scale sqrt(beta (lambda + 1) / (alpha lambda)).
inline TComponent posterior_predictive_t(const NigPosterior& p) {
  p.validate();
  TComponent t;
  t.nu = 2.0 * p.alpha;
  t.mu = p.m;
  t.sigma = std::sqrt(p.beta * (p.lambda + 1.0) / (p.alpha * p.lambda));
  return t;
}

/// Dirichlet state over mixture weights.
struct DirichletPosterior {
  std::vector<double> alphas;

  void validate() const {
    if (alphas.empty()) {
      throw InvalidDistribution("dirichlet requires at least one component");
    }
    for (double a : alphas) {
      if (!(a > 0.0)) {
        throw InvalidDistribution("dirichlet concentrations must be positive");
      }
    }
  }

  double total() const {
    return std::accumulate(alphas.begin(), alphas.end(), 0.0);
  }

  /// Posterior mean weights alpha_k / sum(alpha).
  std::vector<double> expected_weights() const {
    validate();
    const double t = total();
    std::vector<double> w(alphas.size());
    for (std::size_t k = 0; k < alphas.size(); ++k) w[k] = alphas[k] / t;
    return w;
  }

  /// Var(w_k) under the posterior: alpha_k (a0 - alpha_k) / (a0^2 (a0 + 1)).
  std::vector<double> weight_variances() const {
    validate();
    const double a0 = total();
    std::vector<double> v(alphas.size());
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      v[k] = alphas[k] * (a0 - alphas[k]) / (a0 * a0 * (a0 + 1.0));
    }
    return v;
  }
};

/// Conjugate update with multinomial counts, elementwise alpha_k + n_k.
inline DirichletPosterior dirichlet_update(const DirichletPosterior& prior,
                                           std::span<const double> counts) {
  prior.validate();
  if (counts.size() != prior.alphas.size()) {
    throw LengthMismatch("counts length " + std::to_string(counts.size()) +
                         " does not match " +
                         std::to_string(prior.alphas.size()) + " components");
  }
  DirichletPosterior post = prior;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (!(counts[k] >= 0.0)) {
      throw InvalidDistribution("multinomial counts must be non-negative");
    }
    post.alphas[k] += counts[k];
  }
  return post;
}

/// Inverse-gamma belief over a variance.
struct NoiseVariance {
  double alpha = 2.0;
  double beta = 0.1;

  void validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
      throw InvalidDistribution("inverse-gamma requires alpha, beta > 0");
    }
  }

  /// Posterior mean beta / (alpha - 1). Undefined for alpha <= 1.
  double mean() const {
    validate();
    if (!(alpha > 1.0)) {
      throw DomainError("inverse-gamma mean undefined for alpha = " +
                        std::to_string(alpha));
    }
    return beta / (alpha - 1.0);
  }
};

/// Expected observation-noise variance under the inverse-gamma belief.
inline double noise_variance(const NoiseVariance& nv) { return nv.mean(); }

}  // namespace proxkit
