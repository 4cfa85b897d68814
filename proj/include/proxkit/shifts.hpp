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
#include <compare>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "proxkit/conjugate.hpp"
#include "proxkit/errors.hpp"
#include "proxkit/random.hpp"

namespace proxkit {

/// Additive observation-space disturbance modeled as a mixture of Student-t
/// components with Dirichlet-distributed weights. One instance describes one
/// disturbance source (device pair, antenna gain, carrying context) at one
/// distance.
struct ShiftVariable {
  std::vector<TComponent> components;
  DirichletPosterior weights;
  // True when the component locations were derived at a specific distance
  // and must be rebuilt per grid point.
  bool distance_dependent = false;

  void validate() const {
    weights.validate();
    if (components.size() != weights.alphas.size()) {
      throw LengthMismatch("shift variable has " +
                           std::to_string(components.size()) +
                           " components but " +
                           std::to_string(weights.alphas.size()) + " weights");
    }
    for (const TComponent& c : components) c.validate();
  }
};

struct ShiftMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact first and second moments of the weight-marginalized mixture.
/// With w_k = alpha_k / sum(alpha):
///   mean = sum_k w_k mu_k
///   variance = sum_k w_k (var_k + mu_k^2) - mean^2
/// When include_weight_uncertainty is set, adds the Dirichlet spread of the
/// weights around their mean, sum_k Var(w_k) (mu_k - mean)^2. Off by default:
/// the marginal mixture density has exactly the moments above.
inline ShiftMoments shift_moments(const ShiftVariable& sv,
                                  bool include_weight_uncertainty = false) {
  sv.validate();
  const std::vector<double> w = sv.weights.expected_weights();
  ShiftMoments out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    out.mean += w[k] * sv.components[k].mu;
  }
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double mu = sv.components[k].mu;
    out.variance += w[k] * (sv.components[k].variance() + mu * mu);
  }
  out.variance -= out.mean * out.mean;
  if (include_weight_uncertainty) {
    const std::vector<double> wv = sv.weights.weight_variances();
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double dev = sv.components[k].mu - out.mean;
      out.variance += wv[k] * dev * dev;
    }
  }
  return out;
}

/// Draws n values from the marginalized mixture. Each draw resamples the
/// weight vector from the Dirichlet, picks a component, then samples its t.
/// Deterministic under a fixed seed.
inline std::vector<double> sample_shift(const ShiftVariable& sv, std::size_t n,
                                        std::uint64_t seed) {
  sv.validate();
  std::mt19937_64 rng = make_rng(seed, "shift-sample");
  std::vector<std::gamma_distribution<double>> gammas;
  gammas.reserve(sv.weights.alphas.size());
  for (double a : sv.weights.alphas) {
    gammas.emplace_back(a, 1.0);
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> pi(gammas.size());
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t k = 0; k < gammas.size(); ++k) {
      pi[k] = gammas[k](rng);
      total += pi[k];
    }
    double u = unif(rng) * total;
    std::size_t pick = gammas.size() - 1;
    for (std::size_t k = 0; k < gammas.size(); ++k) {
      if (u < pi[k]) {
        pick = k;
        break;
      }
      u -= pi[k];
    }
    const TComponent& c = sv.components[pick];
    std::student_t_distribution<double> t(c.nu);
    out.push_back(c.mu + c.sigma * t(rng));
  }
  return out;
}

/// Key of one carrying-context cell.
struct ContextKey {
  std::string position;
  std::string location;
  std::string environment;

  auto operator<=>(const ContextKey&) const = default;
};

/// Key of one reference measurement set: (location, position).
using ReferenceKey = std::pair<std::string, std::string>;

/// Converts per-context observation sets into shift observation sets by
/// differencing against a fitted reference distribution. Each reference set
/// is summarized as Normal(sample mean, unbiased variance); every context
/// observation x_i is paired with a fresh reference draw x_hat_i and the
/// shift y_i = x_i - x_hat_i is emitted. Draws are seeded per context key,
/// so results do not depend on container iteration order.
inline std::map<ContextKey, std::vector<double>> fit_reference_shifts(
    const std::map<ReferenceKey, std::vector<double>>& reference,
    const std::map<ContextKey, std::vector<double>>& contexts,
    std::uint64_t seed) {
  struct Fit {
    double mean;
    double sd;
  };
  std::map<ReferenceKey, Fit> fits;
  for (const auto& [key, values] : reference) {
    if (values.size() < 2) {
      throw InsufficientData("reference set (" + key.first + ", " +
                             key.second + ") needs at least 2 points");
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(values.size() - 1);
    fits.emplace(key, Fit{mean, std::sqrt(var)});
  }

  std::map<ContextKey, std::vector<double>> out;
  for (const auto& [key, values] : contexts) {
    const ReferenceKey ref_key{key.location, key.position};
    const auto fit = fits.find(ref_key);
    if (fit == fits.end()) {
      throw InsufficientData("no reference set for (" + key.location + ", " +
                             key.position + ")");
    }
    std::mt19937_64 rng = make_rng(
        seed, key.position + "/" + key.location + "/" + key.environment);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> shifts;
    shifts.reserve(values.size());
    for (double x : values) {
      shifts.push_back(x - (fit->second.mean + fit->second.sd * z(rng)));
    }
    out.emplace(key, std::move(shifts));
  }
  return out;
}

/// Dirichlet over ordered (transmitter, receiver) device pairs from market
/// shares. alpha for pair (t, r) = N(N-1) p_t p_r with N survey respondents;
/// pairs are laid out transmitter-major.
inline DirichletPosterior device_pair_dirichlet(
    std::span<const double> market_shares, double respondents) {
  if (market_shares.empty()) {
    throw InvalidDistribution("market shares must be non-empty");
  }
  double total = 0.0;
  for (double p : market_shares) {
    if (!(p > 0.0)) {
      throw InvalidDistribution("market shares must be positive");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidDistribution("market shares sum to " + std::to_string(total) +
                              ", expected 1");
  }
  if (!(respondents >= 2.0)) {
    throw InvalidDistribution("respondent count must be at least 2");
  }
  const double scale = respondents * (respondents - 1.0);
  DirichletPosterior post;
  post.alphas.reserve(market_shares.size() * market_shares.size());
  for (double pt : market_shares) {
    for (double pr : market_shares) {
      post.alphas.push_back(scale * pt * pr);
    }
  }
  return post;
}

/// Dirichlet over joint (position, location, environment) cells with
/// alpha = pseudocount * p(e) p(l) p(p). Cells are laid out position-major,
/// then location, then environment. Total concentration equals pseudocount.
inline DirichletPosterior context_dirichlet(std::span<const double> p_env,
                                            std::span<const double> p_loc,
                                            std::span<const double> p_pos,
                                            double pseudocount) {
  const auto check = [](std::span<const double> p, const char* what) {
    if (p.empty()) {
      throw InvalidDistribution(std::string(what) + " distribution is empty");
    }
    double total = 0.0;
    for (double v : p) {
      if (!(v > 0.0)) {
        throw InvalidDistribution(std::string(what) +
                                  " probabilities must be positive");
      }
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw InvalidDistribution(std::string(what) + " probabilities sum to " +
                                std::to_string(total) + ", expected 1");
    }
  };
  check(p_env, "environment");
  check(p_loc, "location");
  check(p_pos, "position");
  if (!(pseudocount > 0.0)) {
    throw InvalidDistribution("pseudocount must be positive");
  }
  DirichletPosterior post;
  post.alphas.reserve(p_pos.size() * p_loc.size() * p_env.size());
  for (double pp : p_pos) {
    for (double pl : p_loc) {
      for (double pe : p_env) {
        post.alphas.push_back(pseudocount * pe * pl * pp);
      }
    }
  }
  return post;
}

/// Survey constants used for the default carrying-context prior.
inline constexpr double kIndoorsProbability = 0.869;
inline constexpr double kConcealedProbability = 4.75 / 24.0;
inline constexpr int kDefaultOrientationBins = 8;
inline constexpr double kContextPseudocount = 10.0;

/// Default component priors. Device-pair and antenna-gain components centre
/// the location on the calibrated shift; context components start at zero.
inline constexpr NigPosterior kDeviceShiftPrior{0.0, 1.0, 2.0, 0.1};
inline constexpr NigPosterior kContextShiftPrior{0.0, 0.1, 2.0, 0.1};

}  // namespace proxkit
