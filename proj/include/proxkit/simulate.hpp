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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "proxkit/errors.hpp"
#include "proxkit/random.hpp"
#include "proxkit/scenario.hpp"
#include "proxkit/smoother.hpp"

namespace proxkit {

enum class WalkGeometry {
  kFoldedLine,
  kCircle,
};

struct WalkConfig {
  int steps = 1000;
  double q_sim = 0.09;
  double init_distance_m = 2.0;
  WalkGeometry geometry = WalkGeometry::kFoldedLine;
  double radius_m = 2.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (steps < 1) throw InvalidDistribution("walk needs at least one step");
    if (!(q_sim > 0.0)) {
      throw InvalidDistribution("transition variance must be positive");
    }
    if (!(init_distance_m >= 0.0)) {
      throw InvalidDistribution("initial distance must be non-negative");
    }
    if (geometry == WalkGeometry::kCircle && !(radius_m > 0.0)) {
      throw InvalidDistribution("circle radius must be positive");
    }
  }
};

/// Distance floor for degenerate geometry (coincident walkers).
inline constexpr double kMinWalkDistance = 1e-6;

/// Synthetic encounter trajectory d_1..d_T.
///
/// kFoldedLine evolves the distance directly: d_{t+1} = |d_t + w|,
/// w ~ N(0, q_sim). kCircle walks two independent angles on a circle, each
/// with per-step variance q_sim / radius^2, and reports the chord length
/// 2 R sin(|dtheta| / 2); the initial separation reproduces the requested
/// distance (capped at the diameter).
inline std::vector<double> random_walk(const WalkConfig& config) {
  config.validate();
  std::mt19937_64 rng = make_rng(config.seed, "walk");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> d(static_cast<std::size_t>(config.steps));

  if (config.geometry == WalkGeometry::kFoldedLine) {
    double cur = config.init_distance_m;
    const double step_sd = std::sqrt(config.q_sim);
    d[0] = std::max(cur, kMinWalkDistance);
    for (int t = 1; t < config.steps; ++t) {
      cur = std::abs(cur + step_sd * normal(rng));
      d[static_cast<std::size_t>(t)] = std::max(cur, kMinWalkDistance);
    }
    return d;
  }

  const double r = config.radius_m;
  const double angle_sd = std::sqrt(config.q_sim) / r;
  double theta_a = 0.0;
  double theta_b =
      2.0 * std::asin(std::min(config.init_distance_m / (2.0 * r), 1.0));
  for (int t = 0; t < config.steps; ++t) {
    if (t > 0) {
      theta_a += angle_sd * normal(rng);
      theta_b += angle_sd * normal(rng);
    }
    const double chord = 2.0 * r * std::abs(std::sin(0.5 * (theta_a - theta_b)));
    d[static_cast<std::size_t>(t)] = std::max(chord, kMinWalkDistance);
  }
  return d;
}

struct ObsConfig {
  double dropout = 0.5;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(dropout >= 0.0 && dropout <= 1.0)) {
      throw InvalidDistribution("dropout must lie in [0, 1]");
    }
  }
};

/// Draws one observation X ~ N(mean(d_t), var(d_t)) per step, then drops
/// each independently with the dropout probability. Distances below the
/// model's domain floor are evaluated at the floor.
template <ObservationModelLike M>
std::vector<Observation> sample_observations(std::span<const double> distances,
                                             const M& model,
                                             const ObsConfig& config) {
  config.validate();
  std::mt19937_64 rng = make_rng(config.seed, "observe");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double floor = model.domain_floor();

  std::vector<Observation> out;
  out.reserve(distances.size());
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double d = std::max(distances[i], floor);
    const double x = model.mean(d) + std::sqrt(model.var(d)) * normal(rng);
    const bool keep = unif(rng) >= config.dropout;
    if (keep) out.push_back({static_cast<int>(i) + 1, x});
  }
  return out;
}

}  // namespace proxkit
