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
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "proxkit/errors.hpp"
#include "proxkit/observation_model.hpp"
#include "proxkit/random.hpp"
#include "proxkit/risk.hpp"
#include "proxkit/scenario.hpp"
#include "proxkit/smoother.hpp"

namespace proxkit {

/// Trainable parameter vector: observation mean (theta_mu1, theta_mu2),
/// observation variance theta_r, transition variance q.
struct Theta {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double r = 1.0;
  double q = 0.02;
};

inline ObservationModel make_discriminative_model(const Theta& theta,
                                                  MeanForm form,
                                                  TransformMode mode) {
  ObservationModel model;
  model.mode = mode;
  model.form = form;
  model.theta_mu1 = theta.mu1;
  model.theta_mu2 = theta.mu2;
  model.theta_r = theta.r;
  model.q = theta.q;
  model.validate();
  return model;
}

/// Smoothing configuration shared by both objectives.
struct SmootherSettings {
  GaussBelief init{2.0, 4.0};
  UtParams ut{};
};

namespace detail {

inline std::vector<double> smoothed_means(const Scenario& scenario,
                                          const ObservationModel& model,
                                          const SmootherSettings& settings) {
  const SmoothResult result =
      smooth(scenario, model, model.q, settings.init, settings.ut);
  std::vector<double> means;
  means.reserve(result.smoothed.size());
  for (const GaussBelief& b : result.smoothed) means.push_back(b.mean);
  return means;
}

inline void require_truth(const Scenario& scenario) {
  if (!scenario.has_truth()) {
    throw InsufficientData("scenario '" + scenario.id +
                           "' has no ground truth to train against");
  }
}

}  // namespace detail

/// Mean squared distance error of the smoothed posterior means against
/// ground truth, averaged uniformly over scenarios.
inline double proximity_objective(const Theta& theta,
                                  std::span<const Scenario> scenarios,
                                  MeanForm form, TransformMode mode,
                                  const SmootherSettings& settings = {}) {
  if (scenarios.empty()) throw InsufficientData("no training scenarios");
  const ObservationModel model = make_discriminative_model(theta, form, mode);
  double total = 0.0;
  for (const Scenario& scenario : scenarios) {
    detail::require_truth(scenario);
    const std::vector<double> means =
        detail::smoothed_means(scenario, model, settings);
    double mse = 0.0;
    for (std::size_t t = 0; t < means.size(); ++t) {
      const double err = scenario.truth[t] - means[t];
      mse += err * err;
    }
    total += mse / static_cast<double>(means.size());
  }
  return total / static_cast<double>(scenarios.size());
}

/// Mean squared per-step risk error, averaged over scenarios with weights
/// proportional to each scenario's true total risk w_n.
inline double risk_objective(const Theta& theta,
                             std::span<const Scenario> scenarios,
                             MeanForm form, TransformMode mode,
                             const SmootherSettings& settings = {}) {
  if (scenarios.empty()) throw InsufficientData("no training scenarios");
  const ObservationModel model = make_discriminative_model(theta, form, mode);

  double weight_sum = 0.0;
  double weighted = 0.0;
  for (const Scenario& scenario : scenarios) {
    detail::require_truth(scenario);
    const RiskScore truth_risk = scenario_risk(scenario.truth, scenario.delta_t);
    if (truth_risk.total == 0.0) continue;
    const std::vector<double> means =
        detail::smoothed_means(scenario, model, settings);
    double mse = 0.0;
    for (std::size_t t = 0; t < means.size(); ++t) {
      const double err =
          truth_risk.per_step[t] - risk_step(means[t], scenario.delta_t);
      mse += err * err;
    }
    mse /= static_cast<double>(means.size());
    weighted += truth_risk.total * mse;
    weight_sum += truth_risk.total;
  }
  if (weight_sum == 0.0) {
    throw AllZeroWeights("every scenario has zero true risk");
  }
  return weighted / weight_sum;
}

/// Deterministic stratified k-fold assignment over proximity labels.
/// Scenarios sharing a label are shuffled (seeded) and dealt round-robin,
/// so every label with >= k members appears in each fold's validation and
/// training sides. strict requires that of every label.
inline std::vector<int> stratified_folds(
    std::span<const std::string> proximity_labels, int k, std::uint64_t seed,
    bool strict = true) {
  if (k < 2) throw ConfigError("stratified folds require k >= 2");
  if (proximity_labels.size() < static_cast<std::size_t>(k)) {
    throw InfeasibleStratification("fewer scenarios than folds");
  }
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < proximity_labels.size(); ++i) {
    groups[std::string(proximity_labels[i])].push_back(i);
  }
  std::vector<int> assignment(proximity_labels.size(), 0);
  for (auto& [label, members] : groups) {
    if (strict && members.size() < static_cast<std::size_t>(k)) {
      throw InfeasibleStratification(
          "proximity '" + label + "' has " + std::to_string(members.size()) +
          " scenarios, need at least " + std::to_string(k));
    }
    std::mt19937_64 rng = make_rng(seed, "folds/" + label);
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t j = 0; j < members.size(); ++j) {
      assignment[members[j]] = static_cast<int>(j % static_cast<std::size_t>(k));
    }
  }
  return assignment;
}

}  // namespace proxkit
