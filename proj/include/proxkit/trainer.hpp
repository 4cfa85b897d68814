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

#include <span>
#include <string>
#include <vector>

#include "proxkit/bayesopt.hpp"
#include "proxkit/errors.hpp"
#include "proxkit/objectives.hpp"
#include "proxkit/random.hpp"

namespace proxkit {

enum class TrainObjective {
  kProximity,
  kRisk,
};

inline std::string_view objective_name(TrainObjective objective) {
  return objective == TrainObjective::kProximity ? "proximity" : "risk";
}

inline TrainObjective objective_from_name(std::string_view name) {
  if (name == "proximity") return TrainObjective::kProximity;
  if (name == "risk") return TrainObjective::kRisk;
  throw ConfigError("unknown objective: " + std::string(name));
}

inline Theta theta_from_vector(std::span<const double> v) {
  if (v.size() != 4) throw LengthMismatch("theta vector must have 4 entries");
  return Theta{v[0], v[1], v[2], v[3]};
}

struct TrainConfig {
  TrainObjective objective = TrainObjective::kProximity;
  MeanForm form = MeanForm::kLogLinear;
  TransformMode mode = TransformMode::kLogNegRssi;
  int folds = 3;
  int init_points = 10;
  int rounds = 100;
  std::uint64_t seed = 0;
  bool strict_stratification = true;
  SmootherSettings settings{};
  // Empty bounds select default_search_space(form, mode).
  SearchSpace space{};
};

struct CvTrainResult {
  std::vector<int> fold_assignment;
  std::vector<TrainReport> fold_reports;
  // Objective of each fold's best parameters on its held-out scenarios.
  std::vector<double> validation_scores;
  Theta deployed{};
  int deployed_fold = 0;
};

/// Stratified k-fold training: one Bayesian-optimization run per fold on
/// the fold's training side, validated on its held-out side. The deployed
/// parameters come from the fold with the best validation objective.
inline CvTrainResult train_discriminative(
    std::span<const Scenario> scenarios,
    std::span<const std::string> proximity_labels, const TrainConfig& config) {
  if (scenarios.empty()) throw InsufficientData("no training scenarios");
  if (scenarios.size() != proximity_labels.size()) {
    throw LengthMismatch("one proximity label per scenario required");
  }
  SearchSpace space = config.space;
  if (space.bounds.empty()) {
    space = default_search_space(config.form, config.mode);
  }

  const auto run_objective = [&](const Theta& theta,
                                 std::span<const Scenario> subset) {
    return config.objective == TrainObjective::kProximity
               ? proximity_objective(theta, subset, config.form, config.mode,
                                     config.settings)
               : risk_objective(theta, subset, config.form, config.mode,
                                config.settings);
  };

  CvTrainResult result;
  result.fold_assignment =
      stratified_folds(proximity_labels, config.folds,
                       derive_seed(config.seed, "cv-folds"),
                       config.strict_stratification);

  double best_validation = std::numeric_limits<double>::infinity();
  for (int fold = 0; fold < config.folds; ++fold) {
    std::vector<Scenario> train_set, validation_set;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      if (result.fold_assignment[i] == fold) {
        validation_set.push_back(scenarios[i]);
      } else {
        train_set.push_back(scenarios[i]);
      }
    }
    if (train_set.empty() || validation_set.empty()) {
      throw InfeasibleStratification("fold " + std::to_string(fold) +
                                     " has an empty side");
    }

    const auto objective = [&](std::span<const double> theta_vec) {
      return run_objective(theta_from_vector(theta_vec), train_set);
    };
    TrainReport report = bayes_opt(
        objective, space, config.init_points, config.rounds,
        derive_seed(config.seed, "fold-" + std::to_string(fold)));

    const Theta fold_best = theta_from_vector(report.best_theta);
    const double validation = run_objective(fold_best, validation_set);
    report.fold_scores.push_back(validation);
    result.validation_scores.push_back(validation);
    result.fold_reports.push_back(std::move(report));

    if (validation < best_validation) {
      best_validation = validation;
      result.deployed = fold_best;
      result.deployed_fold = fold;
    }
  }
  return result;
}

}  // namespace proxkit
