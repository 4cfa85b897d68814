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
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "proxkit/errors.hpp"

namespace proxkit {

inline constexpr double kMetresPerFoot = 0.3048;
/// Encounter bounds for the two-class labeled datasets: high-risk contacts
/// stay within 6 ft, low-risk contacts beyond 10 ft.
inline constexpr double kHighRiskBoundM = 6.0 * kMetresPerFoot;
inline constexpr double kLowRiskBoundM = 10.0 * kMetresPerFoot;

/// Per-step exposure risk gamma(d) = (delta_t / 60) * min(1, 1/d^2), the
/// constant-maximum infectiousness case.
inline double risk_step(double d, double delta_t) {
  if (!(d > 0.0) || !(delta_t > 0.0)) {
    throw DomainError("risk_step requires positive distance and delta_t");
  }
  return delta_t / 60.0 * std::min(1.0, 1.0 / (d * d));
}

struct RiskScore {
  std::vector<double> per_step;
  double total = 0.0;
};

/// Risk of a distance trajectory; the total doubles as the dataset weight
/// w_n used by the risk training objective.
inline RiskScore scenario_risk(std::span<const double> distances,
                               double delta_t) {
  RiskScore score;
  score.per_step.reserve(distances.size());
  for (double d : distances) {
    score.per_step.push_back(risk_step(d, delta_t));
    score.total += score.per_step.back();
  }
  return score;
}

/// Inferred-trajectory risk relative to a precomputed bound risk.
inline double relative_risk(std::span<const double> inferred,
                            double truth_bound_risk, double delta_t) {
  return scenario_risk(inferred, delta_t).total - truth_bound_risk;
}

struct LabeledScore {
  bool positive = false;
  double score = 0.0;
};

/// Mann-Whitney AUC with average ranks for ties.
inline double roc_auc(std::span<const LabeledScore> scores) {
  std::size_t n_pos = 0, n_neg = 0;
  for (const LabeledScore& s : scores) {
    (s.positive ? n_pos : n_neg) += 1;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw DegenerateLabels("AUC needs at least one positive and one negative");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&scores](std::size_t a, std::size_t b) {
                     return scores[a].score < scores[b].score;
                   });

  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() &&
           scores[order[j + 1]].score == scores[order[i]].score) {
      ++j;
    }
    // Average 1-based rank across the tie group [i, j].
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (scores[order[k]].positive) rank_sum_pos += avg_rank;
    }
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace proxkit
