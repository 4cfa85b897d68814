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
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "proxkit/conjugate.hpp"
#include "proxkit/csv.hpp"
#include "proxkit/errors.hpp"
#include "proxkit/friis.hpp"
#include "proxkit/observation_model.hpp"
#include "proxkit/shifts.hpp"
#include "proxkit/transform.hpp"

namespace proxkit {

/// Default evaluation grid for generative model assembly, metres.
inline constexpr std::array<double, 9> kDefaultGrid{0.25, 0.5, 1.0, 1.5,
                                                    2.0,  3.0, 4.0, 5.0, 8.0};

struct CategoricalPmf {
  std::vector<std::string> names;
  std::vector<double> probs;
};

/// Everything needed to assemble the conjugate-mixture observation model:
/// anechoic device-pair calibrations weighted by market share, an optional
/// antenna-gain offset, carrying-context recordings differenced against
/// reference recordings, and the environment-noise prior.
struct GenerativeInputs {
  // Device-pair shift: per-pair calibration offsets in dBm and the market
  // shares that weight the pairs.
  std::vector<std::string> device_models;
  std::vector<double> market_shares;
  double survey_respondents = 2123.0;
  std::map<std::pair<std::string, std::string>, double> pair_epsilon_dbm;

  // Antenna-gain shift, a single constant offset when present.
  std::optional<double> antenna_gain_dbm;

  // Carrying context: per-cell recordings, matching reference recordings,
  // and the three marginal priors over cells.
  std::map<ContextKey, std::vector<double>> context_sets;
  std::map<ReferenceKey, std::vector<double>> reference_sets;
  CategoricalPmf environment;
  CategoricalPmf location;
  CategoricalPmf position;
  double context_pseudocount = kContextPseudocount;

  NoiseVariance noise{2.0, 0.1};
  std::vector<double> grid{kDefaultGrid.begin(), kDefaultGrid.end()};
  double q = 0.02;
  std::uint64_t seed = 0;

  bool has_devices() const { return !device_models.empty(); }
  bool has_context() const { return !context_sets.empty(); }
};

namespace detail {

inline TComponent device_component(double epsilon_dbm, double d,
                                   TransformMode mode) {
  NigPosterior prior = kDeviceShiftPrior;
  prior.m = shift_to_x_space(epsilon_dbm, d, mode);
  return posterior_predictive_t(prior);
}

}  // namespace detail

/// Builds the per-grid-point shift variables from the calibrated inputs.
///
/// Device pairs and the antenna gain are distance-dependent in log space:
/// their dBm offsets are re-mapped at each grid distance. The context
/// mixture is distance-invariant; its components are conjugate updates of
/// the zero-centred prior with the reference-differenced shift observations,
/// laid out to match context_dirichlet (position-major, then location, then
/// environment). Cells without recordings keep the prior.
inline std::vector<std::vector<ShiftVariable>> assemble_generative_shifts(
    const GenerativeInputs& inputs, TransformMode mode) {
  std::optional<ShiftVariable> context_shift;
  if (inputs.has_context()) {
    const std::map<ContextKey, std::vector<double>> shift_sets =
        fit_reference_shifts(inputs.reference_sets, inputs.context_sets,
                             inputs.seed);
    ShiftVariable sv;
    sv.weights =
        context_dirichlet(inputs.environment.probs, inputs.location.probs,
                          inputs.position.probs, inputs.context_pseudocount);
    for (const std::string& pos : inputs.position.names) {
      for (const std::string& loc : inputs.location.names) {
        for (const std::string& env : inputs.environment.names) {
          const ContextKey key{pos, loc, env};
          NigPosterior nig = kContextShiftPrior;
          if (const auto it = shift_sets.find(key); it != shift_sets.end()) {
            nig = nig_update(nig, it->second);
          }
          sv.components.push_back(posterior_predictive_t(nig));
        }
      }
    }
    sv.distance_dependent = false;
    sv.validate();
    context_shift = std::move(sv);
  }

  std::optional<DirichletPosterior> device_weights;
  if (inputs.has_devices()) {
    device_weights = device_pair_dirichlet(inputs.market_shares,
                                           inputs.survey_respondents);
  }

  std::vector<std::vector<ShiftVariable>> shifts(inputs.grid.size());
  for (std::size_t g = 0; g < inputs.grid.size(); ++g) {
    const double d = inputs.grid[g];
    if (inputs.has_devices()) {
      ShiftVariable sv;
      sv.weights = *device_weights;
      sv.distance_dependent = mode == TransformMode::kLogNegRssi;
      for (const std::string& tx : inputs.device_models) {
        for (const std::string& rx : inputs.device_models) {
          double epsilon = 0.0;
          if (const auto it = inputs.pair_epsilon_dbm.find({tx, rx});
              it != inputs.pair_epsilon_dbm.end()) {
            epsilon = it->second;
          }
          sv.components.push_back(detail::device_component(epsilon, d, mode));
        }
      }
      sv.validate();
      shifts[g].push_back(std::move(sv));
    }
    if (inputs.antenna_gain_dbm) {
      ShiftVariable sv;
      sv.weights.alphas = {1.0};
      sv.distance_dependent = mode == TransformMode::kLogNegRssi;
      sv.components.push_back(
          detail::device_component(*inputs.antenna_gain_dbm, d, mode));
      shifts[g].push_back(std::move(sv));
    }
    if (context_shift) {
      shifts[g].push_back(*context_shift);
    }
  }
  return shifts;
}

/// Full generative assembly: shifts, grid evaluation, log-linear mean fit.
inline ObservationModel build_generative_model(const GenerativeInputs& inputs,
                                               TransformMode mode,
                                               bool include_weight_uncertainty =
                                                   false) {
  const std::vector<std::vector<ShiftVariable>> shifts =
      assemble_generative_shifts(inputs, mode);
  ObservationModel model = build_generative_model(
      shifts, inputs.noise, inputs.grid, mode, include_weight_uncertainty);
  model.q = inputs.q;
  return model;
}

/// Reads the anechoic calibration table `tx_model,rx_model,epsilon_dbm`.
/// Replicate rows for a pair are averaged.
inline std::map<std::pair<std::string, std::string>, double>
load_calibration_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  const std::size_t tx_col = column_index(table, "tx_model");
  const std::size_t rx_col = column_index(table, "rx_model");
  const std::size_t eps_col = column_index(table, "epsilon_dbm");
  std::map<std::pair<std::string, std::string>, std::pair<double, long>> sums;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const double eps = parse_csv_number(table.rows[i][eps_col], "epsilon_dbm",
                                        table.line_numbers[i]);
    auto& acc = sums[{table.rows[i][tx_col], table.rows[i][rx_col]}];
    acc.first += eps;
    acc.second += 1;
  }
  if (sums.empty()) throw EmptyFile("calibration CSV has no data rows");
  std::map<std::pair<std::string, std::string>, double> out;
  for (const auto& [key, acc] : sums) {
    out.emplace(key, acc.first / static_cast<double>(acc.second));
  }
  return out;
}

/// Reads the market-share table `model,share`.
inline void load_market_share_csv(std::istream& in,
                                  std::vector<std::string>* models,
                                  std::vector<double>* shares) {
  const CsvTable table = read_csv(in);
  const std::size_t model_col = column_index(table, "model");
  const std::size_t share_col = column_index(table, "share");
  models->clear();
  shares->clear();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    models->push_back(table.rows[i][model_col]);
    shares->push_back(parse_csv_number(table.rows[i][share_col], "share",
                                       table.line_numbers[i]));
  }
  if (models->empty()) throw EmptyFile("market-share CSV has no data rows");
}

/// Loads a single-series recording CSV (`rssi_dbm` column) into observation
/// space.
inline std::vector<double> load_recording_csv(std::istream& in,
                                              TransformMode mode) {
  const CsvTable table = read_csv(in);
  const std::size_t col = column_index(table, "rssi_dbm");
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    out.push_back(transform_observation(
        parse_csv_number(table.rows[i][col], "rssi_dbm",
                         table.line_numbers[i]),
        mode));
  }
  if (out.empty()) throw EmptyFile("recording CSV has no data rows");
  return out;
}

}  // namespace proxkit
