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
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "proxkit/errors.hpp"
#include "proxkit/generative.hpp"
#include "proxkit/observation_model.hpp"
#include "proxkit/scenario.hpp"
#include "proxkit/trainer.hpp"

namespace proxkit {

inline constexpr const char* kModelFormat = "proxkit-model-v1";
inline constexpr const char* kManifestFormat = "proxkit-manifest-v1";
inline constexpr const char* kGenerativeFormat = "proxkit-generative-v1";
inline constexpr const char* kTrainFormat = "proxkit-train-v1";
inline constexpr const char* kEvalFormat = "proxkit-eval-v1";

namespace detail {

inline nlohmann::json parse_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path,
                            const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  return in;
}

}  // namespace detail

inline nlohmann::json model_to_json(const ObservationModel& model) {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["mode"] = mode_name(model.mode);
  j["form"] = form_name(model.form);
  j["theta_mu1"] = model.theta_mu1;
  j["theta_mu2"] = model.theta_mu2;
  j["theta_r"] = model.theta_r;
  j["q"] = model.q;
  if (!model.grid.empty()) {
    j["grid"] = model.grid;
    j["grid_var"] = model.grid_var;
  }
  return j;
}

inline ObservationModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != kModelFormat) {
      throw ConfigError("not a model document (format field mismatch)");
    }
    ObservationModel model;
    model.mode = mode_from_name(j.at("mode").get<std::string>());
    model.form = form_from_name(j.at("form").get<std::string>());
    model.theta_mu1 = j.at("theta_mu1").get<double>();
    model.theta_mu2 = j.at("theta_mu2").get<double>();
    model.theta_r = j.at("theta_r").get<double>();
    model.q = j.at("q").get<double>();
    if (j.contains("grid")) {
      model.grid = j.at("grid").get<std::vector<double>>();
      model.grid_var = j.at("grid_var").get<std::vector<double>>();
    }
    model.validate();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid model document: ") + e.what());
  }
}

inline void save_model(const std::filesystem::path& path,
                       const ObservationModel& model) {
  detail::write_json_file(path, model_to_json(model));
}

inline CategoricalPmf pmf_from_json(const nlohmann::json& j) {
  CategoricalPmf pmf;
  pmf.names = j.at("names").get<std::vector<std::string>>();
  pmf.probs = j.at("probs").get<std::vector<double>>();
  if (pmf.names.size() != pmf.probs.size()) {
    throw ConfigError("categorical names and probs lengths differ");
  }
  return pmf;
}

/// Splits "a_b_c.csv" into its underscore-separated key parts.
inline std::vector<std::string> split_recording_key(const std::string& stem) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : stem) {
    if (c == '_') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

/// Parses a generative build configuration, loading the referenced CSV
/// inputs relative to base_dir. Recording directories hold one CSV per
/// cell: contexts as {env}_{loc}_{angle}.csv, references as
/// {loc}_{angle}.csv.
inline GenerativeInputs generative_inputs_from_json(
    const nlohmann::json& j, const std::filesystem::path& base_dir,
    TransformMode mode) {
  try {
    GenerativeInputs inputs;
    if (j.contains("market_share_csv")) {
      auto in = detail::open_input(
          base_dir / j.at("market_share_csv").get<std::string>());
      load_market_share_csv(in, &inputs.device_models, &inputs.market_shares);
    }
    if (j.contains("calibration_csv")) {
      auto in = detail::open_input(
          base_dir / j.at("calibration_csv").get<std::string>());
      inputs.pair_epsilon_dbm = load_calibration_csv(in);
    }
    inputs.survey_respondents =
        j.value("respondents", inputs.survey_respondents);
    if (j.contains("antenna_gain_dbm")) {
      inputs.antenna_gain_dbm = j.at("antenna_gain_dbm").get<double>();
    }
    if (j.contains("context_dir")) {
      const std::filesystem::path dir =
          base_dir / j.at("context_dir").get<std::string>();
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& file : files) {
        const auto parts = split_recording_key(file.stem().string());
        if (parts.size() != 3) {
          throw ConfigError("context file name must be env_loc_angle.csv: " +
                            file.string());
        }
        auto in = detail::open_input(file);
        inputs.context_sets.emplace(
            ContextKey{parts[2], parts[1], parts[0]},
            load_recording_csv(in, mode));
      }
      const std::filesystem::path ref_dir =
          base_dir / j.at("reference_dir").get<std::string>();
      files.clear();
      for (const auto& entry : std::filesystem::directory_iterator(ref_dir)) {
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& file : files) {
        const auto parts = split_recording_key(file.stem().string());
        if (parts.size() != 2) {
          throw ConfigError("reference file name must be loc_angle.csv: " +
                            file.string());
        }
        auto in = detail::open_input(file);
        inputs.reference_sets.emplace(ReferenceKey{parts[0], parts[1]},
                                      load_recording_csv(in, mode));
      }
      inputs.environment = pmf_from_json(j.at("environment"));
      inputs.location = pmf_from_json(j.at("location"));
      inputs.position = pmf_from_json(j.at("position"));
      inputs.context_pseudocount =
          j.value("context_pseudocount", inputs.context_pseudocount);
    }
    if (j.contains("noise")) {
      inputs.noise.alpha = j.at("noise").at("alpha").get<double>();
      inputs.noise.beta = j.at("noise").at("beta").get<double>();
    } else if (mode == TransformMode::kRawRssi) {
      inputs.noise = NoiseVariance{2.0, 10.0};
    }
    if (j.contains("grid")) {
      inputs.grid = j.at("grid").get<std::vector<double>>();
    }
    inputs.q = j.value("q", inputs.q);
    inputs.seed = j.value("seed", inputs.seed);
    return inputs;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid generative config: ") + e.what());
  }
}

/// Loads an observation model from either a fitted model document or a
/// generative build configuration (dispatched on the format field).
inline ObservationModel load_model(const std::filesystem::path& path,
                                   std::optional<TransformMode> expect_mode =
                                       std::nullopt) {
  const nlohmann::json j = detail::parse_json_file(path);
  const std::string format = j.value("format", "");
  ObservationModel model;
  if (format == kGenerativeFormat) {
    const TransformMode mode =
        j.contains("mode") ? mode_from_name(j.at("mode").get<std::string>())
                           : expect_mode.value_or(TransformMode::kLogNegRssi);
    model = build_generative_model(
        generative_inputs_from_json(j, path.parent_path(), mode), mode);
  } else {
    model = model_from_json(j);
  }
  if (expect_mode && model.mode != *expect_mode) {
    throw ConfigError("model mode '" + std::string(mode_name(model.mode)) +
                      "' does not match requested mode '" +
                      std::string(mode_name(*expect_mode)) + "'");
  }
  return model;
}

/// One scenario reference inside a manifest; paths are relative to the
/// manifest file.
struct ManifestEntry {
  std::string id;
  std::string rssi_csv;
  std::string truth_csv;  // empty = none
  std::string label;
  std::string proximity;
  std::optional<double> truth_bound_m;
};

inline void write_manifest(const std::filesystem::path& path,
                           TransformMode mode, double delta_t,
                           std::span<const ManifestEntry> entries) {
  nlohmann::json j;
  j["format"] = kManifestFormat;
  j["mode"] = mode_name(mode);
  j["delta_t"] = delta_t;
  j["scenarios"] = nlohmann::json::array();
  for (const ManifestEntry& e : entries) {
    nlohmann::json s;
    s["id"] = e.id;
    s["rssi_csv"] = e.rssi_csv;
    if (!e.truth_csv.empty()) s["truth_csv"] = e.truth_csv;
    if (!e.label.empty()) s["label"] = e.label;
    if (!e.proximity.empty()) s["proximity"] = e.proximity;
    if (e.truth_bound_m) s["truth_bound_m"] = *e.truth_bound_m;
    j["scenarios"].push_back(std::move(s));
  }
  detail::write_json_file(path, j);
}

/// Loads a manifest and parses every referenced scenario. Ground truth
/// comes from a truth sidecar when given (which also pins the time base),
/// otherwise from a distance_m column, otherwise the scenario has none.
inline Dataset load_manifest(const std::filesystem::path& path) {
  const nlohmann::json j = detail::parse_json_file(path);
  const std::filesystem::path base = path.parent_path();
  try {
    if (j.value("format", "") != kManifestFormat) {
      throw ConfigError("not a manifest document (format field mismatch)");
    }
    Dataset dataset;
    dataset.mode = mode_from_name(j.at("mode").get<std::string>());
    dataset.delta_t = j.at("delta_t").get<double>();
    if (!(dataset.delta_t > 0.0)) {
      throw ConfigError("manifest delta_t must be positive");
    }
    for (const nlohmann::json& s : j.at("scenarios")) {
      DatasetEntry entry;
      ScenarioFormat format;
      format.id = s.at("id").get<std::string>();
      format.delta_t = dataset.delta_t;
      format.mode = dataset.mode;
      entry.label = s.value("label", "");
      entry.proximity = s.value("proximity", "");
      entry.truth_bound_m = s.value("truth_bound_m", 0.0);

      std::vector<double> truth;
      if (s.contains("truth_csv")) {
        auto truth_in =
            detail::open_input(base / s.at("truth_csv").get<std::string>());
        truth = load_truth_csv(truth_in);
      }
      if (!truth.empty()) {
        format.anchor_at_zero = true;
        format.forced_steps = static_cast<int>(truth.size());
      }
      auto rssi_in =
          detail::open_input(base / s.at("rssi_csv").get<std::string>());
      entry.scenario = parse_scenario(rssi_in, format);
      if (!truth.empty()) {
        entry.scenario.truth = std::move(truth);
        entry.scenario.validate();
      }
      dataset.entries.push_back(std::move(entry));
    }
    if (dataset.entries.empty()) {
      throw ConfigError("manifest lists no scenarios");
    }
    return dataset;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid manifest " + path.string() + ": " + e.what());
  }
}

inline nlohmann::json train_result_to_json(const CvTrainResult& result,
                                           MeanForm form, TransformMode mode) {
  nlohmann::json j;
  j["format"] = kTrainFormat;
  j["mode"] = mode_name(mode);
  j["form"] = form_name(form);
  j["deployed"] = {{"theta_mu1", result.deployed.mu1},
                   {"theta_mu2", result.deployed.mu2},
                   {"theta_r", result.deployed.r},
                   {"q", result.deployed.q}};
  j["deployed_fold"] = result.deployed_fold;
  j["fold_assignment"] = result.fold_assignment;
  j["validation_scores"] = result.validation_scores;
  j["folds"] = nlohmann::json::array();
  for (const TrainReport& report : result.fold_reports) {
    nlohmann::json f;
    f["best_theta"] = report.best_theta;
    f["best_value"] = report.best_value;
    f["trace"] = nlohmann::json::array();
    for (const TrainEval& e : report.trace) {
      f["trace"].push_back({{"theta", e.theta}, {"value", e.value}});
    }
    j["folds"].push_back(std::move(f));
  }
  return j;
}

struct EvaluationRow {
  std::string id;
  std::string label;
  double total_risk = 0.0;
  std::optional<double> relative_risk;
};

struct Evaluation {
  std::vector<EvaluationRow> rows;
  std::optional<double> auc;
};

inline nlohmann::json evaluation_to_json(const Evaluation& evaluation) {
  nlohmann::json j;
  j["format"] = kEvalFormat;
  if (evaluation.auc) j["auc"] = *evaluation.auc;
  j["scenarios"] = nlohmann::json::array();
  for (const EvaluationRow& row : evaluation.rows) {
    nlohmann::json s;
    s["id"] = row.id;
    s["label"] = row.label;
    s["total_risk"] = row.total_risk;
    if (row.relative_risk) s["relative_risk"] = *row.relative_risk;
    j["scenarios"].push_back(std::move(s));
  }
  return j;
}

inline void write_evaluation_csv(std::ostream& out,
                                 const Evaluation& evaluation) {
  out << "id,label,total_risk,relative_risk\n";
  for (const EvaluationRow& row : evaluation.rows) {
    out << row.id << "," << row.label << "," << fmt_g(row.total_risk) << ",";
    if (row.relative_risk) out << fmt_g(*row.relative_risk);
    out << "\n";
  }
}

}  // namespace proxkit
