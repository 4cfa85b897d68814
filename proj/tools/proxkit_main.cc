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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "proxkit/proxkit.hpp"

namespace fs = std::filesystem;

namespace {

/// CLI11 reads config files only on the root command, so subcommand --config
/// is expanded by hand before parsing: each entry of the flat JSON object
/// {"flag-name": value, ...} becomes a "--flag-name=value" token inserted
/// ahead of the user's own flags, which therefore override the file.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(std::string("--config=").size());
    }
  }
  if (path.empty()) return args;

  const nlohmann::json doc = proxkit::detail::parse_json_file(path);
  if (!doc.is_object()) {
    throw proxkit::ConfigError("config must be a JSON object: " + path);
  }
  std::vector<std::string> expanded;
  expanded.push_back(args.front());
  for (const auto& [key, value] : doc.items()) {
    if (key == "config") {
      throw proxkit::ConfigError("config files cannot set --config");
    }
    const auto emit = [&](const nlohmann::json& v) {
      expanded.push_back("--" + key + "=" +
                         (v.is_string() ? v.get<std::string>() : v.dump()));
    };
    if (value.is_array()) {
      for (const nlohmann::json& v : value) emit(v);
    } else {
      emit(value);
    }
  }
  expanded.insert(expanded.end(), args.begin() + 1, args.end());
  return expanded;
}

struct CommonOptions {
  std::string mode = "lognormal";
  double dt = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string config;
};

void add_common(CLI::App* sub, CommonOptions* common) {
  sub->add_option("--mode", common->mode, "Observation space: lognormal | gaussian")
      ->check(CLI::IsMember({"lognormal", "gaussian"}));
  sub->add_option("--dt", common->dt, "Resampling step, seconds");
  sub->add_option("--seed", common->seed, "Root random seed");
  sub->add_option("--out", common->out, "Output directory")->required();
  sub->add_option("--config", common->config,
                  "JSON config file, {\"flag-name\": value, ...}; "
                  "flags override file values");
}

struct SmootherOptions {
  double init_mean = 2.0;
  double init_var = 4.0;
  double ut_alpha = 1.0;
  double ut_beta = 2.0;
  double ut_kappa = 2.0;
  double q_override = 0.0;  // 0 = use the model's q
};

void add_smoother(CLI::App* sub, SmootherOptions* opts) {
  sub->add_option("--init-mean", opts->init_mean, "Prior mean over distance, m");
  sub->add_option("--init-var", opts->init_var, "Prior variance, m^2");
  sub->add_option("--ut-alpha", opts->ut_alpha, "Sigma-point spread");
  sub->add_option("--ut-beta", opts->ut_beta, "Prior-knowledge weight");
  sub->add_option("--ut-kappa", opts->ut_kappa, "Secondary scaling");
  sub->add_option("--q", opts->q_override,
                  "Transition variance override (0 = model value)");
}

proxkit::SmootherSettings smoother_settings(const SmootherOptions& opts) {
  proxkit::SmootherSettings settings;
  settings.init = {opts.init_mean, opts.init_var};
  settings.ut = {opts.ut_alpha, opts.ut_beta, opts.ut_kappa};
  try {
    settings.init.validate();
    settings.ut.validate();
  } catch (const proxkit::Error& e) {
    // Flag values are configuration, not data.
    throw proxkit::ConfigError(e.what());
  }
  return settings;
}

/// Model specifier: "preset:known-pair" or a path to a model / generative
/// build document.
proxkit::ObservationModel resolve_model(const std::string& spec,
                                        proxkit::TransformMode mode) {
  if (spec == "preset:known-pair") return proxkit::known_pair_model(mode);
  return proxkit::load_model(fs::path(spec), mode);
}

fs::path ensure_out_dir(const std::string& out) {
  const fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw proxkit::ConfigError("cannot create output directory " +
                               dir.string());
  }
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw proxkit::ConfigError("cannot write " + path.string());
  return out;
}

double bound_risk(const proxkit::DatasetEntry& entry) {
  const proxkit::Scenario& sc = entry.scenario;
  if (entry.truth_bound_m > 0.0) {
    return static_cast<double>(sc.steps) *
           proxkit::risk_step(entry.truth_bound_m, sc.delta_t);
  }
  return proxkit::scenario_risk(sc.truth, sc.delta_t).total;
}

bool has_bound(const proxkit::DatasetEntry& entry) {
  return entry.truth_bound_m > 0.0 || entry.scenario.has_truth();
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  CommonOptions common;
  int count = 1;
  int steps = 1000;
  double q_sim = 0.09;
  double init_distance = 2.0;
  std::string geometry = "circle";
  double radius = 2.0;
  double dropout = 0.5;
  std::string model = "preset:known-pair";
  std::string id_prefix = "scenario";
  std::string label;
  std::string proximity;
  double truth_bound = 0.0;
};

int run_simulate(const SimulateOptions& opts) {
  const proxkit::TransformMode mode = proxkit::mode_from_name(opts.common.mode);
  const proxkit::ObservationModel model = resolve_model(opts.model, mode);
  const fs::path dir = ensure_out_dir(opts.common.out);

  std::vector<proxkit::ManifestEntry> entries;
  for (int i = 0; i < opts.count; ++i) {
    const std::string id = opts.id_prefix + "_" + std::to_string(i);

    proxkit::WalkConfig walk;
    walk.steps = opts.steps;
    walk.q_sim = opts.q_sim;
    walk.init_distance_m = opts.init_distance;
    walk.geometry = opts.geometry == "line" ? proxkit::WalkGeometry::kFoldedLine
                                            : proxkit::WalkGeometry::kCircle;
    walk.radius_m = opts.radius;
    walk.seed = proxkit::derive_seed(opts.common.seed, id + "/walk");
    const std::vector<double> truth = proxkit::random_walk(walk);

    proxkit::ObsConfig obs_config;
    obs_config.dropout = opts.dropout;
    obs_config.seed = proxkit::derive_seed(opts.common.seed, id + "/obs");
    const std::vector<proxkit::Observation> observations =
        proxkit::sample_observations(truth, model, obs_config);

    {
      auto out = open_output(dir / (id + "_rssi.csv"));
      proxkit::write_scenario_csv(out, observations, mode, opts.common.dt);
    }
    {
      auto out = open_output(dir / (id + "_truth.csv"));
      proxkit::write_truth_csv(out, truth);
    }

    proxkit::ManifestEntry entry;
    entry.id = id;
    entry.rssi_csv = id + "_rssi.csv";
    entry.truth_csv = id + "_truth.csv";
    entry.label = opts.label;
    entry.proximity = opts.proximity;
    if (opts.truth_bound > 0.0) entry.truth_bound_m = opts.truth_bound;
    entries.push_back(std::move(entry));
  }
  proxkit::write_manifest(dir / "manifest.json", mode, opts.common.dt, entries);
  return 0;
}

// ---------------------------------------------------------------------------
// smooth

struct SmoothOptions {
  CommonOptions common;
  SmootherOptions smoother;
  std::string model = "preset:known-pair";
  std::string manifest;
  std::string rssi;
  std::string truth;
  double truth_bound = 0.0;
};

proxkit::Dataset load_input_dataset(const CommonOptions& common,
                                    const std::string& manifest,
                                    const std::string& rssi,
                                    const std::string& truth,
                                    double truth_bound) {
  if (!manifest.empty()) return proxkit::load_manifest(fs::path(manifest));
  if (rssi.empty()) {
    throw proxkit::ConfigError("either --manifest or --rssi is required");
  }
  proxkit::Dataset dataset;
  dataset.mode = proxkit::mode_from_name(common.mode);
  dataset.delta_t = common.dt;

  proxkit::DatasetEntry entry;
  proxkit::ScenarioFormat format;
  format.id = fs::path(rssi).stem().string();
  format.delta_t = common.dt;
  format.mode = dataset.mode;
  std::vector<double> sidecar;
  if (!truth.empty()) {
    std::ifstream truth_in(truth);
    if (!truth_in) throw proxkit::ConfigError("cannot open " + truth);
    sidecar = proxkit::load_truth_csv(truth_in);
    format.anchor_at_zero = true;
    format.forced_steps = static_cast<int>(sidecar.size());
  }
  std::ifstream in(rssi);
  if (!in) throw proxkit::ConfigError("cannot open " + rssi);
  entry.scenario = proxkit::parse_scenario(in, format);
  if (!sidecar.empty()) {
    entry.scenario.truth = std::move(sidecar);
    entry.scenario.validate();
  }
  if (truth_bound > 0.0) entry.truth_bound_m = truth_bound;
  dataset.entries.push_back(std::move(entry));
  return dataset;
}

int run_smooth(const SmoothOptions& opts) {
  const proxkit::TransformMode mode = proxkit::mode_from_name(opts.common.mode);
  const proxkit::ObservationModel model = resolve_model(opts.model, mode);
  const proxkit::Dataset dataset =
      load_input_dataset(opts.common, opts.manifest, opts.rssi, opts.truth,
                         opts.truth_bound);
  if (dataset.mode != mode) {
    throw proxkit::ConfigError("manifest mode differs from --mode");
  }
  const proxkit::SmootherSettings settings = smoother_settings(opts.smoother);
  const double q = opts.smoother.q_override > 0.0 ? opts.smoother.q_override
                                                  : model.q;
  const fs::path dir = ensure_out_dir(opts.common.out);

  nlohmann::json summary;
  summary["format"] = "proxkit-smooth-summary-v1";
  summary["scenarios"] = nlohmann::json::array();
  for (const proxkit::DatasetEntry& entry : dataset.entries) {
    const proxkit::SmoothResult result =
        proxkit::smooth(entry.scenario, model, q, settings.init, settings.ut);
    {
      auto out = open_output(dir / (entry.scenario.id + "_smooth.csv"));
      proxkit::write_smooth_csv(out, result);
    }
    std::vector<double> means;
    means.reserve(result.smoothed.size());
    for (const proxkit::GaussBelief& b : result.smoothed) {
      means.push_back(b.mean);
    }
    const proxkit::RiskScore risk =
        proxkit::scenario_risk(means, entry.scenario.delta_t);
    {
      auto out = open_output(dir / (entry.scenario.id + "_risk.csv"));
      out << "t,risk_step\n";
      for (std::size_t t = 0; t < risk.per_step.size(); ++t) {
        out << (t + 1) << "," << proxkit::fmt_g(risk.per_step[t]) << "\n";
      }
    }
    nlohmann::json row;
    row["id"] = entry.scenario.id;
    row["total_risk"] = risk.total;
    if (has_bound(entry)) {
      row["relative_risk"] = risk.total - bound_risk(entry);
    }
    summary["scenarios"].push_back(std::move(row));
  }
  proxkit::detail::write_json_file(dir / "summary.json", summary);
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  CommonOptions common;
  SmootherOptions smoother;
  std::string manifest;
  std::string objective = "proximity";
  std::string form = "log_linear";
  int folds = 3;
  int init_points = 10;
  int rounds = 100;
  bool relax_stratification = false;
};

int run_train(const TrainOptions& opts) {
  const proxkit::Dataset dataset = proxkit::load_manifest(fs::path(opts.manifest));
  const proxkit::TransformMode mode = proxkit::mode_from_name(opts.common.mode);
  if (dataset.mode != mode) {
    throw proxkit::ConfigError("manifest mode differs from --mode");
  }

  std::vector<proxkit::Scenario> scenarios;
  std::vector<std::string> proximity;
  for (const proxkit::DatasetEntry& entry : dataset.entries) {
    scenarios.push_back(entry.scenario);
    proximity.push_back(entry.proximity);
  }

  proxkit::TrainConfig config;
  config.objective = proxkit::objective_from_name(opts.objective);
  config.form = proxkit::form_from_name(opts.form);
  config.mode = mode;
  config.folds = opts.folds;
  config.init_points = opts.init_points;
  config.rounds = opts.rounds;
  config.seed = opts.common.seed;
  config.strict_stratification = !opts.relax_stratification;
  config.settings = smoother_settings(opts.smoother);

  const proxkit::CvTrainResult result =
      proxkit::train_discriminative(scenarios, proximity, config);

  const fs::path dir = ensure_out_dir(opts.common.out);
  const proxkit::ObservationModel model =
      proxkit::make_discriminative_model(result.deployed, config.form, mode);
  proxkit::save_model(dir / "model.json", model);
  proxkit::detail::write_json_file(
      dir / "train_report.json",
      proxkit::train_result_to_json(result, config.form, mode));
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  CommonOptions common;
  SmootherOptions smoother;
  std::string manifest;
  std::string model = "preset:known-pair";
};

int run_evaluate(const EvaluateOptions& opts) {
  const proxkit::TransformMode mode = proxkit::mode_from_name(opts.common.mode);
  const proxkit::ObservationModel model = resolve_model(opts.model, mode);
  const proxkit::Dataset dataset = proxkit::load_manifest(fs::path(opts.manifest));
  if (dataset.mode != mode) {
    throw proxkit::ConfigError("manifest mode differs from --mode");
  }
  const proxkit::SmootherSettings settings = smoother_settings(opts.smoother);
  const double q = opts.smoother.q_override > 0.0 ? opts.smoother.q_override
                                                  : model.q;

  proxkit::Evaluation evaluation;
  std::vector<proxkit::LabeledScore> scores;
  for (const proxkit::DatasetEntry& entry : dataset.entries) {
    const proxkit::SmoothResult result =
        proxkit::smooth(entry.scenario, model, q, settings.init, settings.ut);
    std::vector<double> means;
    means.reserve(result.smoothed.size());
    for (const proxkit::GaussBelief& b : result.smoothed) {
      means.push_back(b.mean);
    }
    proxkit::EvaluationRow row;
    row.id = entry.scenario.id;
    row.label = entry.label;
    row.total_risk = proxkit::scenario_risk(means, entry.scenario.delta_t).total;
    if (has_bound(entry)) {
      row.relative_risk = row.total_risk - bound_risk(entry);
    }
    if (entry.label == "positive" || entry.label == "negative") {
      scores.push_back({entry.label == "positive", row.total_risk});
    } else if (!entry.label.empty()) {
      throw proxkit::DataError("unknown label '" + entry.label +
                               "' (expected positive or negative)");
    }
    evaluation.rows.push_back(std::move(row));
  }
  evaluation.auc = proxkit::roc_auc(scores);

  const fs::path dir = ensure_out_dir(opts.common.out);
  proxkit::detail::write_json_file(dir / "evaluation.json",
                                   proxkit::evaluation_to_json(evaluation));
  auto csv = open_output(dir / "evaluation.csv");
  proxkit::write_evaluation_csv(csv, evaluation);
  return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportOptions {
  CommonOptions common;
  std::string model;
  std::string smooth_csv;
  std::string evaluation;
};

int run_report(const ReportOptions& opts) {
  if (opts.model.empty() && opts.smooth_csv.empty() &&
      opts.evaluation.empty()) {
    throw proxkit::ConfigError(
        "report needs at least one of --model, --smooth-csv, --evaluation");
  }
  const fs::path dir = ensure_out_dir(opts.common.out);

  if (!opts.model.empty()) {
    const proxkit::TransformMode mode =
        proxkit::mode_from_name(opts.common.mode);
    const proxkit::ObservationModel model = resolve_model(opts.model, mode);
    std::vector<double> grid = model.grid;
    if (grid.empty()) {
      // Log-spaced band support over the risk-relevant range.
      const double lo = std::log(0.25), hi = std::log(8.0);
      for (int i = 0; i < 33; ++i) {
        grid.push_back(std::exp(lo + (hi - lo) * i / 32.0));
      }
    }
    auto out = open_output(dir / "gp_band.csv");
    out << "d,mean,lo,hi\n";
    const double z95 = 1.6448536269514722;
    for (double d : grid) {
      const double mu = model.mean(d);
      const double sd = std::sqrt(model.var(d));
      out << proxkit::fmt_g(d) << "," << proxkit::fmt_g(mu) << ","
          << proxkit::fmt_g(mu - z95 * sd) << ","
          << proxkit::fmt_g(mu + z95 * sd) << "\n";
    }
  }

  if (!opts.smooth_csv.empty()) {
    std::ifstream in(opts.smooth_csv);
    if (!in) throw proxkit::ConfigError("cannot open " + opts.smooth_csv);
    const proxkit::CsvTable table = proxkit::read_csv(in);
    if (table.header !=
        proxkit::split_csv_line(proxkit::kSmoothCsvHeader)) {
      throw proxkit::DataError("unexpected smoothing CSV schema in " +
                               opts.smooth_csv);
    }
    auto out = open_output(dir / "timeseries.csv");
    out << proxkit::kSmoothCsvHeader << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << row[i];
      }
      out << "\n";
    }
  }

  if (!opts.evaluation.empty()) {
    const nlohmann::json j =
        proxkit::detail::parse_json_file(fs::path(opts.evaluation));
    if (j.value("format", "") != proxkit::kEvalFormat) {
      throw proxkit::DataError("not an evaluation document: " +
                               opts.evaluation);
    }
    auto out = open_output(dir / "risk_scatter.csv");
    out << "id,label,total_risk,relative_risk\n";
    for (const nlohmann::json& s : j.at("scenarios")) {
      out << s.at("id").get<std::string>() << ","
          << s.value("label", std::string()) << ","
          << proxkit::fmt_g(s.at("total_risk").get<double>()) << ",";
      if (s.contains("relative_risk")) {
        out << proxkit::fmt_g(s.at("relative_risk").get<double>());
      }
      out << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posterior distance and exposure-risk inference from Bluetooth "
               "RSSI sequences"};
  app.require_subcommand(1);

  SimulateOptions simulate_opts;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Generate synthetic encounter scenarios");
  add_common(simulate, &simulate_opts.common);
  simulate->add_option("--count", simulate_opts.count, "Number of scenarios");
  simulate->add_option("--steps", simulate_opts.steps, "Trajectory length");
  simulate->add_option("--q-sim", simulate_opts.q_sim, "Walk step variance");
  simulate->add_option("--init-distance", simulate_opts.init_distance,
                       "Initial separation, m");
  simulate->add_option("--geometry", simulate_opts.geometry,
                       "Walk geometry: line | circle")
      ->check(CLI::IsMember({"line", "circle"}));
  simulate->add_option("--radius", simulate_opts.radius, "Circle radius, m");
  simulate->add_option("--dropout", simulate_opts.dropout,
                       "Per-step observation dropout probability");
  simulate->add_option("--model", simulate_opts.model,
                       "Observation model: path or preset:known-pair");
  simulate->add_option("--id-prefix", simulate_opts.id_prefix, "Scenario ids");
  simulate->add_option("--label", simulate_opts.label,
                       "Class label stamped into the manifest");
  simulate->add_option("--proximity", simulate_opts.proximity,
                       "Stratification tag stamped into the manifest");
  simulate->add_option("--truth-bound", simulate_opts.truth_bound,
                       "Truth bound stamped into the manifest, m");

  SmoothOptions smooth_opts;
  CLI::App* smooth = app.add_subcommand(
      "smooth", "Run the unscented smoother over scenarios");
  add_common(smooth, &smooth_opts.common);
  add_smoother(smooth, &smooth_opts.smoother);
  smooth->add_option("--model", smooth_opts.model,
                     "Observation model: path or preset:known-pair");
  smooth->add_option("--manifest", smooth_opts.manifest, "Scenario manifest");
  smooth->add_option("--rssi", smooth_opts.rssi, "Single scenario CSV");
  smooth->add_option("--truth", smooth_opts.truth, "Truth sidecar CSV");
  smooth->add_option("--truth-bound", smooth_opts.truth_bound,
                     "Constant truth bound, m");

  TrainOptions train_opts;
  CLI::App* train = app.add_subcommand(
      "train", "Fit discriminative model parameters by Bayesian optimization");
  add_common(train, &train_opts.common);
  add_smoother(train, &train_opts.smoother);
  train->add_option("--manifest", train_opts.manifest, "Scenario manifest")
      ->required();
  train->add_option("--objective", train_opts.objective,
                    "Training objective: proximity | risk")
      ->check(CLI::IsMember({"proximity", "risk"}));
  train->add_option("--form", train_opts.form,
                    "Mean form: scaled_base | log_linear")
      ->check(CLI::IsMember({"scaled_base", "log_linear"}));
  train->add_option("--folds", train_opts.folds, "Cross-validation folds");
  train->add_option("--init-points", train_opts.init_points,
                    "Initial quasi-random evaluations");
  train->add_option("--rounds", train_opts.rounds, "Optimization rounds");
  train->add_flag("--relax-stratification", train_opts.relax_stratification,
                  "Allow proximity groups smaller than the fold count");

  EvaluateOptions evaluate_opts;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score labeled scenarios and compute ROC AUC");
  add_common(evaluate, &evaluate_opts.common);
  add_smoother(evaluate, &evaluate_opts.smoother);
  evaluate->add_option("--manifest", evaluate_opts.manifest,
                       "Scenario manifest")->required();
  evaluate->add_option("--model", evaluate_opts.model,
                       "Observation model: path or preset:known-pair");

  ReportOptions report_opts;
  CLI::App* report = app.add_subcommand(
      "report", "Collate outputs into plot-ready data series");
  add_common(report, &report_opts.common);
  report->add_option("--model", report_opts.model, "Model JSON for GP bands");
  report->add_option("--smooth-csv", report_opts.smooth_csv,
                     "Smoothing output CSV to collate");
  report->add_option("--evaluation", report_opts.evaluation,
                     "Evaluation JSON for the risk scatter");

  // Values injected from a config file come first, so "last wins" makes
  // explicit flags override the file.
  for (CLI::App* sub : {simulate, smooth, train, evaluate, report}) {
    for (CLI::Option* opt : sub->get_options()) {
      if (opt->get_expected_min() >= 1) {
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
      }
    }
  }

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const proxkit::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back.

  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(simulate_opts);
    if (smooth->parsed()) return run_smooth(smooth_opts);
    if (train->parsed()) return run_train(train_opts);
    if (evaluate->parsed()) return run_evaluate(evaluate_opts);
    if (report->parsed()) return run_report(report_opts);
    throw proxkit::ConfigError("no command selected");
  } catch (const proxkit::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const proxkit::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const proxkit::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
