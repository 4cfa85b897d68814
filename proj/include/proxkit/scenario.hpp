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
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "proxkit/csv.hpp"
#include "proxkit/errors.hpp"
#include "proxkit/transform.hpp"

namespace proxkit {

/// One raw Bluetooth reading.
struct RssiSample {
  double time_s = 0.0;
  double rssi_dbm = 0.0;
};

/// A timestamped value in observation space.
struct TimedValue {
  double time_s = 0.0;
  double value = 0.0;
};

/// One resampled observation: slot index t in 1..T, transformed value x.
struct Observation {
  int t = 0;
  double x = 0.0;
};

/// One device-pair encounter: a periodic time base t = 1..steps, optional
/// per-step ground-truth distances, and an aperiodic subsequence of
/// observations in transformed space.
struct Scenario {
  std::string id;
  double delta_t = 1.0;
  TransformMode mode = TransformMode::kLogNegRssi;
  int steps = 0;
  std::vector<double> truth;  // empty, or one distance per step, all > 0
  std::vector<Observation> observations;

  bool has_truth() const { return !truth.empty(); }

  void validate() const {
    if (steps < 1) throw EmptySequence("scenario '" + id + "' has no steps");
    if (!(delta_t > 0.0)) {
      throw InvalidDistribution("delta_t must be positive");
    }
    if (!truth.empty() && truth.size() != static_cast<std::size_t>(steps)) {
      throw LengthMismatch("scenario '" + id + "': truth length " +
                           std::to_string(truth.size()) + " != steps " +
                           std::to_string(steps));
    }
    for (double d : truth) {
      if (!(d > 0.0)) {
        throw InvalidDistribution("ground-truth distances must be positive");
      }
    }
    int prev = 0;
    for (const Observation& o : observations) {
      if (o.t <= prev || o.t > steps) {
        throw InvalidDistribution(
            "observation indices must be strictly increasing within 1..steps");
      }
      prev = o.t;
    }
  }
};

/// Result of aligning raw samples onto the periodic grid. slots[i] carries
/// the mean transformed value for step t = i + 1, or nullopt when the slot
/// received no samples. first_bin is the absolute bin index of step 1.
struct ResampleResult {
  long first_bin = 0;
  std::vector<std::optional<double>> slots;
};

/// Buckets samples into half-open bins [k*delta_t, (k+1)*delta_t) and
/// averages within each bin. By default step 1 is the first occupied bin;
/// anchor_bin pins it (with forced_steps fixing T) so that externally
/// indexed ground truth stays aligned when leading samples are missing.
/// Samples falling before the anchor or past the forced horizon are dropped.
inline ResampleResult resample(std::span<const TimedValue> samples,
                               double delta_t,
                               std::optional<long> anchor_bin = std::nullopt,
                               std::optional<int> forced_steps = std::nullopt) {
  if (!(delta_t > 0.0)) throw InvalidDistribution("delta_t must be positive");
  if (samples.empty()) throw EmptySequence("no samples to resample");

  std::vector<TimedValue> sorted(samples.begin(), samples.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TimedValue& a, const TimedValue& b) {
                     return a.time_s < b.time_s;
                   });

  const auto bin_of = [delta_t](double time_s) {
    return static_cast<long>(std::floor(time_s / delta_t));
  };

  ResampleResult out;
  out.first_bin = anchor_bin.value_or(bin_of(sorted.front().time_s));
  long last_bin = bin_of(sorted.back().time_s);
  if (forced_steps) {
    last_bin = out.first_bin + *forced_steps - 1;
  }
  if (last_bin < out.first_bin) throw EmptySequence("empty resampling window");

  out.slots.assign(static_cast<std::size_t>(last_bin - out.first_bin + 1),
                   std::nullopt);
  std::vector<long> counts(out.slots.size(), 0);
  for (const TimedValue& s : sorted) {
    const long bin = bin_of(s.time_s);
    if (bin < out.first_bin || bin > last_bin) continue;
    const std::size_t i = static_cast<std::size_t>(bin - out.first_bin);
    out.slots[i] = out.slots[i].value_or(0.0) + s.value;
    ++counts[i];
  }
  for (std::size_t i = 0; i < out.slots.size(); ++i) {
    if (counts[i] > 0) *out.slots[i] /= static_cast<double>(counts[i]);
  }
  return out;
}

/// Nearest-neighbour alignment of irregular truth samples to slot centres
/// (first_bin + t - 0.5) * delta_t.
inline std::vector<double> align_truth(std::span<const TimedValue> truth,
                                       long first_bin, int steps,
                                       double delta_t) {
  if (truth.empty()) throw EmptySequence("no ground-truth samples");
  std::vector<TimedValue> sorted(truth.begin(), truth.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TimedValue& a, const TimedValue& b) {
                     return a.time_s < b.time_s;
                   });
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int t = 1; t <= steps; ++t) {
    const double centre =
        (static_cast<double>(first_bin) + t - 0.5) * delta_t;
    const auto it = std::lower_bound(
        sorted.begin(), sorted.end(), centre,
        [](const TimedValue& s, double c) { return s.time_s < c; });
    double best = 0.0;
    if (it == sorted.end()) {
      best = sorted.back().value;
    } else if (it == sorted.begin()) {
      best = sorted.front().value;
    } else {
      const TimedValue& hi = *it;
      const TimedValue& lo = *(it - 1);
      best = (centre - lo.time_s <= hi.time_s - centre) ? lo.value : hi.value;
    }
    out[static_cast<std::size_t>(t - 1)] = best;
  }
  return out;
}

/// Parsing options for one scenario CSV.
struct ScenarioFormat {
  std::string id;
  double delta_t = 1.0;
  TransformMode mode = TransformMode::kLogNegRssi;
  // Pins step 1 to absolute bin 0 and the horizon to forced_steps; used when
  // ground truth is supplied in slot indices by a sidecar file.
  bool anchor_at_zero = false;
  std::optional<int> forced_steps;
  // Constant ground-truth distance for bound-only datasets.
  std::optional<double> truth_bound_m;
};

/// Reads a `time_s,rssi_dbm[,distance_m]` CSV into a Scenario: parse, sort
/// by time, transform, resample, and (when present) align ground truth.
inline Scenario parse_scenario(std::istream& in, const ScenarioFormat& format) {
  const CsvTable table = read_csv(in);
  const std::size_t time_col = column_index(table, "time_s");
  const std::size_t rssi_col = column_index(table, "rssi_dbm");
  const bool with_truth = has_column(table, "distance_m");
  const std::size_t dist_col = with_truth ? column_index(table, "distance_m") : 0;

  std::vector<TimedValue> values;
  std::vector<TimedValue> truth_samples;
  values.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const long line_no = table.line_numbers[i];
    const double time_s =
        parse_csv_number(table.rows[i][time_col], "time_s", line_no);
    if (!(time_s >= 0.0)) {
      throw MalformedRow("line " + std::to_string(line_no) +
                         ": negative time_s");
    }
    const double rssi =
        parse_csv_number(table.rows[i][rssi_col], "rssi_dbm", line_no);
    values.push_back({time_s, transform_observation(rssi, format.mode)});
    if (with_truth) {
      const double d =
          parse_csv_number(table.rows[i][dist_col], "distance_m", line_no);
      if (!(d > 0.0)) {
        throw MalformedRow("line " + std::to_string(line_no) +
                           ": non-positive distance_m");
      }
      truth_samples.push_back({time_s, d});
    }
  }
  if (values.empty()) throw EmptyFile("scenario CSV has no data rows");

  const std::optional<long> anchor =
      format.anchor_at_zero ? std::optional<long>(0) : std::nullopt;
  const ResampleResult resampled =
      resample(values, format.delta_t, anchor, format.forced_steps);

  Scenario scenario;
  scenario.id = format.id;
  scenario.delta_t = format.delta_t;
  scenario.mode = format.mode;
  scenario.steps = static_cast<int>(resampled.slots.size());
  for (int t = 1; t <= scenario.steps; ++t) {
    const auto& slot = resampled.slots[static_cast<std::size_t>(t - 1)];
    if (slot) scenario.observations.push_back({t, *slot});
  }
  if (with_truth) {
    scenario.truth = align_truth(truth_samples, resampled.first_bin,
                                 scenario.steps, format.delta_t);
  } else if (format.truth_bound_m) {
    scenario.truth.assign(static_cast<std::size_t>(scenario.steps),
                          *format.truth_bound_m);
  }
  scenario.validate();
  return scenario;
}

/// Loads a `t,distance_m` sidecar; t must run contiguously from 1.
inline std::vector<double> load_truth_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  const std::size_t t_col = column_index(table, "t");
  const std::size_t d_col = column_index(table, "distance_m");
  std::vector<double> truth;
  truth.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const long line_no = table.line_numbers[i];
    const double t = parse_csv_number(table.rows[i][t_col], "t", line_no);
    if (t != static_cast<double>(i + 1)) {
      throw MalformedRow("line " + std::to_string(line_no) +
                         ": truth index must run contiguously from 1");
    }
    const double d =
        parse_csv_number(table.rows[i][d_col], "distance_m", line_no);
    if (!(d > 0.0)) {
      throw MalformedRow("line " + std::to_string(line_no) +
                         ": non-positive distance_m");
    }
    truth.push_back(d);
  }
  if (truth.empty()) throw EmptyFile("truth CSV has no data rows");
  return truth;
}

/// Writes observations back to the raw CSV format, placing each at its slot
/// centre and undoing the transform.
inline void write_scenario_csv(std::ostream& out,
                               std::span<const Observation> observations,
                               TransformMode mode, double delta_t) {
  out << "time_s,rssi_dbm\n";
  for (const Observation& o : observations) {
    const double time_s = (o.t - 0.5) * delta_t;
    out << fmt_g(time_s) << "," << fmt_g(untransform_observation(o.x, mode))
        << "\n";
  }
}

inline void write_truth_csv(std::ostream& out, std::span<const double> truth) {
  out << "t,distance_m\n";
  for (std::size_t i = 0; i < truth.size(); ++i) {
    out << (i + 1) << "," << fmt_g(truth[i]) << "\n";
  }
}

/// One manifest entry: a scenario plus evaluation metadata.
struct DatasetEntry {
  Scenario scenario;
  std::string label;      // "positive", "negative", or empty
  std::string proximity;  // stratification tag for cross-validation
  double truth_bound_m = 0.0;  // 0 = no bound
};

struct Dataset {
  TransformMode mode = TransformMode::kLogNegRssi;
  double delta_t = 1.0;
  std::vector<DatasetEntry> entries;
};

}  // namespace proxkit
