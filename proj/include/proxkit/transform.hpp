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
#include <string>
#include <string_view>

#include "proxkit/errors.hpp"

namespace proxkit {

/// Observation space used throughout a run. kLogNegRssi works on
/// x = log(-rssi) and models the residual as log-normal in -rssi;
/// kRawRssi works on the dBm value directly with Gaussian residuals.
enum class TransformMode {
  kLogNegRssi,
  kRawRssi,
};

/// CLI / file-format names. kLogNegRssi <-> "lognormal", kRawRssi <-> "gaussian".
inline std::string_view mode_name(TransformMode mode) {
  return mode == TransformMode::kLogNegRssi ? "lognormal" : "gaussian";
}

inline TransformMode mode_from_name(std::string_view name) {
  if (name == "lognormal") return TransformMode::kLogNegRssi;
  if (name == "gaussian") return TransformMode::kRawRssi;
  throw ConfigError("unknown mode: " + std::string(name));
}

/// Maps a raw RSSI reading (dBm) into observation space.
/// kLogNegRssi requires rssi < 0; zero or positive readings have no
/// log-negated image and are rejected.
inline double transform_observation(double rssi_dbm, TransformMode mode) {
  if (mode == TransformMode::kRawRssi) return rssi_dbm;
  if (!(rssi_dbm < 0.0)) {
    throw NonNegativeRssi("rssi must be negative for log(-rssi), got " +
                          std::to_string(rssi_dbm));
  }
  return std::log(-rssi_dbm);
}

/// Inverse of transform_observation. Used when emitting synthetic readings.
inline double untransform_observation(double x, TransformMode mode) {
  return mode == TransformMode::kRawRssi ? x : -std::exp(x);
}

}  // namespace proxkit
