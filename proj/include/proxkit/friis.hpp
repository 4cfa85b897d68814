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
#include <numbers>
#include <string>

#include "proxkit/errors.hpp"
#include "proxkit/transform.hpp"

namespace proxkit {

/// Carrier wavelength of the 2.4 GHz advertising band, metres.
inline constexpr double kBluetoothWavelengthM = 0.125;

/// Distance below which the free-space gain turns non-negative and the
/// log-negated observation space degenerates: lambda / (4 pi).
inline double min_model_distance(double wavelength_m = kBluetoothWavelengthM) {
  return wavelength_m / (4.0 * std::numbers::pi);
}

/// Free-space path gain in dB: 20 log10(lambda / (4 pi d)).
/// Negative for every d > lambda / (4 pi).
inline double friis_gain(double distance_m,
                         double wavelength_m = kBluetoothWavelengthM) {
  if (!(distance_m > 0.0) || !(wavelength_m > 0.0)) {
    throw DomainError("friis_gain requires positive distance and wavelength");
  }
  return 20.0 * std::log10(wavelength_m / (4.0 * std::numbers::pi * distance_m));
}

/// Idealized mean observation at distance d: the free-space gain mapped
/// into the active observation space.
inline double base_function(double distance_m, TransformMode mode,
                            double wavelength_m = kBluetoothWavelengthM) {
  const double g = friis_gain(distance_m, wavelength_m);
  if (mode == TransformMode::kRawRssi) return g;
  if (!(g < 0.0)) {
    throw DomainError("base function undefined at d = " +
                      std::to_string(distance_m) + " m: gain is non-negative");
  }
  return std::log(-g);
}

/// Converts an additive dBm offset epsilon (calibration residual, antenna
/// gain, context attenuation) into an additive shift in observation space
/// at distance d. In log space the image is log(1 - epsilon / g(d)), the
/// exact displacement of log(-(g + epsilon)) from log(-g).
inline double shift_to_x_space(double epsilon_dbm, double distance_m,
                               TransformMode mode,
                               double wavelength_m = kBluetoothWavelengthM) {
  if (mode == TransformMode::kRawRssi) return -epsilon_dbm;
  const double g = friis_gain(distance_m, wavelength_m);
  const double ratio = 1.0 - epsilon_dbm / g;
  if (!(ratio > 0.0)) {
    throw DomainError("shift epsilon = " + std::to_string(epsilon_dbm) +
                      " dBm exceeds the gain magnitude at d = " +
                      std::to_string(distance_m) + " m");
  }
  return std::log(ratio);
}

}  // namespace proxkit
