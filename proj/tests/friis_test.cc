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

#include "proxkit/friis.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "proxkit/errors.hpp"

namespace proxkit {
namespace {

TEST(FriisGain, ValuesAtReferenceDistances) {
  EXPECT_NEAR(friis_gain(1.0), -40.0459970202808, 1e-10);
  EXPECT_NEAR(friis_gain(2.0), -46.06659693356042, 1e-10);
}

TEST(FriisGain, LosesSixDbPerDoubling) {
  const double per_doubling = 20.0 * std::log10(2.0);
  EXPECT_NEAR(per_doubling, 6.020599913279624, 1e-12);
  for (double d : {0.5, 1.0, 3.0, 7.0}) {
    EXPECT_NEAR(friis_gain(d) - friis_gain(2.0 * d), per_doubling, 1e-10);
  }
}

TEST(FriisGain, RejectsNonPositiveDistance) {
  EXPECT_THROW(friis_gain(0.0), DomainError);
  EXPECT_THROW(friis_gain(-1.0), DomainError);
}

TEST(MinModelDistance, IsWavelengthOverFourPi) {
  EXPECT_NEAR(min_model_distance(), 0.009947183943243459, 1e-15);
  // Gain crosses 0 dB exactly there.
  EXPECT_NEAR(friis_gain(min_model_distance()), 0.0, 1e-10);
}

TEST(BaseFunction, LogModeTakesLogOfNegatedGain) {
  EXPECT_NEAR(base_function(1.0, TransformMode::kLogNegRssi),
              3.6900287189630436, 1e-12);
  EXPECT_NEAR(base_function(1.0, TransformMode::kRawRssi), -40.0459970202808,
              1e-10);
}

TEST(BaseFunction, LogModeRejectsNonNegativeGain) {
  // At and below the crossover distance the gain is >= 0 dB.
  EXPECT_THROW(base_function(min_model_distance(), TransformMode::kLogNegRssi),
               DomainError);
  EXPECT_THROW(
      base_function(0.5 * min_model_distance(), TransformMode::kLogNegRssi),
      DomainError);
  EXPECT_NO_THROW(
      base_function(1.05 * min_model_distance(), TransformMode::kLogNegRssi));
}

TEST(ShiftToXSpace, LogModeCompressesByLocalGain) {
  // ln(1 - eps/g(d)) with eps = 3 dBm, d = 1 m.
  EXPECT_NEAR(shift_to_x_space(3.0, 1.0, TransformMode::kLogNegRssi),
              0.07224052315719735, 1e-12);
  // Zero shift maps to zero in both spaces.
  EXPECT_DOUBLE_EQ(shift_to_x_space(0.0, 1.0, TransformMode::kLogNegRssi),
                   0.0);
  EXPECT_DOUBLE_EQ(shift_to_x_space(0.0, 1.0, TransformMode::kRawRssi), 0.0);
}

TEST(ShiftToXSpace, RawModeNegatesShift) {
  EXPECT_DOUBLE_EQ(shift_to_x_space(3.0, 1.0, TransformMode::kRawRssi), -3.0);
  EXPECT_DOUBLE_EQ(shift_to_x_space(-2.5, 4.0, TransformMode::kRawRssi), 2.5);
}

TEST(ShiftToXSpace, RejectsShiftReachingTheGain) {
  // eps >= g(d) would push -(g - eps) to zero or negative.
  const double g1 = friis_gain(1.0);
  EXPECT_THROW(shift_to_x_space(g1, 1.0, TransformMode::kLogNegRssi),
               DomainError);
  EXPECT_THROW(shift_to_x_space(g1 - 1.0, 1.0, TransformMode::kLogNegRssi),
               DomainError);
}

}  // namespace
}  // namespace proxkit
