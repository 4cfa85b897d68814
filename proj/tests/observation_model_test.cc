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

#include "proxkit/observation_model.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "proxkit/errors.hpp"
#include "proxkit/friis.hpp"

namespace proxkit {
namespace {

TEST(MeanForm, NamesRoundTrip) {
  EXPECT_EQ(form_name(MeanForm::kScaledBase), "scaled_base");
  EXPECT_EQ(form_name(MeanForm::kLogLinear), "log_linear");
  EXPECT_EQ(form_from_name("scaled_base"), MeanForm::kScaledBase);
  EXPECT_EQ(form_from_name("log_linear"), MeanForm::kLogLinear);
  EXPECT_THROW(form_from_name("quadratic"), ConfigError);
}

TEST(DiscriminativeMean, ScaledBaseIdentityRecoversBaseFunction) {
  EXPECT_NEAR(discriminative_mean(1.0, 1.0, 0.0, MeanForm::kScaledBase,
                                  TransformMode::kLogNegRssi),
              3.6900287189630436, 1e-12);
}

TEST(DiscriminativeMean, LogLinearKnownFits) {
  EXPECT_DOUBLE_EQ(discriminative_mean(1.0, 0.21, 3.92, MeanForm::kLogLinear,
                                       TransformMode::kLogNegRssi),
                   3.92);
  EXPECT_NEAR(
      discriminative_mean(std::exp(1.0), -8.69, -67.9, MeanForm::kLogLinear,
                          TransformMode::kRawRssi),
      -76.59, 1e-12);
}

TEST(DiscriminativeMean, RejectsNonPositiveDistance) {
  EXPECT_THROW(discriminative_mean(0.0, 0.21, 3.92, MeanForm::kLogLinear,
                                   TransformMode::kLogNegRssi),
               DomainError);
  EXPECT_THROW(discriminative_mean(-1.0, 1.0, 0.0, MeanForm::kScaledBase,
                                   TransformMode::kLogNegRssi),
               DomainError);
}

TEST(ObservationModel, ConstantVarianceWithoutGrid) {
  const ObservationModel model = known_pair_model(TransformMode::kLogNegRssi);
  EXPECT_DOUBLE_EQ(model.var(0.5), 0.33);
  EXPECT_DOUBLE_EQ(model.var(5.0), 0.33);
  EXPECT_DOUBLE_EQ(model.q, 0.09);
  EXPECT_NEAR(model.mean(2.0), 0.21 * std::log(2.0) + 3.92, 1e-14);
}

TEST(ObservationModel, GriddedVarianceInterpolatesInLogDistance) {
  ObservationModel model = known_pair_model(TransformMode::kLogNegRssi);
  model.grid = {1.0, std::exp(1.0), std::exp(2.0)};
  model.grid_var = {1.0, 3.0, 5.0};
  model.validate();
  EXPECT_NEAR(model.var(1.0), 1.0, 1e-14);
  EXPECT_NEAR(model.var(std::exp(0.5)), 2.0, 1e-12);
  EXPECT_NEAR(model.var(std::exp(1.0)), 3.0, 1e-12);
  EXPECT_NEAR(model.var(std::exp(1.5)), 4.0, 1e-12);
  // End-clamped outside the grid.
  EXPECT_NEAR(model.var(0.25), 1.0, 1e-14);
  EXPECT_NEAR(model.var(50.0), 5.0, 1e-14);
}

TEST(ObservationModel, ValidateCatchesBadGrids) {
  ObservationModel model = known_pair_model(TransformMode::kLogNegRssi);
  model.grid = {1.0, 1.0};
  model.grid_var = {1.0, 1.0};
  EXPECT_THROW(model.validate(), InvalidDistribution);
  model.grid = {1.0, 2.0};
  model.grid_var = {1.0};
  EXPECT_THROW(model.validate(), LengthMismatch);
  model.grid_var = {1.0, 0.0};
  EXPECT_THROW(model.validate(), InvalidDistribution);
}

TEST(ObservationModel, DomainFloorDependsOnForm) {
  ObservationModel model;
  model.form = MeanForm::kScaledBase;
  model.mode = TransformMode::kLogNegRssi;
  EXPECT_NEAR(model.domain_floor(), 1.05 * min_model_distance(), 1e-15);
  model.form = MeanForm::kLogLinear;
  EXPECT_DOUBLE_EQ(model.domain_floor(), 0.01);
  model.form = MeanForm::kScaledBase;
  model.mode = TransformMode::kRawRssi;
  EXPECT_DOUBLE_EQ(model.domain_floor(), 0.01);
}

TEST(RidgeLogFit, RecoversExactLogLine) {
  const std::vector<double> grid{0.5, 1.0, 2.0, 4.0, 8.0};
  std::vector<double> mu(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    mu[i] = 0.21 * std::log(grid[i]) + 3.92;
  }
  double a = 0.0, b = 0.0;
  ridge_log_fit(grid, mu, 1e-6, &a, &b);
  EXPECT_NEAR(a, 0.21, 1e-5);
  EXPECT_NEAR(b, 3.92, 1e-5);
}

TEST(RidgeLogFit, DegenerateDesignThrows) {
  const std::vector<double> grid{2.0, 2.0};
  const std::vector<double> mu{1.0, 1.0};
  double a = 0.0, b = 0.0;
  // Two identical abscissae leave the unregularized system singular, and the
  // penalty keeps it solvable.
  EXPECT_NO_THROW(ridge_log_fit(grid, mu, 1e-6, &a, &b));
  EXPECT_THROW(ridge_log_fit(grid, mu, 0.0, &a, &b), NumericError);
}

TEST(BuildGenerativeModel, NoShiftsReducesToBasePlusNoise) {
  const std::vector<double> grid{0.5, 1.0, 2.0, 4.0};
  const ObservationModel model = build_generative_model(
      {}, NoiseVariance{2.0, 0.1}, grid, TransformMode::kLogNegRssi);
  // Variance is flat at E[Z variance] = beta/(alpha-1) = 0.1.
  for (double d : grid) EXPECT_NEAR(model.var(d), 0.1, 1e-12);
  EXPECT_NEAR(model.theta_r, 0.1, 1e-12);
  // The fitted line passes close to the base function on the grid.
  for (double d : grid) {
    EXPECT_NEAR(model.mean(d), base_function(d, TransformMode::kLogNegRssi),
                0.05);
  }
}

TEST(BuildGenerativeModel, ShiftMomentsEnterMeanAndVariance) {
  const std::vector<double> grid{1.0, 2.0};
  ShiftVariable sv;
  sv.components = {{8.0, 0.4, 0.3}};
  sv.weights = DirichletPosterior{{3.0}};
  const std::vector<std::vector<ShiftVariable>> shifts{{sv}, {sv}};
  const ObservationModel model = build_generative_model(
      shifts, NoiseVariance{2.0, 0.1}, grid, TransformMode::kLogNegRssi);
  const double comp_var = 8.0 / 6.0 * 0.09;
  EXPECT_NEAR(model.var(1.0), 0.1 + comp_var, 1e-12);
  EXPECT_NEAR(model.var(2.0), 0.1 + comp_var, 1e-12);
  // Mean line is fit through f(d) + 0.4; at the log-midpoint the line takes
  // the average of the two node values (up to the small ridge penalty).
  EXPECT_NEAR(model.mean(std::sqrt(2.0)),
              0.5 * (base_function(1.0, TransformMode::kLogNegRssi) +
                     base_function(2.0, TransformMode::kLogNegRssi)) +
                  0.4,
              1e-4);
}

TEST(BuildGenerativeModel, RejectsBadInputs) {
  const std::vector<double> grid{1.0, 2.0};
  EXPECT_THROW(build_generative_model({}, NoiseVariance{2.0, 0.1},
                                      std::vector<double>{},
                                      TransformMode::kLogNegRssi),
               EmptySequence);
  const std::vector<std::vector<ShiftVariable>> one_shift(1);
  EXPECT_THROW(build_generative_model(one_shift, NoiseVariance{2.0, 0.1}, grid,
                                      TransformMode::kLogNegRssi),
               LengthMismatch);
}

}  // namespace
}  // namespace proxkit
