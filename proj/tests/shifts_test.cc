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

#include "proxkit/shifts.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "proxkit/errors.hpp"

namespace proxkit {
namespace {

ShiftVariable TwoComponentShift() {
  ShiftVariable sv;
  sv.components = {{4.0, -1.0, 0.5}, {4.0, 1.0, 0.5}};
  sv.weights = DirichletPosterior{{1.0, 3.0}};
  return sv;
}

TEST(ShiftMoments, MixtureMeanAndVariance) {
  // w = {1/4, 3/4}; component variances 4/2 * 0.25 = 0.5 each.
  // mean = 0.5, var = 0.25*1.5 + 0.75*1.5 - 0.25 = 1.25.
  const ShiftMoments m = shift_moments(TwoComponentShift());
  EXPECT_NEAR(m.mean, 0.5, 1e-14);
  EXPECT_NEAR(m.variance, 1.25, 1e-14);
}

TEST(ShiftMoments, WeightUncertaintyAddsDirichletSpread) {
  // Var(w_k) = 3/80 each; deviations {-1.5, 0.5} add
  // 3/80 * (2.25 + 0.25) = 0.09375.
  const ShiftMoments m = shift_moments(TwoComponentShift(), true);
  EXPECT_NEAR(m.variance, 1.25 + 0.09375, 1e-14);
}

TEST(ShiftMoments, SingleComponentReducesToComponentMoments) {
  ShiftVariable sv;
  sv.components = {{8.0, -2.0, 1.0}};
  sv.weights = DirichletPosterior{{5.0}};
  const ShiftMoments m = shift_moments(sv);
  EXPECT_NEAR(m.mean, -2.0, 1e-14);
  EXPECT_NEAR(m.variance, 8.0 / 6.0, 1e-12);
}

TEST(ShiftMoments, RejectsComponentWeightMismatch) {
  ShiftVariable sv = TwoComponentShift();
  sv.weights = DirichletPosterior{{1.0, 2.0, 3.0}};
  EXPECT_THROW(shift_moments(sv), LengthMismatch);
}

TEST(SampleShift, DeterministicUnderSeed) {
  const ShiftVariable sv = TwoComponentShift();
  const std::vector<double> a = sample_shift(sv, 32, 9);
  const std::vector<double> b = sample_shift(sv, 32, 9);
  const std::vector<double> c = sample_shift(sv, 32, 10);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(SampleShift, MatchesAnalyticMoments) {
  // nu = 8 keeps the fourth moment finite so the sample variance settles.
  ShiftVariable sv;
  sv.components = {{8.0, -1.0, 0.6}, {8.0, 1.0, 0.4}};
  sv.weights = DirichletPosterior{{2.0, 5.0}};
  // mean = 3/7; var = 2/7*(0.48+1) + 5/7*(0.2133..+1) - 9/49.
  const double expected_mean = 3.0 / 7.0;
  const double expected_var = 1.1058503401360545;

  const std::size_t n = 400000;
  const std::vector<double> draws = sample_shift(sv, n, 123);
  double mean = 0.0;
  for (double y : draws) mean += y;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double y : draws) var += (y - mean) * (y - mean);
  var /= static_cast<double>(n - 1);

  EXPECT_NEAR(mean, expected_mean, 0.01);
  EXPECT_NEAR(var, expected_var, 0.03);
}

TEST(FitReferenceShifts, CentersOnContextMinusReferenceMean) {
  std::map<ReferenceKey, std::vector<double>> reference;
  reference[{"pocket", "facing"}] = {0.0, 2.0};  // mean 1, sd sqrt(2)

  std::map<ContextKey, std::vector<double>> contexts;
  contexts[{"facing", "pocket", "indoor"}] =
      std::vector<double>(10000, 4.0);

  const auto shifts = fit_reference_shifts(reference, contexts, 77);
  const std::vector<double>& y =
      shifts.at({"facing", "pocket", "indoor"});
  ASSERT_EQ(y.size(), 10000u);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  // E[y] = 4 - 1 = 3; spread comes only from the reference draws.
  EXPECT_NEAR(mean, 3.0, 0.06);
}

TEST(FitReferenceShifts, SeededPerContextKey) {
  std::map<ReferenceKey, std::vector<double>> reference;
  reference[{"pocket", "facing"}] = {-1.0, 1.0};
  std::map<ContextKey, std::vector<double>> contexts;
  contexts[{"facing", "pocket", "indoor"}] = {0.5, 0.7};
  contexts[{"facing", "pocket", "outdoor"}] = {0.5, 0.7};

  const auto a = fit_reference_shifts(reference, contexts, 5);
  const auto b = fit_reference_shifts(reference, contexts, 5);
  EXPECT_EQ(a.at({"facing", "pocket", "indoor"}),
            b.at({"facing", "pocket", "indoor"}));
  // Different environments consume different streams.
  EXPECT_NE(a.at({"facing", "pocket", "indoor"}),
            a.at({"facing", "pocket", "outdoor"}));
}

TEST(FitReferenceShifts, RejectsThinReferenceOrMissingKey) {
  std::map<ReferenceKey, std::vector<double>> thin;
  thin[{"pocket", "facing"}] = {1.0};
  EXPECT_THROW(fit_reference_shifts(thin, {}, 1), InsufficientData);

  std::map<ReferenceKey, std::vector<double>> reference;
  reference[{"pocket", "facing"}] = {0.0, 2.0};
  std::map<ContextKey, std::vector<double>> contexts;
  contexts[{"away", "pocket", "indoor"}] = {1.0};
  EXPECT_THROW(fit_reference_shifts(reference, contexts, 1),
               InsufficientData);
}

TEST(DevicePairDirichlet, TransmitterMajorLayout) {
  const std::vector<double> shares{0.5, 0.3, 0.2};
  const DirichletPosterior d = device_pair_dirichlet(shares, 2123.0);
  ASSERT_EQ(d.alphas.size(), 9u);
  const double scale = 2123.0 * 2122.0;
  EXPECT_DOUBLE_EQ(scale, 4505006.0);
  EXPECT_NEAR(d.alphas[0], scale * 0.25, 1e-6);
  EXPECT_NEAR(d.alphas[1], scale * 0.15, 1e-6);  // (tx=0, rx=1)
  EXPECT_NEAR(d.alphas[3], scale * 0.15, 1e-6);  // (tx=1, rx=0)
  EXPECT_NEAR(d.alphas[8], scale * 0.04, 1e-6);
  EXPECT_NEAR(d.total(), scale, 1e-6);
}

TEST(DevicePairDirichlet, RejectsBadShares) {
  EXPECT_THROW(device_pair_dirichlet(std::vector<double>{0.5, 0.4}, 100.0),
               InvalidDistribution);
  EXPECT_THROW(device_pair_dirichlet(std::vector<double>{0.5, 0.5}, 1.5),
               InvalidDistribution);
  EXPECT_THROW(device_pair_dirichlet(std::vector<double>{1.5, -0.5}, 100.0),
               InvalidDistribution);
}

TEST(ContextDirichlet, PositionMajorLayoutAndTotal) {
  const std::vector<double> p_env{0.869, 0.131};
  const std::vector<double> p_loc{4.75 / 24.0, 1.0 - 4.75 / 24.0};
  const std::vector<double> p_pos(8, 0.125);
  const DirichletPosterior d =
      context_dirichlet(p_env, p_loc, p_pos, kContextPseudocount);
  ASSERT_EQ(d.alphas.size(), 32u);
  // First cell: pseudocount * p(indoor) * p(concealed) * p(bin 0).
  EXPECT_NEAR(d.alphas[0], 0.21498697916666665, 1e-15);
  // Total concentration is exactly the pseudocount.
  EXPECT_NEAR(d.total(), 10.0, 1e-12);
  // Layout: environment varies fastest.
  EXPECT_NEAR(d.alphas[1], 10.0 * 0.131 * (4.75 / 24.0) * 0.125, 1e-15);
}

TEST(ContextDirichlet, RejectsBadInputs) {
  const std::vector<double> ok{0.5, 0.5};
  EXPECT_THROW(context_dirichlet(std::vector<double>{0.5, 0.4}, ok, ok, 10.0),
               InvalidDistribution);
  EXPECT_THROW(context_dirichlet(ok, ok, ok, 0.0), InvalidDistribution);
  EXPECT_THROW(context_dirichlet(std::vector<double>{}, ok, ok, 10.0),
               InvalidDistribution);
}

}  // namespace
}  // namespace proxkit
