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
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "proxkit/errors.hpp"
#include "proxkit/observation_model.hpp"
#include "proxkit/random.hpp"
#include "proxkit/transform.hpp"

namespace proxkit {

/// Matern covariance with smoothness 5/2:
/// sigma^2 (1 + sqrt(5) r / l + 5 r^2 / (3 l^2)) exp(-sqrt(5) r / l).
inline double matern52(double r, double variance, double lengthscale) {
  if (!(variance > 0.0) || !(lengthscale > 0.0)) {
    throw DomainError("matern52 requires positive variance and lengthscale");
  }
  if (!(r >= 0.0)) throw DomainError("matern52 requires r >= 0");
  const double a = std::sqrt(5.0) * r / lengthscale;
  return variance * (1.0 + a + a * a / 3.0) * std::exp(-a);
}

/// Closed parameter box. A degenerate interval (lo == hi) pins the
/// parameter: it is excluded from the search dimensions and always takes
/// the pinned value.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool pinned() const { return lo == hi; }
};

struct SearchSpace {
  std::vector<std::string> names;
  std::vector<Interval> bounds;

  void validate() const {
    if (names.size() != bounds.size()) {
      throw LengthMismatch("search-space names and bounds lengths differ");
    }
    bool any_free = false;
    for (const Interval& b : bounds) {
      if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo <= b.hi)) {
        throw ConfigError("search interval must satisfy lo <= hi, finite");
      }
      any_free = any_free || !b.pinned();
    }
    if (bounds.empty() || !any_free) {
      throw ConfigError("search space has no free dimensions");
    }
  }

  std::vector<std::size_t> free_dims() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      if (!bounds[i].pinned()) out.push_back(i);
    }
    return out;
  }
};

/// Published search boxes over Theta = (theta_mu1, theta_mu2, theta_r, q)
/// per form and mode. The RawRssi theta_r lower bound is lifted to 1e-3:
/// zero observation variance makes the measurement update singular.
inline SearchSpace default_search_space(MeanForm form, TransformMode mode) {
  SearchSpace space;
  space.names = {"theta_mu1", "theta_mu2", "theta_r", "q"};
  if (mode == TransformMode::kLogNegRssi) {
    if (form == MeanForm::kScaledBase) {
      space.bounds = {{0.8, 1.2}, {0.5, 5.0}, {0.3, 1.5}, {0.01, 0.05}};
    } else {
      space.bounds = {{0.01, 1.0}, {3.5, 4.5}, {0.2, 1.5}, {0.01, 0.05}};
    }
  } else {
    if (form == MeanForm::kScaledBase) {
      space.bounds = {{1.0, 1.0}, {-100.0, -10.0}, {1e-3, 300.0}, {0.01, 0.05}};
    } else {
      space.bounds = {{-20.0, -1.0}, {-100.0, -10.0}, {1e-3, 300.0},
                      {0.01, 0.05}};
    }
  }
  return space;
}

/// GP surrogate data: evaluated parameter vectors, their objective values,
/// and kernel hyperparameters. Distances are scaled per dimension by the
/// lengthscales; the kernel matrix gets jitter * kernel_variance on the
/// diagonal and must be positive definite after that.
struct SurrogateState {
  std::vector<std::vector<double>> points;
  std::vector<double> values;
  double kernel_variance = 1.0;
  std::vector<double> lengthscales;
  double jitter = 1e-6;
};

namespace detail {

inline double scaled_distance(std::span<const double> a,
                              std::span<const double> b,
                              std::span<const double> lengthscales) {
  double r2 = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double u = (a[d] - b[d]) / lengthscales[d];
    r2 += u * u;
  }
  return std::sqrt(r2);
}

/// One Cholesky factorization shared by every posterior query in a round.
struct GpCache {
  const SurrogateState* state = nullptr;
  Eigen::MatrixXd chol_lower;
  Eigen::VectorXd solved_centered;  // L^-1 (y - y_bar)
  double y_bar = 0.0;

  void build(const SurrogateState& s) {
    const std::size_t n = s.points.size();
    if (n == 0) throw InsufficientData("surrogate has no evaluated points");
    const std::size_t dim = s.points.front().size();
    if (s.values.size() != n) {
      throw LengthMismatch("surrogate points/values lengths differ");
    }
    if (s.lengthscales.size() != dim) {
      throw LengthMismatch("surrogate lengthscale count != dimension");
    }
    state = &s;

    Eigen::MatrixXd k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (s.points[i].size() != dim) {
        throw LengthMismatch("surrogate points have mixed dimensions");
      }
      for (std::size_t j = 0; j <= i; ++j) {
        const double r =
            scaled_distance(s.points[i], s.points[j], s.lengthscales);
        const double v = matern52(r, s.kernel_variance, 1.0);
        k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        k(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
      }
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) +=
          s.jitter * s.kernel_variance;
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) {
      throw SingularKernel("kernel matrix not positive definite after jitter");
    }
    chol_lower = llt.matrixL();

    y_bar = 0.0;
    for (double v : s.values) y_bar += v;
    y_bar /= static_cast<double>(n);
    Eigen::VectorXd centered(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      centered(static_cast<Eigen::Index>(i)) = s.values[i] - y_bar;
    }
    solved_centered =
        chol_lower.triangularView<Eigen::Lower>().solve(centered);
  }

  std::pair<double, double> posterior(std::span<const double> query) const {
    const std::size_t n = state->points.size();
    Eigen::VectorXd kstar(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const double r =
          scaled_distance(state->points[i], query, state->lengthscales);
      kstar(static_cast<Eigen::Index>(i)) =
          matern52(r, state->kernel_variance, 1.0);
    }
    const Eigen::VectorXd w =
        chol_lower.triangularView<Eigen::Lower>().solve(kstar);
    const double mean = y_bar + w.dot(solved_centered);
    const double var = std::max(state->kernel_variance - w.squaredNorm(), 0.0);
    return {mean, var};
  }
};

inline double standard_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

inline double standard_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

inline double expected_improvement_at(double mean, double var, double best) {
  const double s = std::sqrt(std::max(var, 0.0));
  const double gap = best - mean;
  if (s < 1e-15) return std::max(gap, 0.0);
  const double z = gap / s;
  const double ei = gap * standard_normal_cdf(z) + s * standard_normal_pdf(z);
  return std::max(ei, 0.0);
}

/// Radical-inverse quasi-random coordinate in [0, 1).
inline double radical_inverse(unsigned base, unsigned index) {
  double result = 0.0;
  double digit = 1.0 / base;
  while (index > 0) {
    result += digit * (index % base);
    index /= base;
    digit /= base;
  }
  return result;
}

}  // namespace detail

/// GP regression posterior (mean, variance) at a query point, after
/// centering the observed values. Variance is clamped to [0, kernel
/// variance]; far from all data the posterior reverts to the value mean
/// and the prior variance.
inline std::pair<double, double> gp_posterior(const SurrogateState& state,
                                              std::span<const double> query) {
  detail::GpCache cache;
  cache.build(state);
  if (query.size() != state.points.front().size()) {
    throw LengthMismatch("query dimension differs from surrogate points");
  }
  return cache.posterior(query);
}

/// Expected improvement for minimization under the surrogate posterior:
/// (best - m) Phi(z) + s phi(z) with z = (best - m)/s; when the posterior
/// is deterministic this collapses to max(best - m, 0).
inline double expected_improvement(const SurrogateState& state,
                                   std::span<const double> query,
                                   double best_so_far) {
  const auto [mean, var] = gp_posterior(state, query);
  return detail::expected_improvement_at(mean, var, best_so_far);
}

struct TrainEval {
  std::vector<double> theta;
  double value = 0.0;
};

struct TrainReport {
  std::vector<double> best_theta;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<TrainEval> trace;
  std::vector<double> fold_scores;
};

namespace detail {

struct CompassResult {
  std::vector<double> u;
  double ei = 0.0;
};

/// Coordinate pattern search on the unit box, maximizing fn. The step
/// halves whenever no axis move improves.
template <typename Fn>
CompassResult compass_search(std::vector<double> u, double value, int iters,
                             const Fn& fn) {
  double step = 0.25;
  for (int it = 0; it < iters; ++it) {
    double best_value = value;
    std::vector<double> best_u = u;
    for (std::size_t d = 0; d < u.size(); ++d) {
      for (const double sign : {1.0, -1.0}) {
        std::vector<double> cand = u;
        cand[d] = std::clamp(cand[d] + sign * step, 0.0, 1.0);
        if (cand[d] == u[d]) continue;
        const double v = fn(cand);
        if (v > best_value) {
          best_value = v;
          best_u = cand;
        }
      }
    }
    if (best_value > value) {
      value = best_value;
      u = std::move(best_u);
    } else {
      step *= 0.5;
    }
  }
  return {std::move(u), value};
}

}  // namespace detail

/// Bayesian optimization of a black-box objective over the search box.
///
/// Runs init_points quasi-random evaluations (Halton with a seeded
/// rotation), then per round fits the GP surrogate to all evaluations
/// (inputs normalized to the unit box, values standardized) and evaluates
/// the expected-improvement maximizer found by multi-start pattern search
/// (256 seeded restarts, the most promising 8 refined further).
///
/// The objective always receives a full-length parameter vector; pinned
/// dimensions carry their fixed value. Objective exceptions propagate; when
/// `live` is given it holds the partial trace accumulated so far.
inline TrainReport bayes_opt(
    const std::function<double(std::span<const double>)>& objective,
    const SearchSpace& space, int init_points, int rounds, std::uint64_t seed,
    TrainReport* live = nullptr) {
  space.validate();
  if (init_points < 2) throw ConfigError("need at least 2 initial points");
  if (rounds < 1) throw ConfigError("need at least 1 optimization round");

  const std::vector<std::size_t> free = space.free_dims();
  const std::size_t k = free.size();

  const auto to_full = [&](std::span<const double> u) {
    std::vector<double> theta(space.bounds.size());
    for (std::size_t i = 0; i < space.bounds.size(); ++i) {
      theta[i] = space.bounds[i].lo;
    }
    for (std::size_t d = 0; d < k; ++d) {
      const Interval& b = space.bounds[free[d]];
      theta[free[d]] = b.lo + u[d] * (b.hi - b.lo);
    }
    return theta;
  };

  TrainReport report;
  std::vector<std::vector<double>> unit_points;
  std::size_t best_index = 0;

  const auto evaluate = [&](const std::vector<double>& u) {
    const std::vector<double> theta = to_full(u);
    const double value = objective(theta);
    if (!std::isfinite(value)) {
      throw NumericError("objective returned a non-finite value");
    }
    unit_points.push_back(u);
    report.trace.push_back({theta, value});
    if (value < report.best_value) {
      report.best_value = value;
      report.best_theta = theta;
      best_index = report.trace.size() - 1;
    }
    if (live != nullptr) *live = report;
  };

  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  if (k > std::size(kPrimes)) {
    throw ConfigError("search dimension exceeds supported maximum");
  }
  std::mt19937_64 init_rng = make_rng(seed, "bo-init");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> rotation(k);
  for (double& r : rotation) r = unif(init_rng);

  for (int i = 0; i < init_points; ++i) {
    std::vector<double> u(k);
    for (std::size_t d = 0; d < k; ++d) {
      const double h = detail::radical_inverse(
          kPrimes[d], static_cast<unsigned>(i) + 1u);
      u[d] = h + rotation[d] - std::floor(h + rotation[d]);
    }
    evaluate(u);
  }

  constexpr int kStarts = 256;
  constexpr int kShortIters = 6;
  constexpr int kDeepIters = 24;
  constexpr int kDeepened = 8;

  for (int round = 0; round < rounds; ++round) {
    // Standardize values so the unit-variance kernel is well scaled.
    double mean = 0.0;
    for (const TrainEval& e : report.trace) mean += e.value;
    mean /= static_cast<double>(report.trace.size());
    double sd = 0.0;
    for (const TrainEval& e : report.trace) {
      sd += (e.value - mean) * (e.value - mean);
    }
    sd = std::sqrt(sd / static_cast<double>(report.trace.size()));
    if (sd < 1e-12) sd = 1.0;

    SurrogateState surrogate;
    surrogate.points = unit_points;
    surrogate.values.reserve(report.trace.size());
    for (const TrainEval& e : report.trace) {
      surrogate.values.push_back((e.value - mean) / sd);
    }
    surrogate.kernel_variance = 1.0;
    surrogate.lengthscales.assign(k, 0.2);
    surrogate.jitter = 1e-6;
    detail::GpCache cache;
    cache.build(surrogate);

    const double best_std = (report.best_value - mean) / sd;
    const auto ei = [&](const std::vector<double>& u) {
      const auto [m, v] = cache.posterior(u);
      return detail::expected_improvement_at(m, v, best_std);
    };

    std::mt19937_64 rng = make_rng(seed, "bo-round-" + std::to_string(round));
    std::vector<detail::CompassResult> results;
    results.reserve(kStarts);
    for (int s = 0; s < kStarts; ++s) {
      std::vector<double> u(k);
      if (s == 0) {
        u = unit_points[best_index];
      } else {
        for (double& x : u) x = unif(rng);
      }
      results.push_back(detail::compass_search(u, ei(u), kShortIters, ei));
    }
    std::partial_sort(results.begin(),
                      results.begin() + std::min<std::size_t>(kDeepened,
                                                              results.size()),
                      results.end(),
                      [](const detail::CompassResult& a,
                         const detail::CompassResult& b) { return a.ei > b.ei; });

    detail::CompassResult best = results.front();
    for (std::size_t i = 0;
         i < std::min<std::size_t>(kDeepened, results.size()); ++i) {
      detail::CompassResult refined = detail::compass_search(
          results[i].u, results[i].ei, kDeepIters, ei);
      if (refined.ei > best.ei) best = refined;
    }

    // Re-sampling duplicates keeps the kernel matrix well conditioned.
    bool duplicate = false;
    for (const std::vector<double>& p : unit_points) {
      double dist = 0.0;
      for (std::size_t d = 0; d < k; ++d) {
        dist = std::max(dist, std::abs(p[d] - best.u[d]));
      }
      if (dist < 1e-10) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) {
      for (double& x : best.u) x = unif(rng);
    }
    evaluate(best.u);
  }
  return report;
}

}  // namespace proxkit
