//  Copyright 2026 The musicvec Authors. All Rights Reserved.
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

/**
 * @file tsne.hpp
 *
 * @brief Exact O(N^2) t-SNE for projecting small word sets to 2D.
 *
 * Input affinities are Gaussian conditionals whose bandwidth is calibrated per
 * point to a target perplexity, symmetrized as p_ij = (p_j|i + p_i|j) / 2N.
 * The map uses Student-t similarities q_ij ~ 1 / (1 + |y_i - y_j|^2) and is
 * optimized by gradient descent on KL(P || Q) with momentum, per-coordinate
 * gains and early exaggeration.
 *
 * @see van der Maaten, L.J.P. and Hinton, G.E. (2008). Visualizing
 * high-dimensional data using t-SNE. JMLR 9, 2579-2605.
 */

#ifndef MUSICVEC_TSNE_HPP
#define MUSICVEC_TSNE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "musicvec/detail/parallel.hpp"
#include "musicvec/detail/random.hpp"
#include "musicvec/error.hpp"

namespace musicvec {

struct TsneConfig {
  double perplexity = 30;
  std::size_t iterations = 1000;
  double early_exaggeration = 12;
  std::size_t exaggeration_iterations = 250;
  double learning_rate = 200;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  std::size_t momentum_switch = 250;
  std::uint64_t rng_seed = 1;
  std::size_t workers = 1;
};

struct SigmaCalibration {
  /// Precision 1 / (2 sigma^2).
  double beta = 0;
  double sigma = 0;
  /// 2^H of the calibrated conditional distribution.
  double perplexity = 0;
  std::vector<double> probabilities;
};

namespace detail {

struct RowEntropy {
  double perplexity;
  double sum;
};

inline RowEntropy row_entropy(std::span<const double> shifted, double beta, std::vector<double>& p) {
  double z = 0;
  double weighted = 0;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    p[j] = std::exp(-beta * shifted[j]);
    z += p[j];
    weighted += p[j] * shifted[j];
  }
  // Natural-log entropy; perplexity 2^H(bits) equals e^H(nats).
  const double h = std::log(z) + beta * weighted / z;
  return {std::exp(h), z};
}

}  // namespace detail

inline constexpr double kPerplexityTolerance = 1e-5;
inline constexpr int kBisectionSteps = 64;

/// Finds the Gaussian bandwidth whose conditional distribution over
/// `sq_distances` (squared distances to all other points) has the target
/// perplexity, by bisection on log(beta). Stops once the relative error is
/// below 1e-5, otherwise returns the best of 64 bisection steps.
inline SigmaCalibration calibrate_sigma(std::span<const double> sq_distances, double perplexity) {
  if (sq_distances.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two distances");
  if (!(perplexity > 0)) throw Error(ErrorCode::InvalidArgument, "perplexity must be positive");
  for (double d : sq_distances)
    if (!std::isfinite(d) || d < 0) throw Error(ErrorCode::NonFiniteInput, "distances must be finite and >= 0");
  const auto [mn, mx] = std::minmax_element(sq_distances.begin(), sq_distances.end());
  if (*mx == 0) throw Error(ErrorCode::DegenerateRow, "all distances are zero");

  // Shifting by the minimum leaves the normalized distribution unchanged.
  std::vector<double> shifted(sq_distances.size());
  double mean = 0;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    shifted[j] = sq_distances[j] - *mn;
    mean += shifted[j];
  }
  mean /= static_cast<double>(shifted.size());

  std::vector<double> p(shifted.size());
  SigmaCalibration best;
  double best_err = std::numeric_limits<double>::infinity();
  const auto evaluate = [&](double log_beta) {
    const double beta = std::exp(log_beta);
    const auto e = detail::row_entropy(shifted, beta, p);
    const double err = std::abs(e.perplexity - perplexity) / perplexity;
    if (err < best_err) {
      best_err = err;
      best.beta = beta;
      best.perplexity = e.perplexity;
      best.probabilities.assign(p.begin(), p.end());
      for (auto& v : best.probabilities) v /= e.sum;
    }
    return e.perplexity;
  };
  const auto finish = [&] {
    best.sigma = std::sqrt(1.0 / (2.0 * best.beta));
    return best;
  };

  // Perplexity decreases as beta grows. Bracket the target in log(beta),
  // then bisect.
  double x = mean > 0 ? -std::log(mean) : 0.0;
  double lo = 0, hi = 0;
  double px = evaluate(x);
  if (best_err < kPerplexityTolerance) return finish();
  double step = 1;
  if (px > perplexity) {
    lo = x;
    for (int i = 0; i < 200; ++i, step *= 2) {
      hi = x + step;
      if (evaluate(hi) <= perplexity) break;
      lo = hi;
    }
  } else {
    hi = x;
    for (int i = 0; i < 200; ++i, step *= 2) {
      lo = x - step;
      if (evaluate(lo) >= perplexity) break;
      hi = lo;
    }
  }
  for (int i = 0; i < kBisectionSteps && best_err >= kPerplexityTolerance; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (evaluate(mid) > perplexity)
      lo = mid;
    else
      hi = mid;
  }
  return finish();
}

/// Row-major N x N matrix of squared Euclidean distances between the rows of
/// `data` (N x dim).
inline std::vector<double> squared_distances(std::span<const double> data, std::size_t dim, std::size_t workers = 1) {
  const std::size_t n = data.size() / dim;
  std::vector<double> d(n * n, 0.0);
  detail::parallel_for(n, workers, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double s = 0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = data[i * dim + k] - data[j * dim + k];
        s += diff * diff;
      }
      d[i * n + j] = s;
    }
  });
  return d;
}

struct Affinities {
  std::size_t n = 0;
  /// Symmetric joint probabilities, row-major N x N, zero diagonal.
  std::vector<double> p;
  /// Achieved perplexity of each calibrated conditional row.
  std::vector<double> perplexities;
};

/// Calibrated conditionals, symmetrized into joint probabilities summing to 1.
inline Affinities compute_affinities(std::span<const double> data, std::size_t dim, double perplexity,
                                     std::size_t workers = 1) {
  const std::size_t n = data.size() / dim;
  const auto dist = squared_distances(data, dim, workers);
  std::vector<double> cond(n * n, 0.0);
  Affinities a;
  a.n = n;
  a.perplexities.resize(n);
  detail::parallel_for(n, workers, [&](std::size_t i) {
    std::vector<double> row;
    row.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) row.push_back(dist[i * n + j]);
    const auto cal = calibrate_sigma(row, perplexity);
    a.perplexities[i] = cal.perplexity;
    for (std::size_t j = 0, k = 0; j < n; ++j)
      if (j != i) cond[i * n + j] = cal.probabilities[k++];
  });
  a.p.assign(n * n, 0.0);
  const double denom = 2.0 * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) a.p[i * n + j] = (cond[i * n + j] + cond[j * n + i]) / denom;
  return a;
}

/// KL(P || Q) for the map `y` (N x 2).
inline double tsne_kl_divergence(const std::vector<double>& p, std::span<const std::array<double, 2>> y) {
  const std::size_t n = y.size();
  double z = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx = y[i][0] - y[j][0];
      const double dy = y[i][1] - y[j][1];
      z += 1.0 / (1.0 + dx * dx + dy * dy);
    }
  double kl = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double pij = p[i * n + j];
      if (i == j || pij <= 0) continue;
      const double dx = y[i][0] - y[j][0];
      const double dy = y[i][1] - y[j][1];
      const double q = 1.0 / (1.0 + dx * dx + dy * dy) / z;
      kl += pij * std::log(pij / std::max(q, std::numeric_limits<double>::min()));
    }
  return kl;
}

struct TsneResult {
  std::vector<std::array<double, 2>> coords;
  double initial_kl = 0;
  double final_kl = 0;
  std::vector<double> perplexities;
};

/// Projects the rows of `data` (N x dim, row-major) to 2D. Deterministic for
/// a given seed regardless of `workers`; the output is centered at the origin.
inline TsneResult tsne_project(std::span<const double> data, std::size_t dim, const TsneConfig& cfg) {
  if (dim < 1 || data.size() % dim != 0) throw Error(ErrorCode::InvalidArgument, "data is not an N x dim matrix");
  const std::size_t n = data.size() / dim;
  if (n < 4) throw Error(ErrorCode::TooFewPoints, "t-SNE needs at least 4 points, got " + std::to_string(n));
  for (double v : data)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "input contains NaN or infinity");
  if (!(cfg.perplexity >= 2)) throw Error(ErrorCode::InvalidArgument, "perplexity must be >= 2");
  if (!(3.0 * cfg.perplexity < static_cast<double>(n)))
    throw Error(ErrorCode::InvalidArgument, "perplexity " + std::to_string(cfg.perplexity) +
                                                " too large for " + std::to_string(n) + " points (need 3 * perplexity < N)");
  if (cfg.iterations < 1) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 1");

  const Affinities aff = compute_affinities(data, dim, cfg.perplexity, cfg.workers);
  const auto& p = aff.p;

  TsneResult res;
  res.perplexities = aff.perplexities;
  auto& y = res.coords;
  y.resize(n);
  Rng rng(cfg.rng_seed);
  for (auto& pt : y) {
    // Box-Muller, sigma = 1e-4.
    const double u1 = 1.0 - detail::uniform01(rng);
    const double u2 = detail::uniform01(rng);
    const double r = std::sqrt(-2.0 * std::log(u1)) * 1e-4;
    pt = {r * std::cos(2 * std::numbers::pi * u2), r * std::sin(2 * std::numbers::pi * u2)};
  }
  res.initial_kl = tsne_kl_divergence(p, y);

  std::vector<std::array<double, 2>> update(n, {0, 0});
  std::vector<std::array<double, 2>> gains(n, {1, 1});
  std::vector<std::array<double, 2>> grad(n);
  std::vector<double> num(n * n);
  std::vector<double> row_z(n);

  const auto center = [&] {
    double mx = 0, my = 0;
    for (const auto& pt : y) {
      mx += pt[0];
      my += pt[1];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    for (auto& pt : y) {
      pt[0] -= mx;
      pt[1] -= my;
    }
  };

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const double exag = it < cfg.exaggeration_iterations ? cfg.early_exaggeration : 1.0;
    const double momentum = it < cfg.momentum_switch ? cfg.initial_momentum : cfg.final_momentum;

    detail::parallel_for(n, cfg.workers, [&](std::size_t i) {
      double s = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) {
          num[i * n + j] = 0;
          continue;
        }
        const double dx = y[i][0] - y[j][0];
        const double dy = y[i][1] - y[j][1];
        num[i * n + j] = 1.0 / (1.0 + dx * dx + dy * dy);
        s += num[i * n + j];
      }
      row_z[i] = s;
    });
    double z = 0;
    for (double s : row_z) z += s;

    detail::parallel_for(n, cfg.workers, [&](std::size_t i) {
      double gx = 0, gy = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const double w = num[i * n + j];
        const double mult = (exag * p[i * n + j] - w / z) * w;
        gx += mult * (y[i][0] - y[j][0]);
        gy += mult * (y[i][1] - y[j][1]);
      }
      grad[i] = {4 * gx, 4 * gy};
    });

    for (std::size_t i = 0; i < n; ++i) {
      for (int d = 0; d < 2; ++d) {
        double& g = gains[i][d];
        g = ((grad[i][d] > 0) != (update[i][d] > 0)) ? g + 0.2 : g * 0.8;
        g = std::max(g, 0.01);
        update[i][d] = momentum * update[i][d] - cfg.learning_rate * g * grad[i][d];
        y[i][d] += update[i][d];
      }
    }
    center();
  }
  center();
  res.final_kl = tsne_kl_divergence(p, y);
  return res;
}

}  // namespace musicvec

#endif  // MUSICVEC_TSNE_HPP
