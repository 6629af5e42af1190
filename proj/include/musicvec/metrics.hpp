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

#ifndef MUSICVEC_METRICS_HPP
#define MUSICVEC_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "musicvec/error.hpp"

namespace musicvec {

/// 1-based fractional ranks; tied values share the mean of their positions.
inline std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw Error(ErrorCode::DegenerateInput, "correlation of a constant list is undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline bool is_constant(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

/// Spearman's rho: Pearson correlation of the average-tie ranks.
inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "spearman needs two lists of equal length >= 2");
  if (is_constant(x) || is_constant(y))
    throw Error(ErrorCode::DegenerateInput, "spearman is undefined for a constant list");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

/// sum_{i=1..min(k,n)} rel_i / log2(i + 1).
inline double dcg_at_k(std::span<const double> relevances, std::size_t k) {
  double dcg = 0;
  const std::size_t n = std::min(k, relevances.size());
  for (std::size_t i = 0; i < n; ++i) dcg += relevances[i] / std::log2(static_cast<double>(i) + 2.0);
  return dcg;
}

/// DCG@k of the predicted order over DCG@k of the ideal (descending) order;
/// 0 when no relevance is positive.
inline double ndcg_at_k(std::span<const double> predicted_relevances, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  for (double r : predicted_relevances)
    if (!(r >= 0)) throw Error(ErrorCode::InvalidArgument, "relevances must be non-negative");
  std::vector<double> ideal(predicted_relevances.begin(), predicted_relevances.end());
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg_at_k(ideal, k);
  if (idcg == 0) return 0;
  return std::min(1.0, dcg_at_k(predicted_relevances, k) / idcg);
}

}  // namespace musicvec

#endif  // MUSICVEC_METRICS_HPP
