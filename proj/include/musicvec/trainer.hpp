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
 * @file trainer.hpp
 *
 * @brief CBOW word2vec with negative sampling.
 *
 * For a center word with context C, h is the mean of the context input
 * vectors and the loss is
 *
 *     L = -log s(v'_o . h) - sum_k log s(-v'_k . h)
 *
 * over the target output vector v'_o and K sampled negatives v'_k. One SGD
 * step moves every output vector by lr * (label - s(score)) * h and every
 * context input vector by lr / |C| times the accumulated error
 * e = sum_j (label_j - s(score_j)) * v'_j, all computed from pre-update values.
 *
 * Context windows never cross document boundaries. With more than one worker
 * the weight matrices are updated without locks (lost updates are tolerated);
 * a single worker is bit-for-bit deterministic.
 */

#ifndef MUSICVEC_TRAINER_HPP
#define MUSICVEC_TRAINER_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "musicvec/corpus.hpp"
#include "musicvec/detail/parallel.hpp"
#include "musicvec/detail/random.hpp"
#include "musicvec/error.hpp"
#include "musicvec/negative_table.hpp"
#include "musicvec/vocabulary.hpp"

namespace musicvec {

struct TrainConfig {
  std::size_t dim = 100;
  std::size_t window = 15;
  std::size_t epochs = 5;
  std::size_t negatives = 5;
  double initial_lr = 0.025;
  /// Defaults to 1e-4 * initial_lr.
  std::optional<double> min_lr;
  std::size_t negative_table_size = 10'000'000;
  double unigram_power = 0.75;
  std::size_t workers = 1;
  std::uint64_t rng_seed = 1;
  /// Use the full window at every position instead of sampling 1..window.
  bool fixed_window = false;
  /// Frequency subsampling threshold; disabled when empty.
  std::optional<double> subsample_threshold;

  double resolved_min_lr() const { return min_lr.value_or(1e-4 * initial_lr); }

  void validate() const {
    if (dim < 1 || window < 1 || epochs < 1 || negatives < 1 || workers < 1)
      throw Error(ErrorCode::InvalidArgument, "dim, window, epochs, negatives and workers must be >= 1");
    const double lo = resolved_min_lr();
    if (!(lo > 0) || !(lo <= initial_lr))
      throw Error(ErrorCode::InvalidArgument, "need 0 < min_lr <= initial_lr");
    if (subsample_threshold && !(*subsample_threshold > 0 && *subsample_threshold <= 1))
      throw Error(ErrorCode::InvalidArgument, "subsample threshold must lie in (0, 1]");
  }
};

/// Input and output weight matrices (row-major, V x dim) plus vocabulary.
template <class Real>
struct BasicEmbeddingModel {
  static_assert(std::is_floating_point_v<Real>);

  Vocabulary vocab;
  std::size_t dim = 0;
  std::vector<Real> input;
  std::vector<Real> output;

  std::size_t rows() const noexcept { return vocab.size(); }
  std::span<Real> input_row(std::size_t i) { return {input.data() + i * dim, dim}; }
  std::span<const Real> input_row(std::size_t i) const { return {input.data() + i * dim, dim}; }
  std::span<Real> output_row(std::size_t i) { return {output.data() + i * dim, dim}; }
  std::span<const Real> output_row(std::size_t i) const { return {output.data() + i * dim, dim}; }

  bool all_finite() const {
    const auto finite = [](Real x) { return std::isfinite(x); };
    return std::all_of(input.begin(), input.end(), finite) && std::all_of(output.begin(), output.end(), finite);
  }
};

using EmbeddingModel = BasicEmbeddingModel<float>;

/// Input weights i.i.d. uniform in [-0.5/dim, 0.5/dim], output weights zero.
template <class Real = float>
BasicEmbeddingModel<Real> init_model(const Vocabulary& vocab, const TrainConfig& config) {
  if (vocab.empty()) throw Error(ErrorCode::EmptyCorpus, "cannot initialize a model with an empty vocabulary");
  if (config.dim < 1) throw Error(ErrorCode::InvalidArgument, "dim must be >= 1");
  BasicEmbeddingModel<Real> m;
  m.vocab = vocab;
  m.dim = config.dim;
  m.input.resize(vocab.size() * config.dim);
  m.output.assign(vocab.size() * config.dim, Real(0));
  Rng rng(config.rng_seed);
  const double scale = 1.0 / static_cast<double>(config.dim);
  for (auto& w : m.input) w = static_cast<Real>((detail::uniform01(rng) - 0.5) * scale);
  return m;
}

/// max(min_lr, initial_lr * (1 - progress)).
inline double learning_rate(const TrainConfig& config, double progress) {
  return std::max(config.resolved_min_lr(), config.initial_lr * (1.0 - progress));
}

namespace detail {

struct PlainAccess {
  template <class T>
  static T load(const T& x) noexcept { return x; }
  template <class T>
  static void store(T& x, T v) noexcept { x = v; }
};

// Relaxed atomic access for lock-free shared updates. On common hardware this
// compiles to plain loads and stores but keeps concurrent access well-defined.
struct RelaxedAccess {
  template <class T>
  static T load(const T& x) noexcept {
    return std::atomic_ref<T>(const_cast<T&>(x)).load(std::memory_order_relaxed);
  }
  template <class T>
  static void store(T& x, T v) noexcept {
    std::atomic_ref<T>(x).store(v, std::memory_order_relaxed);
  }
};

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// log(sigmoid(x)) without overflow.
inline double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

template <class Real>
struct StepScratch {
  std::vector<Real> hidden;
  std::vector<Real> error;
  std::vector<double> gain;
  void resize(std::size_t dim, std::size_t k) {
    hidden.resize(dim);
    error.resize(dim);
    gain.resize(k + 1);
  }
};

template <class Access, class Real>
double cbow_update_impl(std::span<const WordIndex> context, WordIndex target,
                        std::span<const WordIndex> negatives, Real* input, Real* output,
                        std::size_t dim, double lr, StepScratch<Real>& s) {
  s.resize(dim, negatives.size());
  Real* h = s.hidden.data();
  Real* e = s.error.data();
  std::fill(h, h + dim, Real(0));
  std::fill(e, e + dim, Real(0));
  for (WordIndex c : context) {
    const Real* row = input + static_cast<std::size_t>(c) * dim;
    for (std::size_t d = 0; d < dim; ++d) h[d] += Access::load(row[d]);
  }
  const Real inv = Real(1) / static_cast<Real>(context.size());
  for (std::size_t d = 0; d < dim; ++d) h[d] *= inv;

  const auto score = [&](WordIndex w) {
    const Real* row = output + static_cast<std::size_t>(w) * dim;
    Real f = 0;
    for (std::size_t d = 0; d < dim; ++d) f += Access::load(row[d]) * h[d];
    return static_cast<double>(f);
  };

  // Scores first, so repeated negatives see the same pre-update vector.
  double loss = 0;
  const double s_target = score(target);
  loss -= log_sigmoid(s_target);
  s.gain[0] = lr * (1.0 - sigmoid(s_target));
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    const double s_neg = score(negatives[k]);
    loss -= log_sigmoid(-s_neg);
    s.gain[k + 1] = -lr * sigmoid(s_neg);
  }

  const auto accumulate = [&](WordIndex w, double g) {
    const Real* row = output + static_cast<std::size_t>(w) * dim;
    const Real gr = static_cast<Real>(g);
    for (std::size_t d = 0; d < dim; ++d) e[d] += gr * Access::load(row[d]);
  };
  accumulate(target, s.gain[0]);
  for (std::size_t k = 0; k < negatives.size(); ++k) accumulate(negatives[k], s.gain[k + 1]);

  const auto apply_output = [&](WordIndex w, double g) {
    Real* row = output + static_cast<std::size_t>(w) * dim;
    const Real gr = static_cast<Real>(g);
    for (std::size_t d = 0; d < dim; ++d) Access::store(row[d], Access::load(row[d]) + gr * h[d]);
  };
  apply_output(target, s.gain[0]);
  for (std::size_t k = 0; k < negatives.size(); ++k) apply_output(negatives[k], s.gain[k + 1]);

  for (WordIndex c : context) {
    Real* row = input + static_cast<std::size_t>(c) * dim;
    for (std::size_t d = 0; d < dim; ++d) Access::store(row[d], Access::load(row[d]) + e[d] * inv);
  }
  return loss;
}

inline constexpr int kMaxNegativeAttempts = 100;

/// Draws up to k negatives distinct from `target`; a slot whose 100 draws all
/// hit the target is dropped.
inline void sample_negatives(const NegativeTable& table, WordIndex target, std::size_t k, Rng& rng,
                             std::vector<WordIndex>& out) {
  out.clear();
  for (std::size_t i = 0; i < k; ++i) {
    for (int attempt = 0; attempt < kMaxNegativeAttempts; ++attempt) {
      const WordIndex w = table.sample(rng);
      if (w != target) {
        out.push_back(w);
        break;
      }
    }
  }
}

}  // namespace detail

/// One SGD step with explicitly given negatives. Returns the pre-update loss.
template <class Real>
double cbow_update(BasicEmbeddingModel<Real>& model, std::span<const WordIndex> context, WordIndex target,
                   std::span<const WordIndex> negatives, double lr) {
  detail::StepScratch<Real> scratch;
  return detail::cbow_update_impl<detail::PlainAccess>(context, target, negatives, model.input.data(),
                                                       model.output.data(), model.dim, lr, scratch);
}

/// Samples `k` negatives from the table (resampling collisions with the
/// target) and applies one SGD step. Returns the pre-update loss.
template <class Real>
double cbow_step(std::span<const WordIndex> context, WordIndex target, BasicEmbeddingModel<Real>& model,
                 const NegativeTable& table, std::size_t k, double lr, Rng& rng) {
  std::vector<WordIndex> negatives;
  detail::sample_negatives(table, target, k, rng, negatives);
  return cbow_update(model, context, target, negatives, lr);
}

/// Optional instrumentation for train().
struct TrainHooks {
  /// Progress lines (tokens/sec, lr, running mean loss) every 100k steps.
  std::ostream* progress = nullptr;
  /// Called for every training step with the center position and the context
  /// positions, as offsets into the concatenation of all encoded documents.
  /// Invoked from worker threads when workers > 1.
  std::function<void(std::uint64_t, std::span<const std::uint64_t>)> on_window;
};

struct EncodedCorpus {
  std::vector<WordIndex> tokens;
  /// offsets[d]..offsets[d+1] is document d; size = documents + 1.
  std::vector<std::size_t> offsets;
};

/// Maps documents to vocabulary indices, dropping out-of-vocabulary tokens.
inline EncodedCorpus encode_corpus(const Vocabulary& vocab, std::span<const Document> docs) {
  EncodedCorpus enc;
  enc.offsets.reserve(docs.size() + 1);
  enc.offsets.push_back(0);
  for (const auto& d : docs) {
    for (const auto& t : d.tokens)
      if (auto i = vocab.find(t)) enc.tokens.push_back(*i);
    enc.offsets.push_back(enc.tokens.size());
  }
  return enc;
}

namespace detail {

template <class Access, class Real>
void train_shard(BasicEmbeddingModel<Real>& model, const EncodedCorpus& enc, std::size_t doc_begin,
                 std::size_t doc_end, std::size_t worker, const TrainConfig& cfg, const NegativeTable& table,
                 const std::vector<double>& keep_prob, std::atomic<std::uint64_t>& shared_done,
                 std::uint64_t total_work, const TrainHooks& hooks) {
  Rng rng(mix_seed(cfg.rng_seed, 0x5eed0000ULL + worker));
  StepScratch<Real> scratch;
  std::vector<WordIndex> kept;
  std::vector<std::uint64_t> kept_pos;
  std::vector<WordIndex> context;
  std::vector<std::uint64_t> context_pos;
  std::vector<WordIndex> negatives;
  const bool report = hooks.progress != nullptr && worker == 0;
  const bool trace = static_cast<bool>(hooks.on_window);

  std::uint64_t unflushed = 0;
  std::uint64_t steps = 0;
  double loss_sum = 0;
  std::uint64_t loss_steps = 0;
  const auto start = std::chrono::steady_clock::now();

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t d = doc_begin; d < doc_end; ++d) {
      const std::size_t lo = enc.offsets[d];
      const std::size_t hi = enc.offsets[d + 1];
      const double lr =
          learning_rate(cfg, static_cast<double>(shared_done.load(std::memory_order_relaxed) + unflushed) /
                                 static_cast<double>(total_work));
      kept.clear();
      kept_pos.clear();
      for (std::size_t p = lo; p < hi; ++p) {
        const WordIndex w = enc.tokens[p];
        if (keep_prob[w] < 1.0 && uniform01(rng) >= keep_prob[w]) continue;
        kept.push_back(w);
        if (trace) kept_pos.push_back(p);
      }
      const std::size_t n = kept.size();
      for (std::size_t p = 0; p < n; ++p) {
        const std::size_t b = cfg.fixed_window ? cfg.window : 1 + uniform_below(rng, cfg.window);
        const std::size_t from = p >= b ? p - b : 0;
        const std::size_t to = std::min(n - 1, p + b);
        context.clear();
        context_pos.clear();
        for (std::size_t q = from; q <= to; ++q) {
          if (q == p) continue;
          context.push_back(kept[q]);
          if (trace) context_pos.push_back(kept_pos[q]);
        }
        if (context.empty()) continue;
        if (trace) hooks.on_window(kept_pos[p], context_pos);
        sample_negatives(table, kept[p], cfg.negatives, rng, negatives);
        loss_sum += cbow_update_impl<Access>(context, kept[p], negatives, model.input.data(), model.output.data(),
                                             model.dim, lr, scratch);
        ++loss_steps;
        if (report && ++steps % 100000 == 0) {
          const double secs =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          const double done = static_cast<double>(shared_done.load(std::memory_order_relaxed) + unflushed);
          *hooks.progress << "epoch " << epoch + 1 << "/" << cfg.epochs << "  progress " << std::fixed
                          << std::setprecision(1) << 100.0 * done / static_cast<double>(total_work) << "%  "
                          << std::setprecision(0) << done / std::max(secs, 1e-9) << " tokens/s  lr "
                          << std::setprecision(6) << lr << "  loss " << loss_sum / loss_steps << '\n'
                          << std::defaultfloat;
          loss_sum = 0;
          loss_steps = 0;
        }
      }
      unflushed += hi - lo;
      if (unflushed >= 10000 || d + 1 == doc_end) {
        shared_done.fetch_add(unflushed, std::memory_order_relaxed);
        unflushed = 0;
      }
    }
  }
}

}  // namespace detail

/// Trains on `docs` with a fixed vocabulary. Tokens outside the vocabulary
/// are dropped before windows are formed. Throws EmptyCorpus when no
/// in-vocabulary token remains.
template <class Real = float>
BasicEmbeddingModel<Real> train(const Vocabulary& vocab, std::span<const Document> docs, const TrainConfig& cfg,
                                const TrainHooks& hooks = {}) {
  cfg.validate();
  if (vocab.empty()) throw Error(ErrorCode::EmptyCorpus, "empty vocabulary");
  const EncodedCorpus enc = encode_corpus(vocab, docs);
  if (enc.tokens.empty()) throw Error(ErrorCode::EmptyCorpus, "no in-vocabulary tokens to train on");

  BasicEmbeddingModel<Real> model = init_model<Real>(vocab, cfg);
  const NegativeTable table =
      build_negative_table(vocab, cfg.unigram_power, std::max(cfg.negative_table_size, vocab.size()));

  // Frequencies come from the encoded corpus itself, which may differ from
  // the corpus the vocabulary was counted on.
  std::vector<std::uint64_t> occurrences(vocab.size(), 0);
  for (auto w : enc.tokens) ++occurrences[w];
  std::vector<double> keep_prob(vocab.size(), 1.0);
  if (cfg.subsample_threshold) {
    for (std::size_t i = 0; i < vocab.size(); ++i)
      if (occurrences[i] > 0)
        keep_prob[i] = subsample_keep_probability(occurrences[i], enc.tokens.size(), *cfg.subsample_threshold);
  }

  const std::uint64_t total_work = static_cast<std::uint64_t>(cfg.epochs) * enc.tokens.size();
  std::atomic<std::uint64_t> done{0};
  const std::size_t documents = docs.size();
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, documents));
  if (workers == 1) {
    detail::train_shard<detail::PlainAccess>(model, enc, 0, documents, 0, cfg, table, keep_prob, done, total_work,
                                             hooks);
  } else {
    detail::parallel_chunks(documents, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
      detail::train_shard<detail::RelaxedAccess>(model, enc, begin, end, w, cfg, table, keep_prob, done,
                                                 total_work, hooks);
    });
  }
  if (hooks.progress)
    *hooks.progress << "trained " << total_work << " token positions with " << workers << " worker(s)\n";
  return model;
}

/// Builds the vocabulary from `docs` with `min_count`, then trains.
template <class Real = float>
BasicEmbeddingModel<Real> train(std::span<const Document> docs, const TrainConfig& cfg, std::uint64_t min_count = 1,
                                const TrainHooks& hooks = {}) {
  return train<Real>(build_vocabulary(docs, min_count), docs, cfg, hooks);
}

}  // namespace musicvec

#endif  // MUSICVEC_TRAINER_HPP
