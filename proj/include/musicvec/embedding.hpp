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

#ifndef MUSICVEC_EMBEDDING_HPP
#define MUSICVEC_EMBEDDING_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "musicvec/error.hpp"
#include "musicvec/trainer.hpp"
#include "musicvec/vocabulary.hpp"

namespace musicvec {

struct Neighbor {
  std::string word;
  WordIndex index = 0;
  double cosine = 0;
};

/**
 * @brief Immutable word vectors with precomputed norms.
 *
 * Cosine similarity against a zero vector is 0. Safe for any number of
 * concurrent readers.
 */
class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  /// Throws DuplicateWord, or InvalidArgument when the matrix shape does not
  /// match words.size() x dim.
  EmbeddingStore(std::vector<std::string> words, std::size_t dim, std::vector<float> vectors)
      : vocab_(Vocabulary::from_words(std::move(words))), dim_(dim), vectors_(std::move(vectors)) {
    if (vectors_.size() != vocab_.size() * dim_)
      throw Error(ErrorCode::InvalidArgument, "vector matrix does not match vocabulary size x dim");
    norms_.resize(vocab_.size());
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
      double s = 0;
      for (float x : vector(i)) s += static_cast<double>(x) * x;
      norms_[i] = std::sqrt(s);
    }
  }

  /// Query vectors are the model's input vectors.
  template <class Real>
  static EmbeddingStore from_model(const BasicEmbeddingModel<Real>& model) {
    std::vector<float> v(model.input.begin(), model.input.end());
    return EmbeddingStore(model.vocab.words(), model.dim, std::move(v));
  }

  std::size_t size() const noexcept { return vocab_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& words() const noexcept { return vocab_.words(); }
  const std::string& word(WordIndex i) const { return vocab_.word(i); }
  const std::vector<float>& data() const noexcept { return vectors_; }
  bool contains(const std::string& w) const { return vocab_.contains(w); }
  std::optional<WordIndex> find(const std::string& w) const { return vocab_.find(w); }
  WordIndex index(const std::string& w) const { return vocab_.at(w); }
  double norm(WordIndex i) const { return norms_.at(i); }

  std::span<const float> vector(WordIndex i) const { return {vectors_.data() + std::size_t{i} * dim_, dim_}; }

  double cosine(WordIndex a, WordIndex b) const {
    const double na = norms_[a];
    const double nb = norms_[b];
    if (na == 0 || nb == 0) return 0;
    // Each product a*b equals b*a, so the sum is symmetric term by term.
    const float* va = vectors_.data() + std::size_t{a} * dim_;
    const float* vb = vectors_.data() + std::size_t{b} * dim_;
    double dot = 0;
    for (std::size_t d = 0; d < dim_; ++d) dot += static_cast<double>(va[d]) * static_cast<double>(vb[d]);
    return std::clamp(dot / (na * nb), -1.0, 1.0);
  }

  double cosine(const std::string& a, const std::string& b) const { return cosine(index(a), index(b)); }

  /// Top-k words by descending cosine, ties by ascending index, the query
  /// itself excluded. With `restrict`, only those words (when present) are
  /// candidates.
  std::vector<Neighbor> most_similar(const std::string& query, std::size_t k,
                                     std::optional<std::span<const std::string>> restrict = std::nullopt) const {
    const WordIndex q = index(query);
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    std::vector<WordIndex> pool;
    if (restrict) {
      for (const auto& w : *restrict)
        if (auto i = vocab_.find(w); i && *i != q) pool.push_back(*i);
      std::sort(pool.begin(), pool.end());
      pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    } else {
      pool.reserve(size());
      for (WordIndex i = 0; i < size(); ++i)
        if (i != q) pool.push_back(i);
    }
    std::vector<std::pair<double, WordIndex>> scored;
    scored.reserve(pool.size());
    for (auto i : pool) scored.emplace_back(cosine(q, i), i);
    const std::size_t n = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                      [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
    std::vector<Neighbor> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back({word(scored[i].second), scored[i].second, scored[i].first});
    return out;
  }

 private:
  Vocabulary vocab_;
  std::size_t dim_ = 0;
  std::vector<float> vectors_;
  std::vector<double> norms_;
};

}  // namespace musicvec

#endif  // MUSICVEC_EMBEDDING_HPP
