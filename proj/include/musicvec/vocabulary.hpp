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

#ifndef MUSICVEC_VOCABULARY_HPP
#define MUSICVEC_VOCABULARY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "musicvec/error.hpp"

namespace musicvec {

using WordIndex = std::uint32_t;

/**
 * @brief Word to (index, count) mapping.
 *
 * Indices are contiguous from 0 and follow descending count, ties broken
 * lexicographically. Only words with count >= min_count are kept and
 * total_tokens sums the retained counts.
 */
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Builds from raw (word, count) pairs. Pairs below min_count are dropped;
  /// duplicate words are merged.
  static Vocabulary from_counts(std::vector<std::pair<std::string, std::uint64_t>> counts,
                                std::uint64_t min_count = 1) {
    if (min_count < 1) throw Error(ErrorCode::InvalidArgument, "min_count must be >= 1");
    std::unordered_map<std::string, std::uint64_t> merged;
    for (auto& [w, c] : counts) merged[w] += c;
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    kept.reserve(merged.size());
    for (auto& [w, c] : merged)
      if (c >= min_count) kept.emplace_back(w, c);
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    Vocabulary v;
    v.min_count_ = min_count;
    v.words_.reserve(kept.size());
    v.counts_.reserve(kept.size());
    for (auto& [w, c] : kept) {
      v.index_.emplace(w, static_cast<WordIndex>(v.words_.size()));
      v.words_.push_back(std::move(w));
      v.counts_.push_back(c);
      v.total_tokens_ += c;
    }
    return v;
  }

  /// Word list with unknown counts (e.g. a loaded model); every count is 1.
  static Vocabulary from_words(std::vector<std::string> words) {
    Vocabulary v;
    v.min_count_ = 1;
    v.words_ = std::move(words);
    v.counts_.assign(v.words_.size(), 1);
    v.total_tokens_ = v.words_.size();
    for (std::size_t i = 0; i < v.words_.size(); ++i) {
      if (!v.index_.emplace(v.words_[i], static_cast<WordIndex>(i)).second)
        throw Error(ErrorCode::DuplicateWord, "duplicate word '" + v.words_[i] + "'");
    }
    return v;
  }

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }
  std::uint64_t min_count() const noexcept { return min_count_; }

  const std::string& word(WordIndex i) const { return words_.at(i); }
  std::uint64_t count(WordIndex i) const { return counts_.at(i); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  std::optional<WordIndex> find(const std::string& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const std::string& w) const { return index_.count(w) != 0; }

  /// Index of `w`, or UnknownWord naming it.
  WordIndex at(const std::string& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) throw Error(ErrorCode::UnknownWord, "'" + w + "' is not in the vocabulary");
    return it->second;
  }

  /// Relative frequency f(w) = count / total_tokens.
  double frequency(WordIndex i) const {
    return static_cast<double>(counts_.at(i)) / static_cast<double>(total_tokens_);
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, WordIndex> index_;
  std::uint64_t total_tokens_ = 0;
  std::uint64_t min_count_ = 1;
};

/// Counts every token of every document and keeps words with count >=
/// min_count. Throws EmptyCorpus when nothing survives.
template <class DocumentRange>
Vocabulary build_vocabulary(const DocumentRange& documents, std::uint64_t min_count) {
  if (min_count < 1) throw Error(ErrorCode::InvalidArgument, "min_count must be >= 1");
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& doc : documents)
    for (const auto& tok : doc.tokens) ++counts[tok];
  std::vector<std::pair<std::string, std::uint64_t>> pairs(counts.begin(), counts.end());
  Vocabulary v = Vocabulary::from_counts(std::move(pairs), min_count);
  if (v.empty())
    throw Error(ErrorCode::EmptyCorpus,
                "no word reaches min_count=" + std::to_string(min_count));
  return v;
}

/// Probability of keeping one occurrence of a word under frequency
/// subsampling: min(1, sqrt(t / f)) with f = word_count / total_tokens.
inline double subsample_keep_probability(std::uint64_t word_count, std::uint64_t total_tokens,
                                         double threshold) {
  if (word_count < 1 || total_tokens < word_count || !(threshold > 0))
    throw Error(ErrorCode::InvalidArgument, "subsampling needs 1 <= count <= total and t > 0");
  const double f = static_cast<double>(word_count) / static_cast<double>(total_tokens);
  return std::min(1.0, std::sqrt(threshold / f));
}

}  // namespace musicvec

#endif  // MUSICVEC_VOCABULARY_HPP
