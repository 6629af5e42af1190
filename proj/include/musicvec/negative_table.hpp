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

#ifndef MUSICVEC_NEGATIVE_TABLE_HPP
#define MUSICVEC_NEGATIVE_TABLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "musicvec/detail/random.hpp"
#include "musicvec/error.hpp"
#include "musicvec/vocabulary.hpp"

namespace musicvec {

/// Flat table of word indices where word i fills a share of slots
/// proportional to count_i^power. Sampling a uniform slot draws from the
/// smoothed unigram distribution.
class NegativeTable {
 public:
  NegativeTable() = default;
  explicit NegativeTable(std::vector<WordIndex> table) : table_(std::move(table)) {}

  std::size_t size() const noexcept { return table_.size(); }
  WordIndex operator[](std::size_t i) const { return table_[i]; }
  const std::vector<WordIndex>& slots() const noexcept { return table_; }

  WordIndex sample(Rng& rng) const { return table_[detail::uniform_below(rng, table_.size())]; }

  /// Slots held by each of the first `vocab_size` words.
  std::vector<std::size_t> slot_counts(std::size_t vocab_size) const {
    std::vector<std::size_t> c(vocab_size, 0);
    for (auto w : table_) ++c.at(w);
    return c;
  }

 private:
  std::vector<WordIndex> table_;
};

/// Slot counts by largest-remainder rounding of size * w_i / sum(w), with
/// w_i = count_i^power. Leftover slots go to the largest fractional parts,
/// lower index first on ties. Words occupy contiguous runs in index order.
inline std::vector<std::size_t> negative_slot_counts(const std::vector<std::uint64_t>& counts,
                                                     double power, std::size_t size) {
  if (counts.empty()) throw Error(ErrorCode::EmptyCorpus, "negative table needs a non-empty vocabulary");
  if (size < counts.size())
    throw Error(ErrorCode::TableTooSmall, "table size " + std::to_string(size) + " is smaller than vocabulary size " +
                                              std::to_string(counts.size()));
  std::vector<long double> weight(counts.size());
  long double total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    weight[i] = std::pow(static_cast<long double>(counts[i]), static_cast<long double>(power));
    total += weight[i];
  }
  std::vector<std::size_t> slots(counts.size());
  std::vector<long double> remainder(counts.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const long double quota = static_cast<long double>(size) * weight[i] / total;
    slots[i] = static_cast<std::size_t>(std::floor(quota));
    remainder[i] = quota - static_cast<long double>(slots[i]);
    assigned += slots[i];
  }
  // Rounding in the quotas can leave the floor sum off by one either way.
  while (assigned > size) {
    auto it = std::max_element(slots.begin(), slots.end());
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < size; k = (k + 1) % order.size()) {
    ++slots[order[k]];
    ++assigned;
  }
  return slots;
}

inline NegativeTable build_negative_table(const Vocabulary& vocab, double power, std::size_t size) {
  const auto slots = negative_slot_counts(vocab.counts(), power, size);
  std::vector<WordIndex> table;
  table.reserve(size);
  for (std::size_t i = 0; i < slots.size(); ++i) table.insert(table.end(), slots[i], static_cast<WordIndex>(i));
  return NegativeTable(std::move(table));
}

}  // namespace musicvec

#endif  // MUSICVEC_NEGATIVE_TABLE_HPP
