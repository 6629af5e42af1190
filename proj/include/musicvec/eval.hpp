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
 * @file eval.hpp
 *
 * @brief Tag co-occurrence ground truth and ranking evaluation of embeddings.
 *
 * Each evaluation tag present in the embedding acts as a query. Its candidates
 * are the other present tags. Spearman's rho compares the cosine similarities
 * against the co-occurrence row; nDCG@k takes the candidates in descending
 * cosine order (ties by tag index) and uses the co-occurrence values as gains.
 * Reported values are means over queries.
 */

#ifndef MUSICVEC_EVAL_HPP
#define MUSICVEC_EVAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "musicvec/corpus.hpp"
#include "musicvec/detail/parallel.hpp"
#include "musicvec/embedding.hpp"
#include "musicvec/error.hpp"
#include "musicvec/metrics.hpp"
#include "musicvec/tokenizer.hpp"

namespace musicvec {

/// Track annotations with normalized tags and the evaluation tag list
/// (sorted, deduplicated).
struct TagAnnotationSet {
  std::map<std::string, std::set<std::string>> annotations;
  std::vector<std::string> tag_universe;

  /// Number of annotated tracks carrying each tag.
  std::map<std::string, std::size_t> tag_frequencies() const {
    std::map<std::string, std::size_t> freq;
    for (const auto& [track, tags] : annotations)
      for (const auto& t : tags) ++freq[t];
    return freq;
  }

  /// Universe = every tag that occurs in the annotations.
  void use_all_tags() {
    tag_universe.clear();
    for (const auto& [tag, n] : tag_frequencies()) tag_universe.push_back(tag);
  }

  /// Universe = the n most frequent tags (counted after normalization),
  /// ties broken lexicographically.
  void use_top_tags(std::size_t n) {
    auto freq = tag_frequencies();
    std::vector<std::pair<std::string, std::size_t>> v(freq.begin(), freq.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (v.size() > n) v.resize(n);
    tag_universe.clear();
    for (auto& [tag, c] : v) tag_universe.push_back(tag);
    std::sort(tag_universe.begin(), tag_universe.end());
  }

  /// Universe = the given tags, normalized.
  void use_tags(const std::vector<std::string>& tags) {
    std::set<std::string> s;
    for (const auto& t : tags) s.insert(normalize_tag(t));
    tag_universe.assign(s.begin(), s.end());
  }
};

/// TSV with one "track_id<TAB>tag" pair per line; the universe is set to all
/// tags. Blank lines are skipped.
inline TagAnnotationSet read_annotations(std::istream& in, const std::string& source = "<stream>") {
  TagAnnotationSet set;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto where = [&] { return source + ":" + std::to_string(lineno) + ": "; };
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw Error(ErrorCode::MalformedInput, where() + "expected 'track_id<TAB>tag'");
    const std::string track = line.substr(0, tab);
    if (track.empty()) throw Error(ErrorCode::MalformedInput, where() + "empty track_id");
    try {
      set.annotations[track].insert(normalize_tag(line.substr(tab + 1)));
    } catch (const Error& e) {
      throw Error(e.code(), where() + e.what());
    }
  }
  set.use_all_tags();
  return set;
}

inline TagAnnotationSet read_annotations(const std::string& path) {
  auto in = detail::open_input(path);
  return read_annotations(in, path);
}

inline void write_annotations(std::ostream& out, const TagAnnotationSet& set) {
  for (const auto& [track, tags] : set.annotations)
    for (const auto& t : tags) out << track << '\t' << t << '\n';
}

/// Symmetric tag x tag track counts. counts(i, j) for i != j is the number of
/// tracks carrying both tags; counts(i, i) is the number carrying tag i.
class CooccurrenceMatrix {
 public:
  CooccurrenceMatrix() = default;
  CooccurrenceMatrix(std::vector<std::string> tags, std::size_t tracks)
      : tags_(std::move(tags)), tracks_(tracks), counts_(tags_.size() * tags_.size(), 0) {}

  std::size_t size() const noexcept { return tags_.size(); }
  const std::vector<std::string>& tags() const noexcept { return tags_; }
  std::size_t tracks() const noexcept { return tracks_; }
  std::uint64_t operator()(std::size_t i, std::size_t j) const { return counts_[i * tags_.size() + j]; }
  std::uint64_t diagonal(std::size_t i) const { return (*this)(i, i); }
  std::uint64_t& at(std::size_t i, std::size_t j) { return counts_[i * tags_.size() + j]; }

  std::optional<std::size_t> find(const std::string& tag) const {
    auto it = std::lower_bound(tags_.begin(), tags_.end(), tag);
    if (it == tags_.end() || *it != tag) return std::nullopt;
    return static_cast<std::size_t>(it - tags_.begin());
  }

 private:
  std::vector<std::string> tags_;
  std::size_t tracks_ = 0;
  std::vector<std::uint64_t> counts_;
};

/// Counts unordered tag pairs per track. Tags outside the universe are ignored.
inline CooccurrenceMatrix build_cooccurrence(const TagAnnotationSet& set) {
  if (set.tag_universe.empty()) throw Error(ErrorCode::InvalidArgument, "tag universe is empty");
  std::vector<std::string> tags = set.tag_universe;
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  CooccurrenceMatrix m(std::move(tags), set.annotations.size());
  std::vector<std::size_t> idx;
  for (const auto& [track, track_tags] : set.annotations) {
    idx.clear();
    for (const auto& t : track_tags)
      if (auto i = m.find(t)) idx.push_back(*i);
    for (std::size_t a = 0; a < idx.size(); ++a) {
      ++m.at(idx[a], idx[a]);
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        ++m.at(idx[a], idx[b]);
        ++m.at(idx[b], idx[a]);
      }
    }
  }
  return m;
}

/// How co-occurrence counts become similarity/relevance values.
enum class GroundTruth {
  RawCount,
  /// max(0, log(c_ij * N / (c_i * c_j))).
  PositivePmi,
  /// c_ij / sqrt(c_i * c_j), the cosine of the tag incidence vectors.
  IncidenceCosine,
};

inline double ground_truth_value(const CooccurrenceMatrix& m, std::size_t i, std::size_t j, GroundTruth gt) {
  const double c = static_cast<double>(m(i, j));
  switch (gt) {
    case GroundTruth::RawCount:
      return c;
    case GroundTruth::PositivePmi: {
      if (c == 0) return 0;
      const double pmi = std::log(c * static_cast<double>(m.tracks()) /
                                  (static_cast<double>(m.diagonal(i)) * static_cast<double>(m.diagonal(j))));
      return std::max(0.0, pmi);
    }
    case GroundTruth::IncidenceCosine: {
      if (c == 0) return 0;
      return c / std::sqrt(static_cast<double>(m.diagonal(i)) * static_cast<double>(m.diagonal(j)));
    }
  }
  return c;
}

struct EvalOptions {
  std::size_t k = 30;
  GroundTruth ground_truth = GroundTruth::RawCount;
  /// Also compute rho over the flattened list of all present tag pairs.
  bool pooled = false;
  std::size_t workers = 1;
};

struct QueryScore {
  std::string tag;
  std::optional<double> spearman;
  double ndcg = 0;
};

struct TestSetResult {
  std::string name;
  std::size_t k = 30;
  /// Mean over queries with a defined rho; empty when there are none.
  std::optional<double> mean_spearman;
  double mean_ndcg = 0;
  /// Universe tags present in the embedding (queries scored).
  std::size_t evaluated = 0;
  /// Universe tags missing from the embedding.
  std::size_t skipped = 0;
  /// Queries whose rho is undefined (constant co-occurrence or cosine row).
  std::size_t rho_undefined = 0;
  std::optional<double> pooled_spearman;
  std::vector<QueryScore> per_query;
};

/// Scores `store` against the co-occurrence ground truth. Throws
/// InsufficientOverlap when fewer than two universe tags are in the store.
inline TestSetResult evaluate_embedding(const EmbeddingStore& store, const CooccurrenceMatrix& cooc,
                                        const EvalOptions& opts = {}, const std::string& name = "test") {
  if (opts.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  std::vector<std::size_t> present;
  std::vector<WordIndex> word_of;
  for (std::size_t t = 0; t < cooc.size(); ++t) {
    if (auto w = store.find(cooc.tags()[t])) {
      present.push_back(t);
      word_of.push_back(*w);
    }
  }
  TestSetResult r;
  r.name = name;
  r.k = opts.k;
  r.evaluated = present.size();
  r.skipped = cooc.size() - present.size();
  if (present.size() < 2)
    throw Error(ErrorCode::InsufficientOverlap, "only " + std::to_string(present.size()) + " of " +
                                                    std::to_string(cooc.size()) + " evaluation tags are in the embedding");

  r.per_query.resize(present.size());
  detail::parallel_for(present.size(), opts.workers, [&](std::size_t qi) {
    const std::size_t q = present[qi];
    std::vector<double> cos, rel;
    std::vector<std::size_t> cand;
    for (std::size_t ci = 0; ci < present.size(); ++ci) {
      if (ci == qi) continue;
      cand.push_back(cand.size());
      cos.push_back(store.cosine(word_of[qi], word_of[ci]));
      rel.push_back(ground_truth_value(cooc, q, present[ci], opts.ground_truth));
    }
    QueryScore& s = r.per_query[qi];
    s.tag = cooc.tags()[q];
    if (!is_constant(cos) && !is_constant(rel)) s.spearman = spearman(cos, rel);
    // Candidates are already in tag-index order, so a stable sort breaks
    // cosine ties by tag index.
    std::stable_sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return cos[a] > cos[b]; });
    std::vector<double> ranked;
    ranked.reserve(cand.size());
    for (auto c : cand) ranked.push_back(rel[c]);
    s.ndcg = ndcg_at_k(ranked, opts.k);
  });

  double rho_sum = 0;
  std::size_t rho_n = 0;
  double ndcg_sum = 0;
  for (const auto& s : r.per_query) {
    ndcg_sum += s.ndcg;
    if (s.spearman) {
      rho_sum += *s.spearman;
      ++rho_n;
    }
  }
  r.rho_undefined = present.size() - rho_n;
  if (rho_n) r.mean_spearman = rho_sum / static_cast<double>(rho_n);
  r.mean_ndcg = ndcg_sum / static_cast<double>(present.size());

  if (opts.pooled) {
    std::vector<double> cos, rel;
    for (std::size_t a = 0; a < present.size(); ++a)
      for (std::size_t b = a + 1; b < present.size(); ++b) {
        cos.push_back(store.cosine(word_of[a], word_of[b]));
        rel.push_back(ground_truth_value(cooc, present[a], present[b], opts.ground_truth));
      }
    if (cos.size() >= 2 && !is_constant(cos) && !is_constant(rel)) r.pooled_spearman = spearman(cos, rel);
  }
  return r;
}

/// One row of the comparison table: a trained embedding space and its scores
/// on every test set.
struct EvaluationReport {
  std::string label;
  std::optional<CorpusStats> stats;
  std::vector<TestSetResult> sets;
};

namespace detail {

inline std::string format_fixed(double v, int precision) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(precision) << v;
  return ss.str();
}

inline std::string format_count(std::uint64_t n) {
  if (n >= 1'000'000'000ULL) return format_fixed(static_cast<double>(n) / 1e9, 2) + "B";
  if (n >= 1'000'000ULL) return format_fixed(static_cast<double>(n) / 1e6, 1) + "M";
  if (n >= 1'000ULL) return format_fixed(static_cast<double>(n) / 1e3, 1) + "K";
  return std::to_string(n);
}

inline std::string optional_value(const std::optional<double>& v) { return v ? format_fixed(*v, 4) : "-"; }

inline std::vector<std::string> report_columns(const EvaluationReport& r) {
  std::vector<std::string> cols{"corpus", "size", "unique_words", "unique_tracks", "unique_artists"};
  for (const auto& s : r.sets) {
    cols.push_back(s.name + ":spearman");
    cols.push_back(s.name + ":ndcg@" + std::to_string(s.k));
    cols.push_back(s.name + ":evaluated");
    cols.push_back(s.name + ":skipped");
  }
  return cols;
}

inline std::vector<std::string> report_values(const EvaluationReport& r, bool human) {
  const auto stat = [&](std::uint64_t CorpusStats::*field) -> std::string {
    if (!r.stats) return "-";
    return human ? format_count((*r.stats).*field) : std::to_string((*r.stats).*field);
  };
  std::vector<std::string> vals{r.label.empty() ? "-" : r.label, stat(&CorpusStats::tokens),
                                stat(&CorpusStats::unique_words), stat(&CorpusStats::unique_tracks),
                                stat(&CorpusStats::unique_artists)};
  for (const auto& s : r.sets) {
    vals.push_back(optional_value(s.mean_spearman));
    vals.push_back(format_fixed(s.mean_ndcg, 4));
    vals.push_back(std::to_string(s.evaluated));
    vals.push_back(std::to_string(s.skipped));
  }
  return vals;
}

}  // namespace detail

/// Header row plus one data row, tab-separated, raw integer statistics.
inline void write_report_tsv(std::ostream& out, const EvaluationReport& r) {
  const auto cols = detail::report_columns(r);
  const auto vals = detail::report_values(r, false);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "\t" : "") << cols[i];
  out << '\n';
  for (std::size_t i = 0; i < vals.size(); ++i) out << (i ? "\t" : "") << vals[i];
  out << '\n';
}

/// Aligned console table with the same columns.
inline void write_report_table(std::ostream& out, const EvaluationReport& r) {
  const auto cols = detail::report_columns(r);
  const auto vals = detail::report_values(r, true);
  std::vector<std::size_t> width(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) width[i] = std::max(cols[i].size(), vals[i].size());
  const auto row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out << (i ? " | " : "") << std::setw(static_cast<int>(width[i])) << std::left << cells[i];
    out << '\n';
  };
  row(cols);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 3 * (width.size() - 1), '-') << '\n';
  row(vals);
  out << std::right;
}

}  // namespace musicvec

#endif  // MUSICVEC_EVAL_HPP
