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
 * @file corpus.hpp
 *
 * @brief Documents, track clusters and corpus I/O.
 *
 * A document bounds the training context window. General text contributes one
 * document per input line. Music data contributes one "track cluster" per
 * track: its normalized tags, its tokenized reviews and finally the artist and
 * track identifiers, which are treated as ordinary words. Cluster documents can
 * be multiplied by shuffling their tokens, since their word order carries no
 * meaning.
 */

#ifndef MUSICVEC_CORPUS_HPP
#define MUSICVEC_CORPUS_HPP

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "musicvec/detail/parallel.hpp"
#include "musicvec/detail/random.hpp"
#include "musicvec/error.hpp"
#include "musicvec/tokenizer.hpp"
#include "musicvec/vocabulary.hpp"

namespace musicvec {

enum class DocumentKind { GeneralText, TrackCluster };

struct Document {
  std::vector<std::string> tokens;
  DocumentKind kind = DocumentKind::GeneralText;

  friend bool operator==(const Document&, const Document&) = default;
};

using Corpus = std::vector<Document>;

struct TrackClusterRecord {
  std::string track_id;
  std::string artist_id;
  std::vector<std::string> tags;
  std::vector<std::string> reviews;
};

/// Throws MalformedInput when the identifiers are empty, contain whitespace,
/// or coincide.
inline void validate(const TrackClusterRecord& r) {
  if (r.track_id.empty() || r.artist_id.empty())
    throw Error(ErrorCode::MalformedInput, "track_id and artist_id must be non-empty");
  if (text::has_whitespace(r.track_id) || text::has_whitespace(r.artist_id))
    throw Error(ErrorCode::MalformedInput, "identifiers must not contain whitespace");
  if (r.track_id == r.artist_id)
    throw Error(ErrorCode::MalformedInput, "track_id and artist_id must differ ('" + r.track_id + "')");
}

struct CorpusConfig {
  std::uint64_t min_count = 1;
  /// Frequency subsampling threshold t; disabled when empty.
  std::optional<double> subsample_threshold;
  /// Shuffled copies added per track cluster. Five copies gives the ~6x
  /// growth observed between the plain and augmented music corpora.
  std::uint32_t augment_copies = 5;
  std::uint64_t rng_seed = 1;
};

/// Tags (normalized, first occurrence order, duplicates dropped), then review
/// tokens, then artist_id and track_id.
inline Document build_cluster_document(const TrackClusterRecord& record) {
  Document doc;
  doc.kind = DocumentKind::TrackCluster;
  std::unordered_set<std::string> seen;
  for (const auto& tag : record.tags) {
    std::string t = normalize_tag(tag);
    if (seen.insert(t).second) doc.tokens.push_back(std::move(t));
  }
  for (const auto& review : record.reviews)
    for (auto& tok : tokenize(review)) doc.tokens.push_back(std::move(tok));
  doc.tokens.push_back(record.artist_id);
  doc.tokens.push_back(record.track_id);
  return doc;
}

/// The original document followed by `copies` uniform random permutations
/// of its tokens. Only track clusters may be shuffled.
inline std::vector<Document> shuffle_augment(const Document& doc, std::uint32_t copies,
                                             std::uint64_t seed) {
  if (doc.kind != DocumentKind::TrackCluster)
    throw Error(ErrorCode::WrongKind, "general text documents are never shuffled");
  std::vector<Document> out;
  out.reserve(copies + 1);
  out.push_back(doc);
  Rng rng(seed);
  for (std::uint32_t c = 0; c < copies; ++c) {
    Document copy = doc;
    auto& t = copy.tokens;
    for (std::size_t i = t.size(); i > 1; --i) {
      const auto j = detail::uniform_below(rng, i);
      std::swap(t[i - 1], t[j]);
    }
    out.push_back(std::move(copy));
  }
  return out;
}

/// Augments every track cluster of `music`; document i uses the seed
/// mix(seed, i), so the result does not depend on `workers`.
inline Corpus augment_corpus(std::span<const Document> music, std::uint32_t copies,
                             std::uint64_t seed, std::size_t workers = 1) {
  std::vector<std::vector<Document>> parts(music.size());
  detail::parallel_for(music.size(), workers, [&](std::size_t i) {
    parts[i] = shuffle_augment(music[i], copies, detail::mix_seed(seed, i));
  });
  Corpus out;
  out.reserve(music.size() * (copies + 1));
  for (auto& p : parts)
    for (auto& d : p) out.push_back(std::move(d));
  return out;
}

enum class MergeMode { GeneralOnly, MusicOnly, Both };

/// Single training stream: general documents first, then music documents.
inline Corpus merge_corpora(std::span<const Document> general, std::span<const Document> music,
                            MergeMode mode) {
  Corpus out;
  if (mode != MergeMode::MusicOnly) out.insert(out.end(), general.begin(), general.end());
  if (mode != MergeMode::GeneralOnly) out.insert(out.end(), music.begin(), music.end());
  return out;
}

/// Column values of a corpus summary: retained tokens, vocabulary size and
/// how many distinct track/artist identifiers made it into the vocabulary.
struct CorpusStats {
  std::uint64_t tokens = 0;
  std::uint64_t unique_words = 0;
  std::uint64_t unique_tracks = 0;
  std::uint64_t unique_artists = 0;
};

inline CorpusStats compute_corpus_stats(const Vocabulary& vocab,
                                        const std::set<std::string>& track_ids,
                                        const std::set<std::string>& artist_ids) {
  CorpusStats s;
  s.tokens = vocab.total_tokens();
  s.unique_words = vocab.size();
  for (const auto& t : track_ids) s.unique_tracks += vocab.contains(t);
  for (const auto& a : artist_ids) s.unique_artists += vocab.contains(a);
  return s;
}

// ---------------------------------------------------------------------------
// I/O

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  return out;
}

inline void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

/// Plain UTF-8 text, one document per line. Lines without tokens are dropped.
inline Corpus read_general_corpus(std::istream& in) {
  Corpus docs;
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = tokenize(line);
    if (!tokens.empty()) docs.push_back({std::move(tokens), DocumentKind::GeneralText});
  }
  return docs;
}

inline Corpus read_general_corpus(const std::string& path) {
  auto in = detail::open_input(path);
  return read_general_corpus(in);
}

inline TrackClusterRecord parse_track_record(const nlohmann::json& j) {
  TrackClusterRecord r;
  if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "record is not a JSON object");
  const auto string_field = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string())
      throw Error(ErrorCode::MalformedInput, std::string("missing string field '") + key + "'");
    return it->get<std::string>();
  };
  const auto list_field = [&](const char* key) {
    std::vector<std::string> out;
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return out;
    if (!it->is_array())
      throw Error(ErrorCode::MalformedInput, std::string("field '") + key + "' must be a list");
    for (const auto& v : *it) {
      if (!v.is_string())
        throw Error(ErrorCode::MalformedInput, std::string("field '") + key + "' must hold strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  r.track_id = string_field("track_id");
  r.artist_id = string_field("artist_id");
  r.tags = list_field("tags");
  r.reviews = list_field("reviews");
  validate(r);
  return r;
}

/// JSON lines: {"track_id", "artist_id", "tags": [...], "reviews": [...]}.
/// Errors name `source` and the 1-based line number.
inline std::vector<TrackClusterRecord> read_track_records(std::istream& in,
                                                          const std::string& source = "<stream>") {
  std::vector<TrackClusterRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      auto rec = parse_track_record(nlohmann::json::parse(line));
      for (const auto& tag : rec.tags) (void)normalize_tag(tag);
      records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedInput, source + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return records;
}

inline std::vector<TrackClusterRecord> read_track_records(const std::string& path) {
  auto in = detail::open_input(path);
  return read_track_records(in, path);
}

inline void write_track_records(std::ostream& out, std::span<const TrackClusterRecord> records) {
  for (const auto& r : records) {
    nlohmann::json j{{"track_id", r.track_id},
                     {"artist_id", r.artist_id},
                     {"tags", r.tags},
                     {"reviews", r.reviews}};
    out << j.dump() << '\n';
  }
}

/// Pre-tokenized cache: one document per line, tokens separated by a space.
inline void write_token_cache(std::ostream& out, std::span<const Document> docs) {
  for (const auto& d : docs) {
    for (std::size_t i = 0; i < d.tokens.size(); ++i) {
      if (i) out << ' ';
      out << d.tokens[i];
    }
    out << '\n';
  }
}

/// Reads a cache written by write_token_cache. Tokens are taken verbatim.
inline Corpus read_token_cache(std::istream& in, DocumentKind kind = DocumentKind::GeneralText) {
  Corpus docs;
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = split_whitespace(line);
    if (!tokens.empty()) docs.push_back({std::move(tokens), kind});
  }
  return docs;
}

}  // namespace musicvec

#endif  // MUSICVEC_CORPUS_HPP
