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
 * @file synthetic.hpp
 *
 * @brief Topic-structured toy corpora for desk-scale experiments.
 *
 * Two generators:
 *  - a plain topic corpus where every document draws its words from one
 *    topic's private vocabulary;
 *  - a music setup with track clusters whose tags and review words follow
 *    the track's topic, topic-agnostic general text over the same words, and
 *    tag annotations for co-occurrence ground truth.
 */

#ifndef MUSICVEC_SYNTHETIC_HPP
#define MUSICVEC_SYNTHETIC_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "musicvec/corpus.hpp"
#include "musicvec/detail/random.hpp"
#include "musicvec/error.hpp"
#include "musicvec/eval.hpp"

namespace musicvec::synthetic {

namespace detail {

inline std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

}  // namespace detail

struct TopicCorpusConfig {
  std::size_t topics = 2;
  std::size_t words_per_topic = 20;
  std::size_t documents = 1000;
  std::size_t document_length = 20;
  std::uint64_t seed = 1;
};

struct TopicCorpus {
  Corpus documents;
  /// Word -> topic index.
  std::map<std::string, std::size_t> topic_of;
};

/// Document i belongs to topic i % topics and draws document_length words
/// uniformly from that topic's words ("t<topic>w<index>"). Topics never share
/// a document.
inline TopicCorpus make_topic_corpus(const TopicCorpusConfig& cfg) {
  if (cfg.topics < 1 || cfg.words_per_topic < 1 || cfg.document_length < 1)
    throw Error(ErrorCode::InvalidArgument, "topics, words_per_topic and document_length must be >= 1");
  TopicCorpus out;
  std::vector<std::vector<std::string>> words(cfg.topics);
  for (std::size_t t = 0; t < cfg.topics; ++t)
    for (std::size_t w = 0; w < cfg.words_per_topic; ++w) {
      words[t].push_back("t" + std::to_string(t) + detail::numbered("w", w, 2));
      out.topic_of[words[t].back()] = t;
    }
  Rng rng(cfg.seed);
  out.documents.reserve(cfg.documents);
  for (std::size_t d = 0; d < cfg.documents; ++d) {
    const auto& pool = words[d % cfg.topics];
    Document doc;
    doc.kind = DocumentKind::GeneralText;
    for (std::size_t i = 0; i < cfg.document_length; ++i)
      doc.tokens.push_back(pool[musicvec::detail::uniform_below(rng, pool.size())]);
    out.documents.push_back(std::move(doc));
  }
  return out;
}

struct MusicSetupConfig {
  std::size_t topics = 6;
  std::size_t tags_per_topic = 5;
  std::size_t review_words_per_topic = 20;
  std::size_t shared_words = 30;
  std::size_t tracks = 400;
  std::size_t tracks_per_artist = 4;
  std::size_t min_tags_per_track = 2;
  std::size_t max_tags_per_track = 4;
  /// Chance that a tag slot is filled from a random topic instead of the
  /// track's own.
  double tag_noise = 0.15;
  std::size_t review_length = 12;
  /// Fraction of review words drawn from the shared vocabulary.
  double review_shared_fraction = 0.3;
  std::size_t general_documents = 600;
  std::size_t general_length = 20;
  std::uint64_t seed = 1;
};

struct MusicSetup {
  /// Topic-agnostic text over all words, including tag words.
  Corpus general;
  std::vector<TrackClusterRecord> records;
  TagAnnotationSet annotations;
  std::map<std::string, std::size_t> tag_topic;
};

inline MusicSetup make_music_setup(const MusicSetupConfig& cfg) {
  if (cfg.topics < 1 || cfg.tags_per_topic < 1 || cfg.review_words_per_topic < 1 || cfg.tracks < 1 ||
      cfg.tracks_per_artist < 1 || cfg.min_tags_per_track < 1 || cfg.max_tags_per_track < cfg.min_tags_per_track)
    throw Error(ErrorCode::InvalidArgument, "invalid synthetic music configuration");
  using musicvec::detail::uniform01;
  using musicvec::detail::uniform_below;

  MusicSetup out;
  std::vector<std::vector<std::string>> tags(cfg.topics), review(cfg.topics);
  std::vector<std::string> shared, all_words;
  for (std::size_t t = 0; t < cfg.topics; ++t) {
    for (std::size_t i = 0; i < cfg.tags_per_topic; ++i) {
      // No separators in any name: written-out general text must tokenize
      // back to the same words.
      tags[t].push_back("t" + std::to_string(t) + "tag" + std::to_string(i));
      out.tag_topic[tags[t].back()] = t;
      all_words.push_back(tags[t].back());
    }
    for (std::size_t i = 0; i < cfg.review_words_per_topic; ++i) {
      review[t].push_back("t" + std::to_string(t) + detail::numbered("r", i, 2));
      all_words.push_back(review[t].back());
    }
  }
  for (std::size_t i = 0; i < cfg.shared_words; ++i) {
    shared.push_back(detail::numbered("w", i, 3));
    all_words.push_back(shared.back());
  }

  Rng rng(cfg.seed);
  const std::size_t artists = (cfg.tracks + cfg.tracks_per_artist - 1) / cfg.tracks_per_artist;
  std::vector<std::size_t> artist_topic(artists);
  for (auto& t : artist_topic) t = uniform_below(rng, cfg.topics);

  for (std::size_t tr = 0; tr < cfg.tracks; ++tr) {
    const std::size_t artist = tr / cfg.tracks_per_artist;
    const std::size_t topic = artist_topic[artist];
    TrackClusterRecord rec;
    rec.track_id = detail::numbered("TR", tr, 6);
    rec.artist_id = detail::numbered("AR", artist, 5);
    const std::size_t ntags =
        cfg.min_tags_per_track + uniform_below(rng, cfg.max_tags_per_track - cfg.min_tags_per_track + 1);
    for (std::size_t i = 0; i < ntags; ++i) {
      const std::size_t t = uniform01(rng) < cfg.tag_noise ? uniform_below(rng, cfg.topics) : topic;
      const auto& tag = tags[t][uniform_below(rng, tags[t].size())];
      if (std::find(rec.tags.begin(), rec.tags.end(), tag) == rec.tags.end()) rec.tags.push_back(tag);
    }
    std::string text;
    for (std::size_t i = 0; i < cfg.review_length; ++i) {
      if (!text.empty()) text += ' ';
      if (!shared.empty() && uniform01(rng) < cfg.review_shared_fraction)
        text += shared[uniform_below(rng, shared.size())];
      else
        text += review[topic][uniform_below(rng, review[topic].size())];
    }
    if (cfg.review_length > 0) rec.reviews.push_back(std::move(text));
    for (const auto& tag : rec.tags) out.annotations.annotations[rec.track_id].insert(tag);
    out.records.push_back(std::move(rec));
  }
  out.annotations.use_all_tags();

  out.general.reserve(cfg.general_documents);
  for (std::size_t d = 0; d < cfg.general_documents; ++d) {
    Document doc;
    doc.kind = DocumentKind::GeneralText;
    for (std::size_t i = 0; i < cfg.general_length; ++i)
      doc.tokens.push_back(all_words[uniform_below(rng, all_words.size())]);
    out.general.push_back(std::move(doc));
  }
  return out;
}

}  // namespace musicvec::synthetic

#endif  // MUSICVEC_SYNTHETIC_HPP
