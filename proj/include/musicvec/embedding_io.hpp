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
 * @file embedding_io.hpp
 *
 * @brief word2vec-compatible vector files and full training checkpoints.
 *
 * Both formats start with the header line "V D\n". The text format then has
 * one line per word: the word followed by D decimal reals. The binary format
 * has, per word, the word, one space and D little-endian IEEE-754 floats with
 * no separator after them. The binary reader skips whitespace before each word,
 * so files that put a newline after every vector load as well.
 *
 * A checkpoint is the vector file plus "<path>.output" (output vectors, binary
 * format) and "<path>.json" (training configuration and corpus statistics).
 */

#ifndef MUSICVEC_EMBEDDING_IO_HPP
#define MUSICVEC_EMBEDDING_IO_HPP

#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "musicvec/corpus.hpp"
#include "musicvec/embedding.hpp"
#include "musicvec/error.hpp"
#include "musicvec/trainer.hpp"

namespace musicvec {

enum class VectorFormat { Text, Binary };

/// .txt is text, .bin is binary; anything else is UnknownFormat.
inline VectorFormat format_for_path(const std::string& path) {
  const auto ext = std::filesystem::path(path).extension().string();
  if (ext == ".txt") return VectorFormat::Text;
  if (ext == ".bin") return VectorFormat::Binary;
  throw Error(ErrorCode::UnknownFormat, "cannot infer vector format of '" + path + "' (expected .txt or .bin)");
}

namespace detail {

inline void put_float_le(std::ostream& out, float v) {
  auto bits = std::bit_cast<std::uint32_t>(v);
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(b.data(), 4);
}

inline float get_float_le(const unsigned char* b) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return std::bit_cast<float>(bits);
}

inline void append_float(std::string& out, float v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, r.ptr);
}

struct Header {
  std::size_t rows = 0;
  std::size_t dim = 0;
};

inline Header read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedHeader, "missing header line");
  strip_cr(line);
  std::istringstream ss(line);
  long long rows = -1;
  long long dim = -1;
  std::string extra;
  if (!(ss >> rows >> dim) || (ss >> extra) || rows < 0 || dim < 1)
    throw Error(ErrorCode::MalformedHeader, "expected 'V D' with V >= 0 and D >= 1, got '" + line + "'");
  return {static_cast<std::size_t>(rows), static_cast<std::size_t>(dim)};
}

inline void expect_only_whitespace(std::istream& in) {
  char c;
  while (in.get(c))
    if (!std::isspace(static_cast<unsigned char>(c)))
      throw Error(ErrorCode::MalformedHeader, "file holds more entries than its header declares");
}

}  // namespace detail

inline void save_vectors(std::ostream& out, const EmbeddingStore& store, VectorFormat format) {
  out << store.size() << ' ' << store.dim() << '\n';
  std::string line;
  for (WordIndex i = 0; i < store.size(); ++i) {
    const auto v = store.vector(i);
    if (format == VectorFormat::Text) {
      line = store.word(i);
      for (float x : v) {
        line.push_back(' ');
        detail::append_float(line, x);
      }
      line.push_back('\n');
      out << line;
    } else {
      out << store.word(i) << ' ';
      for (float x : v) detail::put_float_le(out, x);
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing vectors");
}

inline void save_vectors(const std::string& path, const EmbeddingStore& store, VectorFormat format) {
  auto out = detail::open_output(path);
  save_vectors(out, store, format);
}

inline void save_vectors(const std::string& path, const EmbeddingStore& store) {
  save_vectors(path, store, format_for_path(path));
}

inline EmbeddingStore load_text_vectors(std::istream& in) {
  const auto header = detail::read_header(in);
  std::vector<std::string> words;
  std::vector<float> data;
  words.reserve(header.rows);
  data.reserve(header.rows * header.dim);
  std::string line;
  for (std::size_t r = 0; r < header.rows; ++r) {
    if (!std::getline(in, line))
      throw Error(ErrorCode::TruncatedFile, "expected " + std::to_string(header.rows) + " rows, found " +
                                                std::to_string(r));
    detail::strip_cr(line);
    auto fields = split_whitespace(line);
    if (fields.empty())
      throw Error(ErrorCode::TruncatedFile, "row " + std::to_string(r + 1) + " is empty");
    if (fields.size() != header.dim + 1)
      throw Error(ErrorCode::TruncatedFile, "row " + std::to_string(r + 1) + " has " +
                                                std::to_string(fields.size() - 1) + " values, expected " +
                                                std::to_string(header.dim));
    words.push_back(fields[0]);
    for (std::size_t d = 1; d < fields.size(); ++d) {
      float v = 0;
      const auto& f = fields[d];
      auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size())
        throw Error(ErrorCode::MalformedInput, "row " + std::to_string(r + 1) + ": bad number '" + f + "'");
      data.push_back(v);
    }
  }
  detail::expect_only_whitespace(in);
  return EmbeddingStore(std::move(words), header.dim, std::move(data));
}

inline EmbeddingStore load_binary_vectors(std::istream& in) {
  const auto header = detail::read_header(in);
  std::vector<std::string> words;
  std::vector<float> data;
  words.reserve(header.rows);
  data.reserve(header.rows * header.dim);
  std::vector<unsigned char> buf(header.dim * 4);
  for (std::size_t r = 0; r < header.rows; ++r) {
    std::string word;
    char c;
    bool got = false;
    while (in.get(c)) {
      if (c == ' ') {
        if (word.empty()) continue;
        got = true;
        break;
      }
      if (c == '\n' || c == '\r' || c == '\t') {
        if (word.empty()) continue;
        throw Error(ErrorCode::MalformedInput, "row " + std::to_string(r + 1) + ": word not followed by a space");
      }
      word.push_back(c);
    }
    if (!got)
      throw Error(ErrorCode::TruncatedFile, "expected " + std::to_string(header.rows) + " rows, found " +
                                                std::to_string(r));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size())
      throw Error(ErrorCode::TruncatedFile, "row " + std::to_string(r + 1) + " ('" + word + "') is cut short");
    words.push_back(std::move(word));
    for (std::size_t d = 0; d < header.dim; ++d) data.push_back(detail::get_float_le(buf.data() + 4 * d));
  }
  detail::expect_only_whitespace(in);
  return EmbeddingStore(std::move(words), header.dim, std::move(data));
}

inline EmbeddingStore load_vectors(std::istream& in, VectorFormat format) {
  return format == VectorFormat::Text ? load_text_vectors(in) : load_binary_vectors(in);
}

/// Loads a vector file, picking the format from the extension. Errors are
/// prefixed with the path.
inline EmbeddingStore load_vectors(const std::string& path) {
  const auto format = format_for_path(path);
  auto in = detail::open_input(path);
  try {
    return load_vectors(in, format);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Checkpoints

inline void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"dim", c.dim},
                     {"window", c.window},
                     {"epochs", c.epochs},
                     {"negatives", c.negatives},
                     {"initial_lr", c.initial_lr},
                     {"min_lr", c.resolved_min_lr()},
                     {"negative_table_size", c.negative_table_size},
                     {"unigram_power", c.unigram_power},
                     {"workers", c.workers},
                     {"rng_seed", c.rng_seed},
                     {"fixed_window", c.fixed_window},
                     {"subsample_threshold", c.subsample_threshold ? nlohmann::json(*c.subsample_threshold)
                                                                   : nlohmann::json(nullptr)}};
}

inline void from_json(const nlohmann::json& j, TrainConfig& c) {
  j.at("dim").get_to(c.dim);
  j.at("window").get_to(c.window);
  j.at("epochs").get_to(c.epochs);
  j.at("negatives").get_to(c.negatives);
  j.at("initial_lr").get_to(c.initial_lr);
  c.min_lr = j.at("min_lr").get<double>();
  j.at("negative_table_size").get_to(c.negative_table_size);
  j.at("unigram_power").get_to(c.unigram_power);
  j.at("workers").get_to(c.workers);
  j.at("rng_seed").get_to(c.rng_seed);
  c.fixed_window = j.value("fixed_window", false);
  const auto& s = j.at("subsample_threshold");
  c.subsample_threshold = s.is_null() ? std::nullopt : std::optional<double>(s.get<double>());
}

inline void to_json(nlohmann::json& j, const CorpusStats& s) {
  j = nlohmann::json{{"tokens", s.tokens},
                     {"unique_words", s.unique_words},
                     {"unique_tracks", s.unique_tracks},
                     {"unique_artists", s.unique_artists}};
}

inline void from_json(const nlohmann::json& j, CorpusStats& s) {
  j.at("tokens").get_to(s.tokens);
  j.at("unique_words").get_to(s.unique_words);
  j.at("unique_tracks").get_to(s.unique_tracks);
  j.at("unique_artists").get_to(s.unique_artists);
}

struct CheckpointMetadata {
  std::string label;
  TrainConfig config;
  CorpusStats stats;
};

inline std::string metadata_path(const std::string& vectors_path) { return vectors_path + ".json"; }
inline std::string output_vectors_path(const std::string& vectors_path) { return vectors_path + ".output"; }

inline void save_metadata(const std::string& path, const CheckpointMetadata& meta) {
  nlohmann::json j{{"format", "musicvec-checkpoint"},
                   {"version", 1},
                   {"label", meta.label},
                   {"train_config", meta.config},
                   {"corpus_stats", meta.stats}};
  auto out = detail::open_output(path);
  out << j.dump(2) << '\n';
}

/// Reads a sidecar written by save_metadata, or nullopt when the file is absent.
inline std::optional<CheckpointMetadata> load_metadata(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(in);
    CheckpointMetadata m;
    m.label = j.value("label", std::string());
    m.config = j.at("train_config").get<TrainConfig>();
    m.stats = j.at("corpus_stats").get<CorpusStats>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
}

/// Writes input vectors to `path` (format from the extension), output
/// vectors to "<path>.output" and metadata to "<path>.json".
template <class Real>
void save_checkpoint(const std::string& path, const BasicEmbeddingModel<Real>& model,
                     const CheckpointMetadata& meta) {
  save_vectors(path, EmbeddingStore::from_model(model));
  std::vector<float> out(model.output.begin(), model.output.end());
  save_vectors(output_vectors_path(path), EmbeddingStore(model.vocab.words(), model.dim, std::move(out)),
               VectorFormat::Binary);
  save_metadata(metadata_path(path), meta);
}

/// Restores both weight matrices. Vocabulary counts are not part of the
/// checkpoint; every count loads as 1.
inline EmbeddingModel load_checkpoint(const std::string& path) {
  const auto in = load_vectors(path);
  const auto out = [&] {
    auto f = detail::open_input(output_vectors_path(path));
    return load_binary_vectors(f);
  }();
  if (in.words() != out.words() || in.dim() != out.dim())
    throw Error(ErrorCode::MalformedInput, "output vectors of '" + path + "' do not match its input vectors");
  EmbeddingModel m;
  m.vocab = Vocabulary::from_words(in.words());
  m.dim = in.dim();
  m.input = in.data();
  m.output = out.data();
  return m;
}

}  // namespace musicvec

#endif  // MUSICVEC_EMBEDDING_IO_HPP
