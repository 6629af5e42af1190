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
 * @file tokenizer.hpp
 *
 * @brief Locale-independent UTF-8 tokenization and tag normalization.
 *
 * Word characters are letters and digits. Classification and lowercasing of
 * non-ASCII code points use built-in tables covering Latin-1, Latin
 * Extended-A, Greek, Cyrillic and fullwidth forms; other scripts are kept
 * verbatim as word characters unless they fall in a known punctuation or
 * symbol block. The result never depends on the process locale.
 */

#ifndef MUSICVEC_TOKENIZER_HPP
#define MUSICVEC_TOKENIZER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "musicvec/error.hpp"

namespace musicvec {

namespace text {

constexpr char32_t kReplacement = 0xFFFD;

/// Decodes one code point starting at `pos` and advances it. Malformed
/// sequences yield U+FFFD and consume a single byte.
inline char32_t decode_utf8(std::string_view s, std::size_t& pos) {
  const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return kReplacement;
  }
  if (pos + extra >= s.size()) {
    ++pos;
    return kReplacement;
  }
  for (int i = 1; i <= extra; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0x80, 0x800, 0x10000};
  if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kReplacement;
  }
  pos += extra + 1;
  return cp;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline bool is_space(char32_t c) {
  return c == ' ' || (c >= 0x09 && c <= 0x0D) || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000;
}

/// Letters and digits. Unlisted non-ASCII code points count as letters.
inline bool is_word_char(char32_t c) {
  if (c < 0x80) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  }
  if (c <= 0xBF) {
    // Latin-1 punctuation block; keep ordinal indicators, superscripts, micro.
    return c == 0xAA || c == 0xB2 || c == 0xB3 || c == 0xB5 || c == 0xB9 || c == 0xBA;
  }
  if (c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;    // general punctuation .. misc symbols
  if (c >= 0x2E00 && c <= 0x2E7F) return false;    // supplemental punctuation
  if (c >= 0x3000 && c <= 0x303F) return false;    // CJK symbols and punctuation
  if (c >= 0xE000 && c <= 0xF8FF) return false;    // private use
  if (c >= 0xFE10 && c <= 0xFE6F) return false;    // vertical/small forms
  if (c >= 0xFF00 && c <= 0xFF0F) return false;    // fullwidth punctuation
  if (c >= 0xFF1A && c <= 0xFF20) return false;
  if (c >= 0xFF3B && c <= 0xFF40) return false;
  if (c >= 0xFF5B && c <= 0xFF65) return false;
  if (c >= 0xFFF0 && c <= 0xFFFF) return false;    // specials, includes U+FFFD
  if (c >= 0x1F000 && c <= 0x1FAFF) return false;  // emoji and pictographs
  if (is_space(c)) return false;
  return true;
}

inline bool is_apostrophe(char32_t c) { return c == '\'' || c == 0x2019; }

inline char32_t to_lower(char32_t c) {
  if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 0x20 : c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x100 && c <= 0x17F) {
    if (c == 0x130) return 'i';
    if (c == 0x178) return 0xFF;
    const bool odd_upper = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
    const bool even_upper = (c <= 0x137) || (c >= 0x14A && c <= 0x177);
    if (odd_upper && (c & 1)) return c + 1;
    if (even_upper && !(c & 1)) return c + 1;
    return c;
  }
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c == 0x386) return 0x3AC;
  if (c >= 0x388 && c <= 0x38A) return c + 0x25;
  if (c == 0x38C) return 0x3CC;
  if (c == 0x38E || c == 0x38F) return c + 0x3F;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  if (c >= 0xFF21 && c <= 0xFF3A) return c + 0x20;
  return c;
}

inline std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t pos = 0; pos < s.size();) out.push_back(decode_utf8(s, pos));
  return out;
}

inline bool has_whitespace(std::string_view s) {
  for (std::size_t pos = 0; pos < s.size();)
    if (is_space(decode_utf8(s, pos))) return true;
  return false;
}

}  // namespace text

/// Splits raw text into lowercase word tokens. Letters and digits form words;
/// an apostrophe or ampersand is kept only when it sits between two word
/// characters ("don't", "r&b"). Everything else separates tokens.
inline std::vector<std::string> tokenize(std::string_view raw) {
  const std::u32string cps = text::decode(raw);
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (text::is_word_char(c)) {
      text::append_utf8(current, text::to_lower(c));
      continue;
    }
    const bool joiner = text::is_apostrophe(c) || c == '&';
    if (joiner && !current.empty() && i + 1 < cps.size() && text::is_word_char(cps[i + 1])) {
      current.push_back(c == '&' ? '&' : '\'');
      continue;
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

/// Turns a free-form tag into a single token: lowercase, trimmed, inner
/// whitespace runs collapsed to one underscore ("Club Dance" -> "club_dance").
inline std::string normalize_tag(std::string_view raw) {
  std::string out;
  bool pending_gap = false;
  for (std::size_t pos = 0; pos < raw.size();) {
    const char32_t c = text::decode_utf8(raw, pos);
    if (text::is_space(c)) {
      pending_gap = !out.empty();
      continue;
    }
    if (pending_gap) out.push_back('_');
    pending_gap = false;
    text::append_utf8(out, text::to_lower(c));
  }
  if (out.empty()) throw Error(ErrorCode::EmptyTag, "tag is empty or whitespace-only");
  return out;
}

/// Splits on whitespace without any other transformation; used for
/// pre-tokenized corpus caches.
inline std::vector<std::string> split_whitespace(std::string_view line) {
  std::vector<std::string> out;
  std::string current;
  for (std::size_t pos = 0; pos < line.size();) {
    const std::size_t start = pos;
    const char32_t c = text::decode_utf8(line, pos);
    if (text::is_space(c)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.append(line.substr(start, pos - start));
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

}  // namespace musicvec

#endif  // MUSICVEC_TOKENIZER_HPP
