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

#ifndef MUSICVEC_ERROR_HPP
#define MUSICVEC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace musicvec {

enum class ErrorCode {
  InvalidArgument,
  EmptyTag,
  WrongKind,
  EmptyCorpus,
  TableTooSmall,
  UnknownWord,
  UnknownFormat,
  MalformedHeader,
  TruncatedFile,
  DuplicateWord,
  MalformedInput,
  IoError,
  DegenerateInput,
  InsufficientOverlap,
  DegenerateRow,
  TooFewPoints,
  NonFiniteInput,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyTag: return "EmptyTag";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::TableTooSmall: return "TableTooSmall";
    case ErrorCode::UnknownWord: return "UnknownWord";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::DuplicateWord: return "DuplicateWord";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InsufficientOverlap: return "InsufficientOverlap";
    case ErrorCode::DegenerateRow: return "DegenerateRow";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above, so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures caused by the content of input data rather than by
  /// how the library was called.
  bool is_data_error() const noexcept {
    return code_ != ErrorCode::InvalidArgument && code_ != ErrorCode::UnknownFormat;
  }

 private:
  ErrorCode code_;
};

}  // namespace musicvec

#endif  // MUSICVEC_ERROR_HPP
