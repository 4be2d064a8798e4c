// Copyright 2026 The Fingerkin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FINGERKIN_ERRORS_H_
#define FINGERKIN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fingerkin {

// Every failure raised by the library carries one of these kinds. The CLI
// maps kinds to process exit codes.
enum class ErrorKind {
  kDomain,
  kLimits,
  kNoConvergence,
  kSingularJacobian,
  kDegenerateGeometry,
  kInsufficientData,
  kParse,
  kUnit,
  kEmptyCapture,
  kUnknownMarker,
  kFingerprintMismatch,
  kIo,
  kUsage,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Thin named subclasses so call sites and tests can catch a specific class.
#define FINGERKIN_DEFINE_ERROR(Name, Kind)                     \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& message)                  \
        : Error(ErrorKind::Kind, message) {}                   \
  }

FINGERKIN_DEFINE_ERROR(DomainError, kDomain);
FINGERKIN_DEFINE_ERROR(LimitsError, kLimits);
FINGERKIN_DEFINE_ERROR(NoConvergence, kNoConvergence);
FINGERKIN_DEFINE_ERROR(SingularJacobian, kSingularJacobian);
FINGERKIN_DEFINE_ERROR(DegenerateGeometry, kDegenerateGeometry);
FINGERKIN_DEFINE_ERROR(InsufficientData, kInsufficientData);
FINGERKIN_DEFINE_ERROR(UnitError, kUnit);
FINGERKIN_DEFINE_ERROR(EmptyCapture, kEmptyCapture);
FINGERKIN_DEFINE_ERROR(UnknownMarker, kUnknownMarker);
FINGERKIN_DEFINE_ERROR(FingerprintMismatch, kFingerprintMismatch);
FINGERKIN_DEFINE_ERROR(IoError, kIo);
FINGERKIN_DEFINE_ERROR(UsageError, kUsage);

#undef FINGERKIN_DEFINE_ERROR

// Parse failures report the 1-based line (and column when known) of the
// offending input.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column = 0);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace fingerkin

#endif  // FINGERKIN_ERRORS_H_
