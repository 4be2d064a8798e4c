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

#include "fingerkin/errors.h"

#include <sstream>

namespace fingerkin {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain: return "DomainError";
    case ErrorKind::kLimits: return "LimitsError";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kSingularJacobian: return "SingularJacobian";
    case ErrorKind::kDegenerateGeometry: return "DegenerateGeometry";
    case ErrorKind::kInsufficientData: return "InsufficientData";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kUnit: return "UnitError";
    case ErrorKind::kEmptyCapture: return "EmptyCapture";
    case ErrorKind::kUnknownMarker: return "UnknownMarker";
    case ErrorKind::kFingerprintMismatch: return "FingerprintMismatch";
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kUsage: return "UsageError";
  }
  return "Error";
}

namespace {
std::string WithPosition(const std::string& message, int line, int column) {
  std::ostringstream os;
  os << "line " << line;
  if (column > 0) os << ", column " << column;
  os << ": " << message;
  return os.str();
}
}  // namespace

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(ErrorKind::kParse, WithPosition(message, line, column)),
      line_(line),
      column_(column) {}

}  // namespace fingerkin
