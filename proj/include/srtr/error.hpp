// Copyright 2026 The srtr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace srtr {

/// Every failure the toolkit reports is an `Error` tagged with one of these
/// kinds. The CLI prints them as `error: <kind>: <detail>`.
enum class ErrorKind {
  kSyntaxError,
  kTypeError,
  kUnboundIdentifier,
  kMissingReturn,
  kSchemaError,
  kSignatureMismatch,
  kDivisionByZero,
  kDomainError,
  kStepError,
  kUnknownState,
  kIndexError,
  kKeyError,
  kSolverError,
  kNonAffine,
  kNumericalFailure,
  kParseError,
  kUnsatError,
  kGridTooLarge,
  kEmptyScenarioSet,
  kConfigError,
  kIoError,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(detail), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  std::string_view kind_name() const { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace srtr
