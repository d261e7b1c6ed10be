// Copyright 2026 The LAP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace lap {

// Values are stable: they are the status codes returned through the C API.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kNotPositiveDefinite = 3,
  kNegativeQuadraticForm = 4,
  kNonPositiveDelta = 5,
  kNonPositiveInput = 6,
  kNonPositiveDenominator = 7,
  kInvalidBracket = 8,
  kScheduleFailure = 9,
  kConfigError = 10,
  kIoError = 11,
  kInternal = 12,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what)
      : Error(ErrorCode::kDimensionMismatch, what) {}
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(const std::string& what)
      : Error(ErrorCode::kNotPositiveDefinite, what) {}
};

// Raised by schedule rules; the optimizer wraps it into ScheduleFailure.
class ScheduleError : public Error {
 public:
  ScheduleError(ErrorCode code, const std::string& what) : Error(code, what) {}
};

class ScheduleFailure : public Error {
 public:
  ScheduleFailure(std::size_t iteration, const std::string& what)
      : Error(ErrorCode::kScheduleFailure,
              "iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

// `field` is a dotted/indexed path into the config document, e.g. runs[1].schedule.c1
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(ErrorCode::kConfigError, field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace lap
