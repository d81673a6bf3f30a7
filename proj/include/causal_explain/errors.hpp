/*
 * Copyright 2026 The causal-explain Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causal_explain {

// Every failure surfaced by the library carries one of these codes. The CLI
// maps them onto process exit codes (see exit_code()).
enum class ErrorCode {
  kInvalidGame,
  kInvalidCauseFamily,
  kInvalidArgument,
  kModelIncomplete,
  kInvalidIntervention,
  kParse,
  kCapacity,
  kInvariantViolation,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidGame: return "invalid-game";
    case ErrorCode::kInvalidCauseFamily: return "invalid-cause-family";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kModelIncomplete: return "model-incomplete";
    case ErrorCode::kInvalidIntervention: return "invalid-intervention";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kCapacity: return "capacity-error";
    case ErrorCode::kInvariantViolation: return "invariant-violation";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the error-code prefix.
  const std::string& message() const noexcept { return message_; }

  // 2 validation, 3 capacity, 4 internal invariant violation.
  int exit_code() const noexcept {
    switch (code_) {
      case ErrorCode::kCapacity: return 3;
      case ErrorCode::kInvariantViolation: return 4;
      default: return 2;
    }
  }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace causal_explain
