/*  topostat
 *  ========
 *  Copyright (C) 2026 The topostat Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace topostat {

// Domain failure categories. The numeric values are shared with the C API.
enum class ErrorCode : int {
  InvalidInput = 1,
  InvalidFiltration = 2,
  DegenerateVolume = 3,
  InvalidCap = 4,
  InvalidPersistence = 5,
  InvalidLabels = 6,
  Io = 7,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::InvalidFiltration: return "invalid-filtration";
    case ErrorCode::DegenerateVolume: return "degenerate-volume";
    case ErrorCode::InvalidCap: return "invalid-cap";
    case ErrorCode::InvalidPersistence: return "invalid-persistence";
    case ErrorCode::InvalidLabels: return "invalid-labels";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace topostat
