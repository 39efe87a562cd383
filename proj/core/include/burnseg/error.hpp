// Copyright 2026 The burnseg Authors. All Rights Reserved.
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

namespace burnseg {

/// Machine-readable failure categories. The CLI prints the category name on
/// stderr, so the spelling of `error_code_name` is part of the tool interface.
enum class ErrorCode {
  kNoOverlap,
  kCrsMismatch,
  kGridMismatch,
  kUnknownCode,
  kIoError,
  kUnsupportedFormat,
  kEmptySet,
  kEmptyAoi,
  kBadFractions,
  kBadConfig,
  kShapeError,
  kNonfiniteInput,
  kNoLcHead,
  kMissingLc,
  kNonSquare,
  kNanLoss,
  kEmptyDataset,
  kUnknownTransform,
  kInvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) {
    fail(code, message);
  }
}

}  // namespace burnseg
