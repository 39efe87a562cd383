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

#include "burnseg/error.hpp"

namespace burnseg {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoOverlap: return "NO_OVERLAP";
    case ErrorCode::kCrsMismatch: return "CRS_MISMATCH";
    case ErrorCode::kGridMismatch: return "GRID_MISMATCH";
    case ErrorCode::kUnknownCode: return "UNKNOWN_CODE";
    case ErrorCode::kIoError: return "IO_ERROR";
    case ErrorCode::kUnsupportedFormat: return "UNSUPPORTED_FORMAT";
    case ErrorCode::kEmptySet: return "EMPTY_SET";
    case ErrorCode::kEmptyAoi: return "EMPTY_AOI";
    case ErrorCode::kBadFractions: return "BAD_FRACTIONS";
    case ErrorCode::kBadConfig: return "BAD_CONFIG";
    case ErrorCode::kShapeError: return "SHAPE_ERROR";
    case ErrorCode::kNonfiniteInput: return "NONFINITE_INPUT";
    case ErrorCode::kNoLcHead: return "NO_LC_HEAD";
    case ErrorCode::kMissingLc: return "MISSING_LC";
    case ErrorCode::kNonSquare: return "NON_SQUARE";
    case ErrorCode::kNanLoss: return "NAN_LOSS";
    case ErrorCode::kEmptyDataset: return "EMPTY_DATASET";
    case ErrorCode::kUnknownTransform: return "UNKNOWN_TRANSFORM";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace burnseg
