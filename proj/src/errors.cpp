// Copyright 2026 The mixbench Authors
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

#include "mixbench/errors.hpp"

namespace mixbench {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ConstantColumn: return "ConstantColumn";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::NonpositiveWeight: return "NonpositiveWeight";
        case ErrorKind::EmptyCategory: return "EmptyCategory";
        case ErrorKind::SchemaMismatch: return "SchemaMismatch";
        case ErrorKind::KTooLarge: return "KTooLarge";
        case ErrorKind::AllConstant: return "AllConstant";
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::NonSPD: return "NonSPD";
        case ErrorKind::CalibrationFailed: return "CalibrationFailed";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::IoError: return "IoError";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace mixbench
