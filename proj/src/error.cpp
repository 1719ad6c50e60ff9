// Copyright 2026 The vdpsync Authors
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

#include "vdpsync/error.hpp"

namespace vdpsync {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidTruncation: return "invalid truncation";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::InvalidState: return "invalid density matrix";
    case ErrorCode::DegenerateSteadyState: return "degenerate steady state";
    case ErrorCode::SolverFailure: return "solver failure";
    case ErrorCode::PositivityViolation: return "positivity violation";
    case ErrorCode::StepSize: return "step size";
    case ErrorCode::TruncationFailure: return "truncation failure";
    case ErrorCode::NearSingular: return "near-singular system";
    case ErrorCode::Resonance: return "resonance";
    case ErrorCode::UnknownFigure: return "unknown figure";
    case ErrorCode::Config: return "config";
  }
  return "error";
}

bool is_usage_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidTruncation:
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::UnknownFigure:
    case ErrorCode::Config:
      return true;
    default:
      return false;
  }
}

}  // namespace vdpsync
