/*
 * Copyright 2026 The treeverify Authors.
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

#include "treeverify/core/errors.hpp"

namespace treeverify {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kPointOutOfDomain: return "PointOutOfDomain";
    case ErrorCode::kNonRepresentable: return "NonRepresentable";
    case ErrorCode::kEmptyBox: return "EmptyBox";
    case ErrorCode::kInvalidSpace: return "InvalidSpace";
    case ErrorCode::kMissingBaseScore: return "MissingBaseScore";
    case ErrorCode::kUnknownFeature: return "UnknownFeature";
    case ErrorCode::kMalformedDump: return "MalformedDump";
    case ErrorCode::kUnsupportedMissingBranch: return "UnsupportedMissingBranch";
    case ErrorCode::kNonAscendingEdges: return "NonAscendingEdges";
    case ErrorCode::kScoreCountMismatch: return "ScoreCountMismatch";
    case ErrorCode::kUnknownDirection: return "UnknownDirection";
    case ErrorCode::kMalformedAtom: return "MalformedAtom";
    case ErrorCode::kMalformedSpec: return "MalformedSpec";
    case ErrorCode::kConclusionMismatch: return "ConclusionMismatch";
    case ErrorCode::kResourceExhausted: return "ResourceExhausted";
    case ErrorCode::kDegenerateInterval: return "DegenerateInterval";
    case ErrorCode::kMalformedFixture: return "MalformedFixture";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace treeverify
