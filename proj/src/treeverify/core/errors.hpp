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

#ifndef TREEVERIFY_CORE_ERRORS_HPP_
#define TREEVERIFY_CORE_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace treeverify {

// Every failure the library reports carries one of these codes. The C API
// exposes them one-to-one.
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kPointOutOfDomain,
  kNonRepresentable,
  kEmptyBox,
  kInvalidSpace,
  kMissingBaseScore,
  kUnknownFeature,
  kMalformedDump,
  kUnsupportedMissingBranch,
  kNonAscendingEdges,
  kScoreCountMismatch,
  kUnknownDirection,
  kMalformedAtom,
  kMalformedSpec,
  kConclusionMismatch,
  kResourceExhausted,
  kDegenerateInterval,
  kMalformedFixture,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace treeverify

#endif  // TREEVERIFY_CORE_ERRORS_HPP_
