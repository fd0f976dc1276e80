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

#ifndef TREEVERIFY_INGEST_EXACT_JSON_HPP_
#define TREEVERIFY_INGEST_EXACT_JSON_HPP_

#include <json.hpp>

#include <string>
#include <string_view>

#include "treeverify/core/errors.hpp"
#include "treeverify/core/numeric.hpp"

namespace treeverify::ingest {

// Parses JSON keeping the source text of every non-integer number: such
// numbers come back as JSON strings holding their literal text, so a leaf
// weight of 0.1 stays exactly 1/10 instead of the nearest double.
nlohmann::json ParseExactJson(std::string_view text, ErrorCode on_error);

// Exact value of a number node (integer, preserved literal, or numeric
// string). Throws `on_error` with `what` in the message.
Rational ExactNumber(const nlohmann::json& node, ErrorCode on_error, const std::string& what);

// Nearest binary32 of a number node.
float Binary32Number(const nlohmann::json& node, ErrorCode on_error, const std::string& what);

}  // namespace treeverify::ingest

#endif  // TREEVERIFY_INGEST_EXACT_JSON_HPP_
