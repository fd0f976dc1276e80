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

#include "treeverify/ingest/exact_json.hpp"

namespace treeverify::ingest {
namespace {

using nlohmann::json;

class LiteralNumberSax : public nlohmann::detail::json_sax_dom_parser<json> {
 public:
  using json_sax_dom_parser::json_sax_dom_parser;

  bool number_float(double /*value*/, const std::string& literal) {
    std::string copy = literal;
    return json_sax_dom_parser::string(copy);
  }
};

}  // namespace

json ParseExactJson(std::string_view text, ErrorCode on_error) {
  json root;
  LiteralNumberSax sax(root, /*allow_exceptions=*/true);
  try {
    json::sax_parse(text.begin(), text.end(), &sax);
  } catch (const json::exception& e) {
    throw Error(on_error, std::string("invalid JSON: ") + e.what());
  }
  return root;
}

Rational ExactNumber(const json& node, ErrorCode on_error, const std::string& what) {
  if (node.is_number_integer()) {
    return node.is_number_unsigned() ? Rational(mpz_class(std::to_string(node.get<uint64_t>())))
                                     : Rational(mpz_class(std::to_string(node.get<int64_t>())));
  }
  if (node.is_string()) {
    if (auto value = ParseDecimal(node.get_ref<const std::string&>())) return *value;
  }
  throw Error(on_error, what + ": expected a decimal number, got " + node.dump());
}

float Binary32Number(const json& node, ErrorCode on_error, const std::string& what) {
  if (node.is_number_integer()) return RationalToBinary32(ExactNumber(node, on_error, what));
  if (node.is_string()) {
    if (auto value = DecimalToBinary32(node.get_ref<const std::string&>())) return *value;
  }
  throw Error(on_error, what + ": expected a finite binary32-range number, got " + node.dump());
}

}  // namespace treeverify::ingest
