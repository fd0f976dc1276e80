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

#include "treeverify/spec/spec.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <limits>

namespace treeverify::spec {
namespace {

using nlohmann::json;

// Largest binary32 <= v and smallest binary32 >= v.
float FloorBinary32(const Rational& v) {
  float f = RationalToBinary32(v);
  return FromBinary32(f) > v ? NextDown(f) : f;
}

float CeilBinary32(const Rational& v) {
  float f = RationalToBinary32(v);
  return FromBinary32(f) < v ? NextUp(f) : f;
}

struct Token {
  std::string name;
  CompareOp op;
  Rational constant;
  std::string constant_text;
};

[[noreturn]] void AtomError(std::string_view text, size_t pos, const std::string& what) {
  throw Error(ErrorCode::kMalformedAtom,
              "column " + std::to_string(pos + 1) + " of '" + std::string(text) + "': " + what);
}

Token Tokenize(std::string_view text) {
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  const size_t name_start = i;
  while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '<' && text[i] != '>' &&
         text[i] != '=') {
    ++i;
  }
  if (i == name_start) AtomError(text, i, "expected a feature name");
  Token token;
  token.name = std::string(text.substr(name_start, i - name_start));
  skip_ws();
  if (i >= text.size()) AtomError(text, i, "expected one of <, <=, >, >=");
  const size_t op_start = i;
  if (text[i] == '<' || text[i] == '>') {
    const bool less = text[i] == '<';
    ++i;
    const bool or_equal = i < text.size() && text[i] == '=';
    if (or_equal) ++i;
    token.op = less ? (or_equal ? CompareOp::kLessEqual : CompareOp::kLess)
                    : (or_equal ? CompareOp::kGreaterEqual : CompareOp::kGreater);
  } else {
    AtomError(text, op_start, "expected one of <, <=, >, >=");
  }
  skip_ws();
  const size_t value_start = i;
  while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  token.constant_text = std::string(text.substr(value_start, i - value_start));
  auto value = ParseDecimal(token.constant_text);
  if (!value) AtomError(text, value_start, "expected a decimal constant");
  token.constant = *value;
  skip_ws();
  if (i != text.size()) AtomError(text, i, "unexpected trailing text");
  return token;
}

size_t LineOf(std::string_view haystack, const std::string& needle) {
  const size_t pos = haystack.find(needle);
  if (pos == std::string_view::npos) return 0;
  return 1 + static_cast<size_t>(std::count(haystack.begin(), haystack.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

std::string Located(std::string_view file, const std::string& literal, const std::string& message) {
  const size_t line = LineOf(file, json(literal).dump());
  return line ? "line " + std::to_string(line) + ": " + message : message;
}

Specification ParseEntry(const json& entry, std::string_view file) {
  Specification spec;
  spec.id = entry["id"].get<std::string>();
  const std::string where = "spec '" + spec.id + "'";
  if (!entry.contains("kind") || !entry["kind"].is_string()) {
    throw Error(ErrorCode::kMalformedSpec, where + ": missing string 'kind'");
  }
  const std::string kind = entry["kind"].get<std::string>();
  if (kind == "implication") {
    ThresholdImplication body;
    if (entry.contains("premise")) {
      const json& premise = entry["premise"];
      if (!premise.is_array()) throw Error(ErrorCode::kMalformedSpec, where + ": 'premise' must be an array");
      for (size_t k = 0; k < premise.size(); ++k) {
        if (!premise[k].is_string()) {
          throw Error(ErrorCode::kMalformedAtom, where + " premise[" + std::to_string(k) + "]: atoms are strings");
        }
        const std::string literal = premise[k].get<std::string>();
        try {
          body.premise.push_back(ParseAtom(literal));
        } catch (const Error& e) {
          throw Error(e.code(), Located(file, literal, where + " premise[" + std::to_string(k) + "] " + e.what()));
        }
      }
    }
    const std::string conclusion = entry.contains("conclusion") && entry["conclusion"].is_string()
                                       ? entry["conclusion"].get<std::string>()
                                       : "logit <= 0";
    try {
      body.conclusion = ParseConclusion(conclusion);
    } catch (const Error& e) {
      throw Error(e.code(), Located(file, conclusion, where + " conclusion " + e.what()));
    }
    spec.body = std::move(body);
  } else if (kind == "monotone") {
    Monotonicity body;
    if (!entry.contains("feature") || !entry["feature"].is_string()) {
      throw Error(ErrorCode::kMalformedSpec, where + ": monotone spec needs a string 'feature'");
    }
    body.feature = entry["feature"].get<std::string>();
    const std::string direction =
        entry.contains("direction") && entry["direction"].is_string() ? entry["direction"].get<std::string>() : "";
    if (direction == "non-decreasing") {
      body.direction = Direction::kNonDecreasing;
    } else if (direction == "non-increasing") {
      body.direction = Direction::kNonIncreasing;
    } else {
      throw Error(ErrorCode::kUnknownDirection,
                  Located(file, direction, where + ": unknown direction '" + direction +
                                               "' (expected non-decreasing or non-increasing)"));
    }
    spec.body = std::move(body);
  } else {
    throw Error(ErrorCode::kMalformedSpec, where + ": unknown kind '" + kind + "'");
  }
  return spec;
}

}  // namespace

std::string_view CompareOpSymbol(CompareOp op) {
  switch (op) {
    case CompareOp::kLess: return "<";
    case CompareOp::kLessEqual: return "<=";
    case CompareOp::kGreater: return ">";
    case CompareOp::kGreaterEqual: return ">=";
  }
  return "?";
}

std::string_view DirectionName(Direction d) {
  return d == Direction::kNonDecreasing ? "non-decreasing" : "non-increasing";
}

Atom MakeAtom(std::string feature, CompareOp op, const Rational& constant) {
  Atom atom;
  atom.feature = std::move(feature);
  atom.op = op;
  atom.exact = constant;
  switch (op) {
    case CompareOp::kLess:
    case CompareOp::kGreaterEqual: atom.bound = CeilBinary32(constant); break;
    case CompareOp::kLessEqual:
    case CompareOp::kGreater: atom.bound = FloorBinary32(constant); break;
  }
  return atom;
}

bool Atom::Holds(float x) const {
  switch (op) {
    case CompareOp::kLess: return x < bound;
    case CompareOp::kLessEqual: return x <= bound;
    case CompareOp::kGreater: return x > bound;
    case CompareOp::kGreaterEqual: return x >= bound;
  }
  return false;
}

bool Atom::HoldsExact(const Rational& x) const {
  switch (op) {
    case CompareOp::kLess: return x < exact;
    case CompareOp::kLessEqual: return x <= exact;
    case CompareOp::kGreater: return x > exact;
    case CompareOp::kGreaterEqual: return x >= exact;
  }
  return false;
}

std::string Atom::ToString() const {
  return feature + " " + std::string(CompareOpSymbol(op)) + " " + ToDecimalString(exact);
}

bool Conclusion::Holds(const Rational& logit) const {
  return op == CompareOp::kLessEqual ? logit <= constant : logit > constant;
}

Conclusion Conclusion::Negated() const {
  return {op == CompareOp::kLessEqual ? CompareOp::kGreater : CompareOp::kLessEqual, constant};
}

std::string Conclusion::ToString() const {
  return "logit " + std::string(CompareOpSymbol(op)) + " " + ToDecimalString(constant);
}

Atom ParseAtom(std::string_view text) {
  Token token = Tokenize(text);
  return MakeAtom(std::move(token.name), token.op, token.constant);
}

Conclusion ParseConclusion(std::string_view text) {
  Token token = Tokenize(text);
  if (token.name != "logit") AtomError(text, text.find(token.name), "conclusion must constrain 'logit'");
  if (token.op != CompareOp::kLessEqual && token.op != CompareOp::kGreater) {
    AtomError(text, text.find_first_of("<>"), "conclusion operator must be <= or >");
  }
  return {token.op, token.constant};
}

std::vector<SpecEntry> ParseSpecEntries(std::string_view spec_text) {
  json root;
  try {
    root = json::parse(spec_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedSpec, std::string("invalid spec JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("specs") || !root["specs"].is_array()) {
    throw Error(ErrorCode::kMalformedSpec, "spec file must be an object with a 'specs' array");
  }
  std::vector<SpecEntry> entries;
  for (size_t i = 0; i < root["specs"].size(); ++i) {
    const json& entry = root["specs"][i];
    SpecEntry out;
    out.id = entry.is_object() && entry.contains("id") && entry["id"].is_string() ? entry["id"].get<std::string>()
                                                                                 : "#" + std::to_string(i);
    try {
      if (!entry.is_object() || !entry.contains("id") || !entry["id"].is_string()) {
        throw Error(ErrorCode::kMalformedSpec, "specs[" + std::to_string(i) + "]: needs a string 'id'");
      }
      out.spec = ParseEntry(entry, spec_text);
    } catch (const Error& e) {
      out.error = e;
    }
    entries.push_back(std::move(out));
  }
  return entries;
}

void ValidateSpec(const Specification& spec, const FeatureSpace& space) {
  auto check = [&](const std::string& name) {
    if (!space.IndexOf(name)) {
      throw Error(ErrorCode::kUnknownFeature, "spec '" + spec.id + "' references unknown feature '" + name + "'");
    }
  };
  if (const auto* body = std::get_if<ThresholdImplication>(&spec.body)) {
    for (const Atom& atom : body->premise) check(atom.feature);
  } else {
    check(std::get<Monotonicity>(spec.body).feature);
  }
}

std::vector<Specification> ParseSpecs(std::string_view spec_text, const FeatureSpace& space) {
  std::vector<Specification> specs;
  for (SpecEntry& entry : ParseSpecEntries(spec_text)) {
    if (entry.error) throw *entry.error;
    ValidateSpec(*entry.spec, space);
    specs.push_back(std::move(*entry.spec));
  }
  return specs;
}

std::optional<Box> PremiseBox(const std::vector<Atom>& premise, const FeatureSpace& space) {
  Box box = Box::FromSpace(space);
  for (const Atom& atom : premise) {
    Interval& interval = box.intervals[space.Require(atom.feature)];
    Interval half{-std::numeric_limits<float>::infinity(), false, std::numeric_limits<float>::infinity(), false};
    switch (atom.op) {
      case CompareOp::kLess: half.hi = atom.bound; break;
      case CompareOp::kLessEqual: half.hi = atom.bound; half.hi_closed = true; break;
      case CompareOp::kGreater: half.lo = atom.bound; break;
      case CompareOp::kGreaterEqual: half.lo = atom.bound; half.lo_closed = true; break;
    }
    interval = interval.Intersect(half);
  }
  for (const Interval& interval : box.intervals) {
    if (!interval.Binary32Extent()) return std::nullopt;
  }
  return box;
}

ExistentialQuery Negate(const ThresholdImplication& spec, const FeatureSpace& space) {
  return {PremiseBox(spec.premise, space), spec.conclusion.Negated()};
}

bool PremiseSubsumes(const ThresholdImplication& a, const ThresholdImplication& b, const FeatureSpace& space) {
  if (!(a.conclusion == b.conclusion)) {
    throw Error(ErrorCode::kConclusionMismatch,
                "conclusions differ: " + a.conclusion.ToString() + " vs " + b.conclusion.ToString());
  }
  const auto box_b = PremiseBox(b.premise, space);
  if (!box_b) return true;
  const auto box_a = PremiseBox(a.premise, space);
  if (!box_a) return false;
  // Compare binary32 extents so (a, b] and [next(a), b] count as equal.
  for (size_t i = 0; i < space.size(); ++i) {
    const auto ea = box_a->intervals[i].Binary32Extent();
    const auto eb = box_b->intervals[i].Binary32Extent();
    if (eb->first < ea->first || eb->second > ea->second) return false;
  }
  return true;
}

}  // namespace treeverify::spec
