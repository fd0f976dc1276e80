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

// Model-dump, space-config and prediction-fixture parsing.

#ifndef TREEVERIFY_INGEST_INGEST_HPP_
#define TREEVERIFY_INGEST_INGEST_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "treeverify/core/model.hpp"
#include "treeverify/core/numeric.hpp"

namespace treeverify::ingest {

enum class SourceFormat { kGbtDump, kAdditiveDump };

std::string_view SourceFormatName(SourceFormat format);

struct ModelBundle {
  std::variant<Ensemble, AdditiveModel> model;
  SourceFormat source_format = SourceFormat::kGbtDump;
  std::map<std::string, std::string> metadata;

  // The ensemble the verifier runs on: the model itself or its compilation.
  Ensemble ToEnsemble() const;
};

// `{features:[{name, lower, upper}]}`; bounds are rounded to binary32.
FeatureSpace ParseSpaceConfig(std::string_view text);
std::string SerializeSpaceConfig(const FeatureSpace& space);

// JSON array of nested tree records. Split thresholds are rounded to binary32,
// leaf weights kept as the exact rational of their decimal text. Throws
// kMissingBaseScore when `base_score` is absent.
Ensemble ParseGbtDump(std::string_view dump_text, const std::optional<Rational>& base_score,
                      const FeatureSpace& space);
std::string SerializeGbtDump(const Ensemble& model);

AdditiveModel ParseAdditiveDump(std::string_view dump_text, const FeatureSpace& space);
std::string SerializeAdditiveDump(const AdditiveModel& model);

// Detects the format from the top-level JSON shape (array = gbt-dump,
// object with `terms` = additive-dump). `base_score` is only consulted for
// gbt dumps.
ModelBundle LoadModelBundle(std::string_view dump_text, const std::optional<Rational>& base_score,
                            const FeatureSpace& space);

struct PredictionFixture {
  std::vector<std::vector<float>> points;
  std::vector<Rational> expected_logits;
};

// CSV with header `feature1,...,featureN,logit`; columns are matched to the
// space by name. Throws kMalformedFixture or kPointOutOfDomain.
PredictionFixture ParseFixtureCsv(std::string_view text, const FeatureSpace& space);

struct FixtureFailure {
  size_t row = 0;  // 0-based data row
  Rational expected;
  Rational actual;
  double abs_delta = 0.0;
};

struct FixtureReport {
  size_t rows = 0;
  double tolerance = 0.0;
  double max_abs_delta = 0.0;
  std::vector<FixtureFailure> failures;

  bool passed() const { return failures.empty(); }
};

inline constexpr double kDefaultFixtureTolerance = 1e-6;

FixtureReport ValidateAgainstFixture(const Ensemble& model, const PredictionFixture& fixture,
                                     double tolerance = kDefaultFixtureTolerance);

std::string ReadFile(const std::string& path);

}  // namespace treeverify::ingest

#endif  // TREEVERIFY_INGEST_INGEST_HPP_
