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

#include "treeverify/explain/explain.hpp"

#include <algorithm>

#include "treeverify/core/errors.hpp"
#include "treeverify/spec/spec.hpp"

namespace treeverify::explain {
namespace {

// Some point agreeing on `fixed` reaches the other class.
spec::ExistentialQuery FlipQuery(const Ensemble& model, std::span<const float> instance,
                                 const std::vector<char>& fixed, PredictedClass predicted) {
  spec::ExistentialQuery query;
  Box box = Box::FromSpace(model.space);
  for (size_t f = 0; f < box.size(); ++f) {
    if (fixed[f]) box.intervals[f] = Interval::Point(instance[f]);
  }
  query.constraint_box = std::move(box);
  query.target.constant = 0;
  query.target.op = predicted == PredictedClass::kSpreading ? spec::CompareOp::kLessEqual : spec::CompareOp::kGreater;
  return query;
}

bool Sufficient(const Ensemble& model, std::span<const float> instance, const std::vector<char>& fixed,
                PredictedClass predicted, const verifier::Limits& limits) {
  const auto verdict = verifier::DecideExistential(model, FlipQuery(model, instance, fixed, predicted), limits);
  return verdict.status == verifier::Status::kProven;
}

}  // namespace

bool IsSufficient(const Ensemble& model, std::span<const float> instance, const std::vector<size_t>& subset,
                  const verifier::Limits& limits) {
  const PredictedClass predicted = Predict(EvaluateExact(model, instance));
  std::vector<char> fixed(model.space.size(), 0);
  for (size_t f : subset) {
    if (f >= fixed.size()) throw Error(ErrorCode::kInvalidArgument, "feature index out of range");
    fixed[f] = 1;
  }
  return Sufficient(model, instance, fixed, predicted, limits);
}

SufficientReason AbductiveExplanation(const Ensemble& model, std::span<const float> instance,
                                      const std::optional<std::vector<size_t>>& order,
                                      const verifier::Limits& limits) {
  const size_t d = model.space.size();
  std::vector<size_t> sequence;
  if (order) {
    sequence = *order;
    std::vector<size_t> sorted = sequence;
    std::sort(sorted.begin(), sorted.end());
    bool permutation = sorted.size() == d;
    for (size_t i = 0; permutation && i < d; ++i) permutation = sorted[i] == i;
    if (!permutation) throw Error(ErrorCode::kInvalidArgument, "deletion order must list every feature once");
  } else {
    for (size_t f = 0; f < d; ++f) sequence.push_back(f);
  }

  SufficientReason reason;
  reason.instance.assign(instance.begin(), instance.end());
  reason.logit = EvaluateExact(model, instance);
  reason.predicted = Predict(reason.logit);
  if (reason.logit == 0) {
    reason.on_decision_boundary = true;
    reason.warnings.push_back("logit is exactly 0; explaining the not-spreading prediction");
  }

  std::vector<char> fixed(d, 1);
  for (size_t f : sequence) {
    fixed[f] = 0;
    ++reason.queries_used;
    if (!Sufficient(model, instance, fixed, reason.predicted, limits)) fixed[f] = 1;
  }
  for (size_t f = 0; f < d; ++f) {
    if (fixed[f]) reason.features.push_back(f);
  }
  return reason;
}

}  // namespace treeverify::explain
