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

// Audit reports. JSON is the contract; the text form is for people.

#ifndef TREEVERIFY_AUDIT_REPORT_HPP_
#define TREEVERIFY_AUDIT_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "treeverify/audit/baseline.hpp"
#include "treeverify/explain/explain.hpp"
#include "treeverify/ingest/ingest.hpp"
#include "treeverify/verifier/verifier.hpp"

namespace treeverify::audit {

const char* ToolVersion();

struct ModelInfo {
  std::string source_format;
  size_t trees = 0;
  size_t leaves = 0;
  Rational base_score;
  std::vector<std::string> features;
};

ModelInfo DescribeModel(const ingest::ModelBundle& bundle, const Ensemble& ensemble);

// Echoed into reports. In deterministic mode timings are written as 0 so
// identical inputs give identical bytes.
struct RunConfig {
  std::string command;
  std::string model_path;
  std::string space_path;
  std::string specs_path;
  std::optional<std::string> base_score;
  bool deterministic = false;
  verifier::Limits limits;
};

struct AuditReport {
  ModelInfo model;
  RunConfig config;
  std::vector<verifier::SuiteEntry> entries;
  // "C proves D" style observations between implication specs.
  std::vector<std::string> notes;

  // 0: all proven, 1: some violated, 2: some error or exhausted.
  int ExitCode() const;
};

AuditReport BuildAuditReport(ModelInfo model, RunConfig config, std::vector<verifier::SuiteEntry> entries,
                             const FeatureSpace& space);

// Pairs (a, b) of implication specs with equal conclusions where a's premise
// region contains b's, so a proven a settles b.
std::vector<std::string> SubsumptionNotes(const std::vector<verifier::SuiteEntry>& entries,
                                          const FeatureSpace& space);

std::string RenderAuditJson(const AuditReport& report);
std::string RenderAuditText(const AuditReport& report);

std::string RenderGridJson(const ModelInfo& model, const RunConfig& config, const std::string& spec_id,
                           const spec::ThresholdImplication& spec, const GridReport& grid);
std::string RenderGridText(const ModelInfo& model, const std::string& spec_id, const spec::ThresholdImplication& spec,
                           const GridReport& grid);

std::string RenderSweepJson(const ModelInfo& model, const RunConfig& config, const std::string& spec_id,
                            const spec::ThresholdImplication& spec, size_t atom_index,
                            const std::vector<SweepRow>& rows);
std::string RenderSweepText(const ModelInfo& model, const std::string& spec_id, const spec::ThresholdImplication& spec,
                            size_t atom_index, const std::vector<SweepRow>& rows);

std::string RenderExplainJson(const ModelInfo& model, const RunConfig& config, const explain::SufficientReason& reason);
std::string RenderExplainText(const ModelInfo& model, const explain::SufficientReason& reason);

std::string RenderCheckJson(const ModelInfo& model, const RunConfig& config,
                            const std::optional<ingest::FixtureReport>& fixture);
std::string RenderCheckText(const ModelInfo& model, const std::optional<ingest::FixtureReport>& fixture);

std::string RenderErrorJson(const Error& error);

// Whole percent, as in "52%".
std::string PercentText(double probability);

}  // namespace treeverify::audit

#endif  // TREEVERIFY_AUDIT_REPORT_HPP_
