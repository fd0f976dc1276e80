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

#include "treeverify/audit/report.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"

namespace treeverify::audit {
namespace {

using Json = nlohmann::ordered_json;

constexpr size_t kMaxListedFailures = 20;
constexpr size_t kMaxListedTrees = 10;

// Shortest decimal that reads back as the same binary32 value.
Json Coordinate(float v) { return std::stod(Binary32ToString(v)); }

Json PointJson(const std::vector<std::string>& names, const std::vector<float>& point) {
  Json out = Json::object();
  for (size_t i = 0; i < point.size(); ++i) out[names[i]] = Coordinate(point[i]);
  return out;
}

std::string PointText(const std::vector<std::string>& names, const std::vector<float>& point) {
  std::string out;
  for (size_t i = 0; i < point.size(); ++i) {
    if (i) out += ' ';
    out += names[i] + "=" + Binary32ToString(point[i]);
  }
  return out;
}

double Millis(std::chrono::microseconds elapsed, const RunConfig& config) {
  return config.deterministic ? 0.0 : static_cast<double>(elapsed.count()) / 1000.0;
}

Json ModelJson(const ModelInfo& model) {
  Json out;
  out["format"] = model.source_format;
  out["trees"] = model.trees;
  out["leaves"] = model.leaves;
  out["base_score"] = ToDecimalString(model.base_score);
  out["features"] = model.features;
  return out;
}

Json ConfigJson(const RunConfig& config) {
  Json out;
  out["command"] = config.command;
  out["model"] = config.model_path;
  out["space"] = config.space_path;
  if (!config.specs_path.empty()) out["specs"] = config.specs_path;
  out["base_score"] = config.base_score ? Json(*config.base_score) : Json(nullptr);
  out["deterministic"] = config.deterministic;
  out["max_nodes"] = config.limits.max_nodes;
  out["timeout_s"] = static_cast<double>(config.limits.timeout.count()) / 1000.0;
  out["workers"] = config.limits.workers;
  return out;
}

Json Envelope(const ModelInfo& model, const RunConfig& config) {
  Json out;
  out["tool"] = {{"name", "treeverify"}, {"version", ToolVersion()}};
  out["config"] = ConfigJson(config);
  out["model"] = ModelJson(model);
  return out;
}

Json ErrorJson(const Error& e) { return {{"code", ErrorCodeName(e.code())}, {"message", e.what()}}; }

std::string ImplicationText(const spec::ThresholdImplication& spec) {
  std::string premise;
  for (const spec::Atom& atom : spec.premise) {
    if (!premise.empty()) premise += " and ";
    premise += atom.ToString();
  }
  return (premise.empty() ? "true" : premise) + " => " + spec.conclusion.ToString();
}

std::string SpecText(const spec::Specification& spec) {
  if (const auto* implication = std::get_if<spec::ThresholdImplication>(&spec.body)) return ImplicationText(*implication);
  const auto& mono = std::get<spec::Monotonicity>(spec.body);
  return "logit " + std::string(spec::DirectionName(mono.direction)) + " in " + mono.feature;
}

Json WitnessJson(const std::vector<std::string>& names, const verifier::Counterexample& witness) {
  Json out;
  out["point"] = PointJson(names, witness.point);
  out["logit"] = ToDecimalString(witness.logit);
  out["probability"] = witness.probability;
  if (witness.paired_point) {
    out["paired_point"] = PointJson(names, *witness.paired_point);
    out["paired_logit"] = ToDecimalString(*witness.paired_logit);
    out["paired_probability"] = *witness.paired_probability;
  }
  return out;
}

Json StatsJson(const verifier::SearchStats& stats, const RunConfig& config) {
  Json out;
  out["nodes"] = stats.nodes_explored;
  out["max_depth"] = stats.max_depth;
  out["elapsed_ms"] = Millis(stats.elapsed, config);
  if (stats.binary32_empty_intervals) out["binary32_empty_intervals"] = stats.binary32_empty_intervals;
  return out;
}

Json PerTreeJson(const verifier::PerTreeResult& result) {
  Json out;
  out["status"] = verifier::StatusName(result.verdict.status);
  out["trees_checked"] = result.trees_checked;
  out["offending_trees"] = result.offending.size();
  Json listed = Json::array();
  for (size_t i = 0; i < result.offending.size() && i < kMaxListedTrees; ++i) {
    const auto& v = result.offending[i];
    listed.push_back({{"tree", v.tree},
                      {"lower_leaf", v.lower_leaf},
                      {"upper_leaf", v.upper_leaf},
                      {"lower_weight", ToDecimalString(v.lower_weight)},
                      {"upper_weight", ToDecimalString(v.upper_weight)},
                      {"offending_pairs", v.offending_pairs}});
  }
  out["examples"] = std::move(listed);
  return out;
}

std::string VerdictWitnessText(const std::vector<std::string>& names, const verifier::Counterexample& w) {
  std::string out = "    witness " + PointText(names, w.point) + "  logit " + ToDecimalString(w.logit) + " (" +
                    PercentText(w.probability) + ")\n";
  if (w.paired_point) {
    out += "    paired  " + PointText(names, *w.paired_point) + "  logit " + ToDecimalString(*w.paired_logit) + " (" +
           PercentText(*w.paired_probability) + ")\n";
  }
  return out;
}

std::string Dump(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace

const char* ToolVersion() { return "0.1.0"; }

std::string PercentText(double probability) {
  std::ostringstream out;
  out << static_cast<long>(std::lround(probability * 100.0)) << "%";
  return out.str();
}

ModelInfo DescribeModel(const ingest::ModelBundle& bundle, const Ensemble& ensemble) {
  ModelInfo info;
  info.source_format = std::string(ingest::SourceFormatName(bundle.source_format));
  info.trees = ensemble.trees.size();
  info.leaves = ensemble.NumLeaves();
  info.base_score = ensemble.base_score;
  for (const Feature& f : ensemble.space.features()) info.features.push_back(f.name);
  return info;
}

int AuditReport::ExitCode() const {
  bool violated = false;
  for (const auto& entry : entries) {
    if (entry.error || !entry.verdict) return 2;
    violated = violated || entry.verdict->status == verifier::Status::kViolated;
  }
  return violated ? 1 : 0;
}

std::vector<std::string> SubsumptionNotes(const std::vector<verifier::SuiteEntry>& entries,
                                          const FeatureSpace& space) {
  std::vector<std::string> notes;
  for (const auto& a : entries) {
    if (!a.spec || !a.spec->IsImplication() || a.error) continue;
    const auto& ia = std::get<spec::ThresholdImplication>(a.spec->body);
    for (const auto& b : entries) {
      if (&a == &b || !b.spec || !b.spec->IsImplication() || b.error) continue;
      const auto& ib = std::get<spec::ThresholdImplication>(b.spec->body);
      if (!(ia.conclusion == ib.conclusion)) continue;
      if (spec::PremiseSubsumes(ia, ib, space)) {
        const bool same = spec::PremiseSubsumes(ib, ia, space);
        if (same && &b < &a) continue;
        notes.push_back(a.id + (same ? " is equivalent to " : " proves ") + b.id);
      }
    }
  }
  return notes;
}

AuditReport BuildAuditReport(ModelInfo model, RunConfig config, std::vector<verifier::SuiteEntry> entries,
                             const FeatureSpace& space) {
  AuditReport report;
  report.model = std::move(model);
  report.config = std::move(config);
  report.notes = SubsumptionNotes(entries, space);
  report.entries = std::move(entries);
  return report;
}

std::string RenderAuditJson(const AuditReport& report) {
  Json out = Envelope(report.model, report.config);
  Json specs = Json::array();
  std::map<std::string, size_t> counts;
  for (const auto& entry : report.entries) {
    Json item;
    const std::string status = entry.StatusLabel();
    ++counts[status];
    item["id"] = entry.id;
    if (entry.spec) {
      item["kind"] = entry.spec->IsImplication() ? "implication" : "monotone";
      item["spec"] = SpecText(*entry.spec);
    }
    item["status"] = status;
    if (entry.verdict && entry.verdict->witness) item["witness"] = WitnessJson(report.model.features, *entry.verdict->witness);
    if (entry.verdict) {
      item["stats"] = StatsJson(entry.verdict->stats, report.config);
    } else if (entry.exhausted_stats) {
      item["stats"] = StatsJson(*entry.exhausted_stats, report.config);
    }
    if (entry.per_tree) item["per_tree"] = PerTreeJson(*entry.per_tree);
    if (entry.verdict && !entry.verdict->notes.empty()) item["notes"] = entry.verdict->notes;
    if (entry.error) item["error"] = ErrorJson(*entry.error);
    specs.push_back(std::move(item));
  }
  out["specs"] = std::move(specs);
  out["notes"] = report.notes;
  Json summary = Json::object();
  for (const char* key : {"proven", "violated", "inconclusive", "exhausted", "error"}) summary[key] = counts[key];
  out["summary"] = std::move(summary);
  out["exit_code"] = report.ExitCode();
  return Dump(out);
}

std::string RenderAuditText(const AuditReport& report) {
  std::ostringstream out;
  const ModelInfo& m = report.model;
  out << "treeverify " << ToolVersion() << "\n";
  out << "model: " << m.source_format << ", " << m.trees << " trees, " << m.leaves << " leaves, base score "
      << ToDecimalString(m.base_score) << "\n\n";
  for (const auto& entry : report.entries) {
    out << entry.id << "  " << entry.StatusLabel();
    if (entry.spec) out << "  " << SpecText(*entry.spec);
    out << "\n";
    if (entry.verdict && entry.verdict->witness) out << VerdictWitnessText(m.features, *entry.verdict->witness);
    if (entry.per_tree && entry.per_tree->verdict.status != verifier::Status::kProven) {
      out << "    per-tree check: " << entry.per_tree->offending.size() << " tree(s) not monotone alone\n";
    }
    if (entry.verdict) {
      for (const auto& note : entry.verdict->notes) out << "    note: " << note << "\n";
      out << "    nodes " << entry.verdict->stats.nodes_explored << ", "
          << Millis(entry.verdict->stats.elapsed, report.config) << " ms\n";
    }
    if (entry.error) out << "    " << ErrorCodeName(entry.error->code()) << ": " << entry.error->what() << "\n";
  }
  if (!report.notes.empty()) {
    out << "\nnotes:\n";
    for (const auto& note : report.notes) out << "  " << note << "\n";
  }
  out << "\nexit " << report.ExitCode() << "\n";
  return out.str();
}

std::string RenderGridJson(const ModelInfo& model, const RunConfig& config, const std::string& spec_id,
                           const spec::ThresholdImplication& spec, const GridReport& grid) {
  Json out = Envelope(model, config);
  out["spec"] = {{"id", spec_id}, {"spec", ImplicationText(spec)}};
  Json g;
  g["n"] = grid.n;
  g["total_points"] = grid.total_points;
  g["premise_count"] = grid.premise_count;
  g["violations_found"] = grid.violations_found;
  g["elapsed_ms"] = Millis(grid.elapsed, config);
  if (grid.first_violation) {
    g["first_violation"] = {{"point", PointJson(model.features, grid.first_violation->point)},
                            {"logit", ToDecimalString(grid.first_violation->logit)},
                            {"probability", LogisticProbability(grid.first_violation->logit)}};
  }
  out["grid"] = std::move(g);
  out["note"] = "grid search only detects violations; finding none proves nothing";
  return Dump(out);
}

std::string RenderGridText(const ModelInfo& model, const std::string& spec_id, const spec::ThresholdImplication& spec,
                           const GridReport& grid) {
  std::ostringstream out;
  out << "grid " << spec_id << ": " << ImplicationText(spec) << "\n";
  out << "  n " << grid.n << ", points " << grid.total_points << ", premise " << grid.premise_count
      << ", violations " << grid.violations_found << "\n";
  if (grid.first_violation) {
    out << "  first at " << PointText(model.features, grid.first_violation->point) << "  logit "
        << ToDecimalString(grid.first_violation->logit) << "\n";
  }
  out << "  detection only: no violations found does not mean the spec holds\n";
  return out.str();
}

std::string RenderSweepJson(const ModelInfo& model, const RunConfig& config, const std::string& spec_id,
                            const spec::ThresholdImplication& spec, size_t atom_index,
                            const std::vector<SweepRow>& rows) {
  Json out = Envelope(model, config);
  const spec::Atom& atom = spec.premise[atom_index];
  out["spec"] = {{"id", spec_id},
                 {"spec", ImplicationText(spec)},
                 {"swept", atom.feature + " " + std::string(spec::CompareOpSymbol(atom.op)) + " t"}};
  Json table = Json::array();
  for (const SweepRow& row : rows) {
    Json item;
    item["threshold"] = ToDecimalString(row.threshold);
    item["status"] = row.StatusLabel();
    if (row.verdict && row.verdict->witness) item["witness"] = WitnessJson(model.features, *row.verdict->witness);
    if (row.verdict) item["stats"] = StatsJson(row.verdict->stats, config);
    if (row.error) item["error"] = ErrorJson(*row.error);
    table.push_back(std::move(item));
  }
  out["rows"] = std::move(table);
  return Dump(out);
}

std::string RenderSweepText(const ModelInfo& model, const std::string& spec_id, const spec::ThresholdImplication& spec,
                            size_t atom_index, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  const spec::Atom& atom = spec.premise[atom_index];
  out << "sweep " << spec_id << " over " << atom.feature << " " << spec::CompareOpSymbol(atom.op) << " t\n";
  for (const SweepRow& row : rows) {
    out << "  t=" << ToDecimalString(row.threshold) << "  " << row.StatusLabel();
    if (row.verdict && row.verdict->witness) {
      out << "  logit " << ToDecimalString(row.verdict->witness->logit) << " ("
          << PercentText(row.verdict->witness->probability) << ") at "
          << PointText(model.features, row.verdict->witness->point);
    }
    if (row.error) out << "  " << row.error->what();
    out << "\n";
  }
  return out.str();
}

std::string RenderExplainJson(const ModelInfo& model, const RunConfig& config, const explain::SufficientReason& reason) {
  Json out = Envelope(model, config);
  out["instance"] = PointJson(model.features, reason.instance);
  out["logit"] = ToDecimalString(reason.logit);
  out["probability"] = LogisticProbability(reason.logit);
  out["predicted"] = PredictedClassName(reason.predicted);
  Json names = Json::array();
  Json fixed = Json::object();
  for (size_t f : reason.features) {
    names.push_back(model.features[f]);
    fixed[model.features[f]] = Coordinate(reason.instance[f]);
  }
  out["explanation"] = {{"features", names}, {"fixed", fixed}};
  out["queries_used"] = reason.queries_used;
  out["on_decision_boundary"] = reason.on_decision_boundary;
  out["warnings"] = reason.warnings;
  return Dump(out);
}

std::string RenderExplainText(const ModelInfo& model, const explain::SufficientReason& reason) {
  std::ostringstream out;
  out << "instance " << PointText(model.features, reason.instance) << "\n";
  out << "predicted " << PredictedClassName(reason.predicted) << ", logit " << ToDecimalString(reason.logit) << " ("
      << PercentText(LogisticProbability(reason.logit)) << ")\n";
  out << "sufficient reason:";
  if (reason.features.empty()) out << " (none; the prediction does not depend on the inputs)";
  for (size_t f : reason.features) out << " " << model.features[f] << "=" << Binary32ToString(reason.instance[f]);
  out << "\nverifier queries " << reason.queries_used << "\n";
  for (const auto& w : reason.warnings) out << "warning: " << w << "\n";
  return out.str();
}

std::string RenderCheckJson(const ModelInfo& model, const RunConfig& config,
                            const std::optional<ingest::FixtureReport>& fixture) {
  Json out = Envelope(model, config);
  if (fixture) {
    Json f;
    f["rows"] = fixture->rows;
    f["tolerance"] = fixture->tolerance;
    f["max_abs_delta"] = fixture->max_abs_delta;
    f["passed"] = fixture->passed();
    f["failures"] = fixture->failures.size();
    Json listed = Json::array();
    for (size_t i = 0; i < fixture->failures.size() && i < kMaxListedFailures; ++i) {
      const auto& failure = fixture->failures[i];
      listed.push_back({{"row", failure.row},
                        {"expected", ToDecimalString(failure.expected)},
                        {"actual", ToDecimalString(failure.actual)},
                        {"abs_delta", failure.abs_delta}});
    }
    f["failing_rows"] = std::move(listed);
    out["fixture"] = std::move(f);
  }
  return Dump(out);
}

std::string RenderCheckText(const ModelInfo& model, const std::optional<ingest::FixtureReport>& fixture) {
  std::ostringstream out;
  out << "model: " << model.source_format << ", " << model.trees << " trees, " << model.leaves
      << " leaves, base score " << ToDecimalString(model.base_score) << "\n";
  if (fixture) {
    out << "fixture: " << fixture->rows << " rows, max |delta logit| " << fixture->max_abs_delta << " (tolerance "
        << fixture->tolerance << "), " << (fixture->passed() ? "ok" : "FAILED") << "\n";
    for (size_t i = 0; i < fixture->failures.size() && i < kMaxListedFailures; ++i) {
      const auto& failure = fixture->failures[i];
      out << "  row " << failure.row << ": expected " << ToDecimalString(failure.expected) << ", got "
          << ToDecimalString(failure.actual) << "\n";
    }
  }
  return out.str();
}

std::string RenderErrorJson(const Error& error) {
  Json out;
  out["tool"] = {{"name", "treeverify"}, {"version", ToolVersion()}};
  out["error"] = ErrorJson(error);
  out["exit_code"] = 2;
  return Dump(out);
}

}  // namespace treeverify::audit
