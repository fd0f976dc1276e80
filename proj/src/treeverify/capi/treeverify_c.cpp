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

#include "treeverify/treeverify.h"

#include <algorithm>
#include <memory>
#include <new>
#include <string>
#include <thread>
#include <vector>

#include "treeverify/audit/baseline.hpp"
#include "treeverify/audit/report.hpp"
#include "treeverify/explain/explain.hpp"
#include "treeverify/ingest/ingest.hpp"
#include "treeverify/spec/spec.hpp"
#include "treeverify/verifier/verifier.hpp"

using namespace treeverify;

struct tv_space {
  FeatureSpace space;
};

struct tv_model {
  ingest::ModelBundle bundle;
  Ensemble ensemble;
  audit::ModelInfo info;
};

struct tv_specs {
  std::vector<spec::SpecEntry> entries;
};

struct tv_result {
  std::string json;
  std::string text;
  int exit_code = 0;
};

namespace {

thread_local std::string last_error;
thread_local tv_status last_code = TV_OK;

tv_status Fail(tv_status code, const std::string& message) {
  last_code = code;
  last_error = message;
  return code;
}

template <typename F>
tv_status Guard(F&& body) {
  last_code = TV_OK;
  last_error.clear();
  try {
    body();
    return TV_OK;
  } catch (const Error& e) {
    return Fail(static_cast<tv_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(TV_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(TV_ERR_INTERNAL, e.what());
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

std::optional<Rational> BaseScore(const char* text) {
  if (text == nullptr) return std::nullopt;
  auto value = ParseDecimal(text);
  if (!value) throw Error(ErrorCode::kInvalidArgument, std::string("base score '") + text + "' is not a decimal");
  return value;
}

tv_options Defaults(const tv_options* options) {
  tv_options out;
  tv_options_init(&out);
  return options ? *options : out;
}

verifier::Limits LimitsOf(const tv_options& o) {
  verifier::Limits limits;
  limits.max_nodes = o.max_nodes;
  limits.timeout = std::chrono::milliseconds(static_cast<int64_t>(o.timeout_s * 1000.0));
  if (o.deterministic) {
    limits.workers = 1;
  } else {
    limits.workers = o.workers ? o.workers : std::max(1u, std::thread::hardware_concurrency());
  }
  return limits;
}

audit::RunConfig ConfigOf(const tv_options& o, const char* command) {
  audit::RunConfig config;
  config.command = command;
  config.model_path = o.model_path ? o.model_path : "";
  config.space_path = o.space_path ? o.space_path : "";
  config.specs_path = o.specs_path ? o.specs_path : "";
  if (o.base_score) config.base_score = o.base_score;
  config.deterministic = o.deterministic != 0;
  config.limits = LimitsOf(o);
  return config;
}

tv_model* MakeModel(const std::string& text, const char* base_score, const tv_space* space) {
  Require(space != nullptr, "space is null");
  auto model = std::make_unique<tv_model>();
  model->bundle = ingest::LoadModelBundle(text, BaseScore(base_score), space->space);
  model->ensemble = model->bundle.ToEnsemble();
  model->info = audit::DescribeModel(model->bundle, model->ensemble);
  return model.release();
}

const spec::ThresholdImplication& FindImplication(const tv_specs* specs, const char* spec_id, const FeatureSpace& space,
                                                   std::string* id) {
  for (const auto& entry : specs->entries) {
    if (spec_id != nullptr && entry.id != spec_id) continue;
    if (entry.error) {
      if (spec_id != nullptr) throw *entry.error;
      continue;
    }
    if (!entry.spec->IsImplication()) {
      if (spec_id != nullptr) throw Error(ErrorCode::kInvalidArgument, "spec '" + entry.id + "' is not an implication");
      continue;
    }
    spec::ValidateSpec(*entry.spec, space);
    *id = entry.id;
    return std::get<spec::ThresholdImplication>(entry.spec->body);
  }
  throw Error(ErrorCode::kInvalidArgument,
              spec_id ? "no spec with id '" + std::string(spec_id) + "'" : std::string("no implication spec"));
}

tv_result* MakeResult(std::string json, std::string text, int exit_code) {
  auto* result = new tv_result;
  result->json = std::move(json);
  result->text = std::move(text);
  result->exit_code = exit_code;
  return result;
}

}  // namespace

extern "C" {

const char* tv_version(void) { return audit::ToolVersion(); }

const char* tv_status_name(tv_status status) {
  if (status == TV_OK) return "Ok";
  if (status < TV_ERR_INVALID_ARGUMENT || status > TV_ERR_INTERNAL) return "Unknown";
  return ErrorCodeName(static_cast<ErrorCode>(static_cast<int>(status))).data();
}

const char* tv_last_error(void) { return last_error.c_str(); }

tv_status tv_last_error_code(void) { return last_code; }

void tv_options_init(tv_options* options) {
  if (options == nullptr) return;
  const verifier::Limits defaults;
  options->max_nodes = defaults.max_nodes;
  options->timeout_s = static_cast<double>(defaults.timeout.count()) / 1000.0;
  options->workers = 0;
  options->deterministic = 0;
  options->model_path = nullptr;
  options->space_path = nullptr;
  options->specs_path = nullptr;
  options->base_score = nullptr;
}

tv_status tv_space_parse(const char* text, tv_space** out) {
  return Guard([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = new tv_space{ingest::ParseSpaceConfig(text)};
  });
}

tv_status tv_space_load(const char* path, tv_space** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new tv_space{ingest::ParseSpaceConfig(ingest::ReadFile(path))};
  });
}

void tv_space_free(tv_space* space) { delete space; }

size_t tv_space_num_features(const tv_space* space) { return space ? space->space.size() : 0; }

const char* tv_space_feature_name(const tv_space* space, size_t index) {
  if (space == nullptr || index >= space->space.size()) return nullptr;
  return space->space[index].name.c_str();
}

tv_status tv_space_feature_index(const tv_space* space, const char* name, size_t* out) {
  return Guard([&] {
    Require(space != nullptr && name != nullptr && out != nullptr, "null argument");
    *out = space->space.Require(name);
  });
}

tv_status tv_model_parse(const char* text, const char* base_score, const tv_space* space, tv_model** out) {
  return Guard([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = MakeModel(text, base_score, space);
  });
}

tv_status tv_model_load(const char* path, const char* base_score, const tv_space* space, tv_model** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = MakeModel(ingest::ReadFile(path), base_score, space);
  });
}

void tv_model_free(tv_model* model) { delete model; }

size_t tv_model_num_trees(const tv_model* model) { return model ? model->info.trees : 0; }

size_t tv_model_num_leaves(const tv_model* model) { return model ? model->info.leaves : 0; }

tv_status tv_model_predict(const tv_model* model, const float* point, size_t n, double* logit, int* positive) {
  return Guard([&] {
    Require(model != nullptr && point != nullptr, "null argument");
    Require(n == model->ensemble.space.size(), "point has the wrong number of features");
    const Rational value = EvaluateExact(model->ensemble, std::span<const float>(point, n));
    if (logit) *logit = value.get_d();
    if (positive) *positive = Predict(value) == PredictedClass::kSpreading;
  });
}

tv_status tv_specs_parse(const char* text, tv_specs** out) {
  return Guard([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = new tv_specs{spec::ParseSpecEntries(text)};
  });
}

tv_status tv_specs_load(const char* path, tv_specs** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new tv_specs{spec::ParseSpecEntries(ingest::ReadFile(path))};
  });
}

void tv_specs_free(tv_specs* specs) { delete specs; }

size_t tv_specs_count(const tv_specs* specs) { return specs ? specs->entries.size() : 0; }

const char* tv_specs_id(const tv_specs* specs, size_t index) {
  if (specs == nullptr || index >= specs->entries.size()) return nullptr;
  return specs->entries[index].id.c_str();
}

tv_status tv_verify(const tv_model* model, const tv_specs* specs, const tv_options* options, tv_result** out) {
  return Guard([&] {
    Require(model != nullptr && specs != nullptr && out != nullptr, "null argument");
    const tv_options o = Defaults(options);
    audit::RunConfig config = ConfigOf(o, "verify");
    auto entries = verifier::VerifySuite(model->ensemble, specs->entries, config.limits);
    const auto report = audit::BuildAuditReport(model->info, std::move(config), std::move(entries),
                                                model->ensemble.space);
    *out = MakeResult(audit::RenderAuditJson(report), audit::RenderAuditText(report), report.ExitCode());
  });
}

tv_status tv_explain(const tv_model* model, const float* instance, size_t n, const size_t* order, size_t order_len,
                     const tv_options* options, tv_result** out) {
  return Guard([&] {
    Require(model != nullptr && instance != nullptr && out != nullptr, "null argument");
    Require(n == model->ensemble.space.size(), "instance has the wrong number of features");
    const tv_options o = Defaults(options);
    const audit::RunConfig config = ConfigOf(o, "explain");
    std::optional<std::vector<size_t>> sequence;
    if (order != nullptr) sequence = std::vector<size_t>(order, order + order_len);
    const auto reason =
        explain::AbductiveExplanation(model->ensemble, std::span<const float>(instance, n), sequence, config.limits);
    *out = MakeResult(audit::RenderExplainJson(model->info, config, reason),
                      audit::RenderExplainText(model->info, reason), 0);
  });
}

tv_status tv_grid(const tv_model* model, const tv_specs* specs, const char* spec_id, uint32_t n,
                  const tv_options* options, tv_result** out) {
  return Guard([&] {
    Require(model != nullptr && specs != nullptr && out != nullptr, "null argument");
    const tv_options o = Defaults(options);
    const audit::RunConfig config = ConfigOf(o, "grid");
    std::string id;
    const auto& spec = FindImplication(specs, spec_id, model->ensemble.space, &id);
    const auto grid = audit::GridCheck(model->ensemble, spec, n);
    *out = MakeResult(audit::RenderGridJson(model->info, config, id, spec, grid),
                      audit::RenderGridText(model->info, id, spec, grid), grid.violations_found ? 1 : 0);
  });
}

tv_status tv_sweep(const tv_model* model, const tv_specs* specs, const char* spec_id, size_t atom_index,
                   const char* const* thresholds, size_t count, const tv_options* options, tv_result** out) {
  return Guard([&] {
    Require(model != nullptr && specs != nullptr && out != nullptr, "null argument");
    Require(thresholds != nullptr || count == 0, "null thresholds");
    const tv_options o = Defaults(options);
    const audit::RunConfig config = ConfigOf(o, "sweep");
    std::string id;
    const auto& spec = FindImplication(specs, spec_id, model->ensemble.space, &id);
    std::vector<Rational> values;
    for (size_t i = 0; i < count; ++i) {
      auto value = ParseDecimal(thresholds[i]);
      if (!value) throw Error(ErrorCode::kInvalidArgument, std::string("threshold '") + thresholds[i] + "' is not a decimal");
      values.push_back(*value);
    }
    const auto rows = audit::ThresholdSweep(model->ensemble, spec, atom_index, values, config.limits);
    int exit_code = 0;
    for (const auto& row : rows) {
      if (row.error) {
        exit_code = 2;
      } else if (row.verdict->status == verifier::Status::kViolated && exit_code == 0) {
        exit_code = 1;
      }
    }
    *out = MakeResult(audit::RenderSweepJson(model->info, config, id, spec, atom_index, rows),
                      audit::RenderSweepText(model->info, id, spec, atom_index, rows), exit_code);
  });
}

tv_status tv_check_model(const tv_model* model, const char* fixture_path, double tolerance,
                         const tv_options* options, tv_result** out) {
  return Guard([&] {
    Require(model != nullptr && out != nullptr, "null argument");
    const tv_options o = Defaults(options);
    const audit::RunConfig config = ConfigOf(o, "check-model");
    std::optional<ingest::FixtureReport> report;
    if (fixture_path != nullptr) {
      const auto fixture = ingest::ParseFixtureCsv(ingest::ReadFile(fixture_path), model->ensemble.space);
      report = ingest::ValidateAgainstFixture(model->ensemble, fixture,
                                              tolerance > 0 ? tolerance : ingest::kDefaultFixtureTolerance);
    }
    *out = MakeResult(audit::RenderCheckJson(model->info, config, report),
                      audit::RenderCheckText(model->info, report), report && !report->passed() ? 1 : 0);
  });
}

const char* tv_result_json(const tv_result* result) { return result ? result->json.c_str() : nullptr; }

const char* tv_result_text(const tv_result* result) { return result ? result->text.c_str() : nullptr; }

int tv_result_exit_code(const tv_result* result) { return result ? result->exit_code : 2; }

void tv_result_free(tv_result* result) { delete result; }

}  // extern "C"
