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

// treeverify: verify, explain, grid, sweep and check-model over the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "treeverify/treeverify.h"

namespace {

constexpr int kExitError = 2;

struct Common {
  std::string model;
  std::optional<std::string> base_score;
  std::string space;
  std::string specs;
  std::string out;
  std::string format = "json";
  bool deterministic = false;
  uint64_t max_nodes = 0;
  double timeout_s = 0.0;
  unsigned workers = 0;
};

struct Handles {
  tv_space* space = nullptr;
  tv_model* model = nullptr;
  tv_specs* specs = nullptr;
  tv_result* result = nullptr;
  ~Handles() {
    tv_result_free(result);
    tv_specs_free(specs);
    tv_model_free(model);
    tv_space_free(space);
  }
};

struct Failure {
  tv_status status;
  std::string message;
};

void Check(tv_status status) {
  if (status != TV_OK) throw Failure{status, tv_last_error()};
}

void AddCommon(CLI::App* cmd, Common& c, bool needs_specs) {
  cmd->add_option("--model", c.model, "tree dump or additive dump (JSON)")->required();
  cmd->add_option("--base-score", c.base_score, "base score of a tree dump, as a decimal");
  cmd->add_option("--space", c.space, "feature space config (JSON)")->required();
  auto* specs = cmd->add_option("--specs", c.specs, "spec file (JSON)");
  if (needs_specs) specs->required();
  cmd->add_option("--out", c.out, "write the report here instead of stdout");
  cmd->add_option("--format", c.format, "report format")->check(CLI::IsMember({"json", "text"}));
  cmd->add_flag("--deterministic", c.deterministic, "single worker, reproducible witnesses, zero timings");
  cmd->add_option("--max-nodes", c.max_nodes, "search node limit");
  cmd->add_option("--timeout-s", c.timeout_s, "search time limit in seconds");
  cmd->add_option("--workers", c.workers, "worker threads (0: all hardware threads)");
}

tv_options Options(const Common& c) {
  tv_options o;
  tv_options_init(&o);
  if (c.max_nodes) o.max_nodes = c.max_nodes;
  if (c.timeout_s > 0) o.timeout_s = c.timeout_s;
  o.workers = c.workers;
  o.deterministic = c.deterministic ? 1 : 0;
  o.model_path = c.model.c_str();
  o.space_path = c.space.c_str();
  o.specs_path = c.specs.empty() ? nullptr : c.specs.c_str();
  o.base_score = c.base_score ? c.base_score->c_str() : nullptr;
  return o;
}

void Load(const Common& c, Handles& h) {
  Check(tv_space_load(c.space.c_str(), &h.space));
  Check(tv_model_load(c.model.c_str(), c.base_score ? c.base_score->c_str() : nullptr, h.space, &h.model));
  if (!c.specs.empty()) Check(tv_specs_load(c.specs.c_str(), &h.specs));
}

void Emit(const Common& c, const std::string& body) {
  if (c.out.empty()) {
    std::cout << body;
    std::cout.flush();
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file || !(file << body)) throw Failure{TV_ERR_IO, "cannot write " + c.out};
}

int Finish(const Common& c, const tv_result* result) {
  Emit(c, c.format == "text" ? tv_result_text(result) : tv_result_json(result));
  return tv_result_exit_code(result);
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= text.size()) {
    const size_t comma = text.find(',', start);
    const size_t end = comma == std::string::npos ? text.size() : comma;
    if (end > start) out.push_back(text.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// "name=value,..." in any order, or bare values in feature order.
std::vector<float> ParseInstance(const std::string& text, const tv_space* space) {
  const size_t d = tv_space_num_features(space);
  std::vector<float> point(d, 0.0f);
  std::vector<bool> seen(d, false);
  const auto parts = SplitList(text);
  for (size_t i = 0; i < parts.size(); ++i) {
    const size_t eq = parts[i].find('=');
    size_t index = i;
    std::string value = parts[i];
    if (eq != std::string::npos) {
      Check(tv_space_feature_index(space, parts[i].substr(0, eq).c_str(), &index));
      value = parts[i].substr(eq + 1);
    } else if (i >= d) {
      throw Failure{TV_ERR_INVALID_ARGUMENT, "instance has more values than features"};
    }
    char* end = nullptr;
    point[index] = std::strtof(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
      throw Failure{TV_ERR_INVALID_ARGUMENT, "instance value '" + value + "' is not a number"};
    }
    seen[index] = true;
  }
  for (size_t f = 0; f < d; ++f) {
    if (!seen[f]) throw Failure{TV_ERR_INVALID_ARGUMENT, std::string("instance lacks ") + tv_space_feature_name(space, f)};
  }
  return point;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of tree-ensemble classifiers"};
  app.set_version_flag("--version", std::string(tv_version()));
  app.require_subcommand(1);

  Common c;
  auto* verify = app.add_subcommand("verify", "verify every spec in a spec file");
  AddCommon(verify, c, true);

  std::string instance;
  std::string order;
  auto* explain = app.add_subcommand("explain", "minimal sufficient reason for one prediction");
  AddCommon(explain, c, false);
  explain->add_option("--instance", instance, "feature values: name=value,... or values in feature order")->required();
  explain->add_option("--order", order, "deletion order as comma-separated feature names");

  std::string spec_id;
  uint32_t n = 30;
  auto* grid = app.add_subcommand("grid", "uniform grid search (detection only)");
  AddCommon(grid, c, true);
  grid->add_option("--spec-id", spec_id, "implication spec to check (default: the first)");
  grid->add_option("--n", n, "points per feature, endpoints included")->check(CLI::Range(2u, 100000u));

  size_t atom = 0;
  std::string thresholds;
  auto* sweep = app.add_subcommand("sweep", "re-verify a spec over premise thresholds");
  AddCommon(sweep, c, true);
  sweep->add_option("--spec-id", spec_id, "implication spec to sweep (default: the first)");
  sweep->add_option("--atom", atom, "index of the premise atom to move");
  sweep->add_option("--thresholds", thresholds, "comma-separated decimal thresholds")->required();

  std::string fixture;
  double tolerance = 0.0;
  auto* check = app.add_subcommand("check-model", "parse a model and compare it with a prediction fixture");
  AddCommon(check, c, false);
  check->add_option("--fixture", fixture, "CSV with feature columns and an expected logit column");
  check->add_option("--tolerance", tolerance, "largest accepted |delta logit| (default 1e-6)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version exit 0; usage errors share the error exit code.
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : 2;
  }

  try {
    Handles h;
    Load(c, h);
    const tv_options o = Options(c);
    if (verify->parsed()) {
      Check(tv_verify(h.model, h.specs, &o, &h.result));
    } else if (explain->parsed()) {
      const auto point = ParseInstance(instance, h.space);
      std::vector<size_t> sequence;
      for (const auto& name : SplitList(order)) {
        size_t index = 0;
        Check(tv_space_feature_index(h.space, name.c_str(), &index));
        sequence.push_back(index);
      }
      Check(tv_explain(h.model, point.data(), point.size(), order.empty() ? nullptr : sequence.data(),
                       sequence.size(), &o, &h.result));
    } else if (grid->parsed()) {
      Check(tv_grid(h.model, h.specs, spec_id.empty() ? nullptr : spec_id.c_str(), n, &o, &h.result));
    } else if (sweep->parsed()) {
      const auto values = SplitList(thresholds);
      std::vector<const char*> raw;
      for (const auto& v : values) raw.push_back(v.c_str());
      Check(tv_sweep(h.model, h.specs, spec_id.empty() ? nullptr : spec_id.c_str(), atom, raw.data(), raw.size(), &o,
                     &h.result));
    } else {
      Check(tv_check_model(h.model, fixture.empty() ? nullptr : fixture.c_str(), tolerance, &o, &h.result));
    }
    return Finish(c, h.result);
  } catch (const Failure& f) {
    std::cerr << "treeverify: " << tv_status_name(f.status) << ": " << f.message << "\n";
    if (c.format == "json") {
      nlohmann::ordered_json error;
      error["error"] = {{"code", tv_status_name(f.status)}, {"message", f.message}};
      error["exit_code"] = kExitError;
      try {
        Emit(c, error.dump(2) + "\n");
      } catch (const Failure&) {
      }
    }
    return kExitError;
  }
}
