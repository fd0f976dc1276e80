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

#include "treeverify/ingest/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "treeverify/core/errors.hpp"
#include "treeverify/ingest/exact_json.hpp"

namespace treeverify::ingest {
namespace {

using nlohmann::json;

const json& Field(const json& object, const char* key, ErrorCode code, const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) throw Error(code, where + ": missing field '" + key + "'");
  return *it;
}

int64_t IntegerField(const json& object, const char* key, const std::string& where) {
  const json& v = Field(object, key, ErrorCode::kMalformedDump, where);
  if (!v.is_number_integer()) throw Error(ErrorCode::kMalformedDump, where + ": field '" + key + "' must be an integer");
  return v.get<int64_t>();
}

// ---------------------------------------------------------------------------
// gbt-dump

class GbtTreeBuilder {
 public:
  GbtTreeBuilder(const FeatureSpace& space, size_t tree_index) : space_(space), tree_index_(tree_index) {}

  Tree Build(const json& root) {
    Visit(root);
    return Tree::FromNodes(std::move(nodes_));
  }

 private:
  std::string Where(int64_t nodeid) const {
    return "tree " + std::to_string(tree_index_) + ", node " + std::to_string(nodeid);
  }

  int32_t Visit(const json& record) {
    if (!record.is_object()) {
      throw Error(ErrorCode::kMalformedDump, "tree " + std::to_string(tree_index_) + ": node is not an object");
    }
    const int64_t nodeid = IntegerField(record, "nodeid", "tree " + std::to_string(tree_index_));
    if (!seen_ids_.emplace(nodeid, true).second) {
      throw Error(ErrorCode::kMalformedDump, Where(nodeid) + ": duplicate nodeid");
    }
    const auto slot = static_cast<int32_t>(nodes_.size());
    nodes_.emplace_back();

    if (record.contains("leaf")) {
      if (record.contains("children")) {
        throw Error(ErrorCode::kMalformedDump, Where(nodeid) + ": leaf carries children");
      }
      nodes_[slot].weight = ExactNumber(record["leaf"], ErrorCode::kMalformedDump, Where(nodeid) + " leaf");
      return slot;
    }

    const json& split = Field(record, "split", ErrorCode::kMalformedDump, Where(nodeid));
    if (!split.is_string()) throw Error(ErrorCode::kMalformedDump, Where(nodeid) + ": 'split' must be a feature name");
    auto feature = space_.IndexOf(split.get_ref<const std::string&>());
    if (!feature) {
      throw Error(ErrorCode::kUnknownFeature,
                  Where(nodeid) + ": split names unknown feature '" + split.get<std::string>() + "'");
    }
    const float threshold = Binary32Number(Field(record, "split_condition", ErrorCode::kMalformedDump, Where(nodeid)),
                                           ErrorCode::kMalformedDump, Where(nodeid) + " split_condition");
    const int64_t yes = IntegerField(record, "yes", Where(nodeid));
    const int64_t no = IntegerField(record, "no", Where(nodeid));
    if (yes == no) throw Error(ErrorCode::kMalformedDump, Where(nodeid) + ": yes and no name the same child");
    if (auto it = record.find("missing"); it != record.end()) {
      // Inputs are finite, so a missing-value route that coincides with one of
      // the two children never fires. Anything else would change semantics.
      if (!it->is_number_integer() || (it->get<int64_t>() != yes && it->get<int64_t>() != no)) {
        throw Error(ErrorCode::kUnsupportedMissingBranch,
                    Where(nodeid) + ": missing-value branch does not coincide with a child");
      }
    }
    const json& children = Field(record, "children", ErrorCode::kMalformedDump, Where(nodeid));
    if (!children.is_array() || children.size() != 2) {
      throw Error(ErrorCode::kMalformedDump, Where(nodeid) + ": internal node needs exactly two children");
    }
    const json* yes_child = nullptr;
    const json* no_child = nullptr;
    for (const json& child : children) {
      const int64_t id = IntegerField(child, "nodeid", Where(nodeid) + " child");
      if (id == yes) yes_child = &child;
      if (id == no) no_child = &child;
    }
    if (yes_child == nullptr || no_child == nullptr) {
      throw Error(ErrorCode::kMalformedDump, Where(nodeid) + ": children do not match yes/no identifiers");
    }
    const int32_t left = Visit(*yes_child);
    const int32_t right = Visit(*no_child);
    Tree::Node& n = nodes_[slot];
    n.feature = static_cast<int32_t>(*feature);
    n.threshold = threshold;
    n.left = left;
    n.right = right;
    return slot;
  }

  const FeatureSpace& space_;
  size_t tree_index_;
  std::vector<Tree::Node> nodes_;
  std::unordered_map<int64_t, bool> seen_ids_;
};

void AppendTreeJson(const Ensemble& model, const Tree& tree, int32_t node, int32_t depth, int32_t* next_id,
                    std::string* out) {
  const Tree::Node& n = tree.node(static_cast<size_t>(node));
  const int32_t id = (*next_id)++;
  if (n.IsLeaf()) {
    const std::string weight = ToDecimalString(n.weight);
    if (weight.find('/') != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "leaf weight " + weight + " has no finite decimal form");
    }
    *out += "{\"nodeid\":" + std::to_string(id) + ",\"leaf\":" + weight + "}";
    return;
  }
  // Children ids are assigned in visit order, so the yes child is id+1.
  std::string left;
  std::string right;
  const int32_t yes = *next_id;
  AppendTreeJson(model, tree, n.left, depth + 1, next_id, &left);
  const int32_t no = *next_id;
  AppendTreeJson(model, tree, n.right, depth + 1, next_id, &right);
  *out += "{\"nodeid\":" + std::to_string(id) + ",\"depth\":" + std::to_string(depth) + ",\"split\":" +
          json(model.space[static_cast<size_t>(n.feature)].name).dump() +
          ",\"split_condition\":" + Binary32ToString(n.threshold) + ",\"yes\":" + std::to_string(yes) +
          ",\"no\":" + std::to_string(no) + ",\"missing\":" + std::to_string(yes) + ",\"children\":[" + left + "," +
          right + "]}";
}

// ---------------------------------------------------------------------------
// additive-dump

std::vector<float> ParseEdges(const json& node, const std::string& where) {
  if (!node.is_array()) throw Error(ErrorCode::kMalformedDump, where + ": edges must be an array");
  std::vector<float> edges;
  edges.reserve(node.size());
  for (const json& e : node) edges.push_back(Binary32Number(e, ErrorCode::kMalformedDump, where + " edge"));
  for (size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i - 1] < edges[i])) {
      throw Error(ErrorCode::kNonAscendingEdges,
                  where + ": bin edges not strictly ascending after binary32 rounding at position " + std::to_string(i));
    }
  }
  return edges;
}

std::vector<Rational> ParseScores(const json& node, size_t expected, const std::string& where) {
  if (!node.is_array()) throw Error(ErrorCode::kMalformedDump, where + ": scores must be an array");
  if (node.size() != expected) {
    throw Error(ErrorCode::kScoreCountMismatch, where + ": expected " + std::to_string(expected) + " scores, got " +
                                                    std::to_string(node.size()));
  }
  std::vector<Rational> scores;
  scores.reserve(node.size());
  for (const json& s : node) scores.push_back(ExactNumber(s, ErrorCode::kMalformedDump, where + " score"));
  return scores;
}

std::string ExactDecimal(const Rational& value) {
  std::string text = ToDecimalString(value);
  if (text.find('/') != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "value " + text + " has no finite decimal form");
  }
  return text;
}

std::string EdgeList(const std::vector<float>& edges) {
  std::string out = "[";
  for (size_t i = 0; i < edges.size(); ++i) out += (i ? "," : "") + Binary32ToString(edges[i]);
  return out + "]";
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r' && c != ' ' && c != '\t') {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  return cells;
}

}  // namespace

std::string_view SourceFormatName(SourceFormat format) {
  return format == SourceFormat::kGbtDump ? "gbt-dump" : "additive-dump";
}

Ensemble ModelBundle::ToEnsemble() const {
  if (const auto* ensemble = std::get_if<Ensemble>(&model)) return *ensemble;
  return CompileAdditive(std::get<AdditiveModel>(model));
}

FeatureSpace ParseSpaceConfig(std::string_view text) {
  const json root = ParseExactJson(text, ErrorCode::kInvalidSpace);
  if (!root.is_object() || !root.contains("features") || !root["features"].is_array()) {
    throw Error(ErrorCode::kInvalidSpace, "space config must be an object with a 'features' array");
  }
  std::vector<Feature> features;
  for (const json& entry : root["features"]) {
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string()) {
      throw Error(ErrorCode::kInvalidSpace, "feature entry needs a string 'name'");
    }
    Feature f;
    f.name = entry["name"].get<std::string>();
    f.lower = Binary32Number(Field(entry, "lower", ErrorCode::kInvalidSpace, f.name), ErrorCode::kInvalidSpace,
                             f.name + " lower");
    f.upper = Binary32Number(Field(entry, "upper", ErrorCode::kInvalidSpace, f.name), ErrorCode::kInvalidSpace,
                             f.name + " upper");
    features.push_back(std::move(f));
  }
  return FeatureSpace(std::move(features));
}

std::string SerializeSpaceConfig(const FeatureSpace& space) {
  std::string out = "{\"features\":[";
  for (size_t i = 0; i < space.size(); ++i) {
    out += (i ? "," : "") + std::string("{\"name\":") + json(space[i].name).dump() +
           ",\"lower\":" + Binary32ToString(space[i].lower) + ",\"upper\":" + Binary32ToString(space[i].upper) + "}";
  }
  return out + "]}";
}

Ensemble ParseGbtDump(std::string_view dump_text, const std::optional<Rational>& base_score,
                      const FeatureSpace& space) {
  if (!base_score) {
    throw Error(ErrorCode::kMissingBaseScore,
                "base_score is required: it is stored outside the tree dump and omitting it shifts every logit");
  }
  const json root = ParseExactJson(dump_text, ErrorCode::kMalformedDump);
  if (!root.is_array()) throw Error(ErrorCode::kMalformedDump, "gbt dump must be a JSON array of trees");
  Ensemble model;
  model.space = space;
  model.base_score = *base_score;
  model.trees.reserve(root.size());
  for (size_t t = 0; t < root.size(); ++t) {
    // Some exporters emit each tree as an embedded JSON string.
    if (root[t].is_string()) {
      model.trees.push_back(
          GbtTreeBuilder(space, t).Build(ParseExactJson(root[t].get<std::string>(), ErrorCode::kMalformedDump)));
    } else {
      model.trees.push_back(GbtTreeBuilder(space, t).Build(root[t]));
    }
  }
  model.Validate();
  return model;
}

std::string SerializeGbtDump(const Ensemble& model) {
  std::string out = "[";
  for (size_t t = 0; t < model.trees.size(); ++t) {
    if (t) out += ",\n";
    int32_t next_id = 0;
    AppendTreeJson(model, model.trees[t], 0, 0, &next_id, &out);
  }
  return out + "]\n";
}

AdditiveModel ParseAdditiveDump(std::string_view dump_text, const FeatureSpace& space) {
  const json root = ParseExactJson(dump_text, ErrorCode::kMalformedDump);
  if (!root.is_object()) throw Error(ErrorCode::kMalformedDump, "additive dump must be a JSON object");
  AdditiveModel model;
  model.space = space;
  model.intercept = ExactNumber(Field(root, "intercept", ErrorCode::kMalformedDump, "additive dump"),
                                ErrorCode::kMalformedDump, "intercept");
  const json& terms = Field(root, "terms", ErrorCode::kMalformedDump, "additive dump");
  if (!terms.is_array()) throw Error(ErrorCode::kMalformedDump, "'terms' must be an array");
  for (size_t k = 0; k < terms.size(); ++k) {
    const json& term = terms[k];
    const std::string where = "term " + std::to_string(k);
    if (!term.is_object()) throw Error(ErrorCode::kMalformedDump, where + ": not an object");
    const json& names = Field(term, "features", ErrorCode::kMalformedDump, where);
    if (!names.is_array() || names.empty() || names.size() > 2) {
      throw Error(ErrorCode::kMalformedDump, where + ": 'features' must list one or two names");
    }
    std::vector<size_t> indices;
    for (const json& name : names) {
      if (!name.is_string()) throw Error(ErrorCode::kMalformedDump, where + ": feature names must be strings");
      indices.push_back(space.Require(name.get<std::string>()));
    }
    const json& edges = Field(term, "edges", ErrorCode::kMalformedDump, where);
    const json& scores = Field(term, "scores", ErrorCode::kMalformedDump, where);
    if (indices.size() == 1) {
      UnivariateTerm u;
      u.feature = indices[0];
      u.edges = ParseEdges(edges, where);
      u.scores = ParseScores(scores, u.edges.size() + 1, where);
      model.univariate.push_back(std::move(u));
      continue;
    }
    PairwiseTerm p;
    p.features = {indices[0], indices[1]};
    if (indices[0] == indices[1]) throw Error(ErrorCode::kMalformedDump, where + ": pairwise term repeats a feature");
    if (!edges.is_array() || edges.size() != 2) {
      throw Error(ErrorCode::kMalformedDump, where + ": pairwise edges must be [[...],[...]]");
    }
    p.edges = {ParseEdges(edges[0], where + " axis 0"), ParseEdges(edges[1], where + " axis 1")};
    const size_t rows = p.edges[0].size() + 1;
    const size_t cols = p.edges[1].size() + 1;
    if (!scores.is_array() || scores.size() != rows) {
      throw Error(ErrorCode::kScoreCountMismatch,
                  where + ": expected " + std::to_string(rows) + " score rows, got " +
                      std::to_string(scores.is_array() ? scores.size() : 0));
    }
    p.scores.reserve(rows * cols);
    for (size_t r = 0; r < rows; ++r) {
      auto row = ParseScores(scores[r], cols, where + " row " + std::to_string(r));
      p.scores.insert(p.scores.end(), row.begin(), row.end());
    }
    model.pairwise.push_back(std::move(p));
  }
  model.Validate();
  return model;
}

std::string SerializeAdditiveDump(const AdditiveModel& model) {
  std::string out = "{\"intercept\":" + ExactDecimal(model.intercept) + ",\"terms\":[";
  bool first = true;
  for (const UnivariateTerm& u : model.univariate) {
    out += first ? "" : ",";
    first = false;
    out += "\n{\"features\":[" + json(model.space[u.feature].name).dump() + "],\"edges\":" + EdgeList(u.edges) +
           ",\"scores\":[";
    for (size_t i = 0; i < u.scores.size(); ++i) out += (i ? "," : "") + ExactDecimal(u.scores[i]);
    out += "]}";
  }
  for (const PairwiseTerm& p : model.pairwise) {
    out += first ? "" : ",";
    first = false;
    out += "\n{\"features\":[" + json(model.space[p.features[0]].name).dump() + "," +
           json(model.space[p.features[1]].name).dump() + "],\"edges\":[" + EdgeList(p.edges[0]) + "," +
           EdgeList(p.edges[1]) + "],\"scores\":[";
    const size_t cols = p.edges[1].size() + 1;
    for (size_t r = 0; r * cols < p.scores.size(); ++r) {
      out += (r ? ",[" : "[");
      for (size_t c = 0; c < cols; ++c) out += (c ? "," : "") + ExactDecimal(p.scores[r * cols + c]);
      out += "]";
    }
    out += "]}";
  }
  return out + "]}\n";
}

ModelBundle LoadModelBundle(std::string_view dump_text, const std::optional<Rational>& base_score,
                            const FeatureSpace& space) {
  const auto first = std::find_if(dump_text.begin(), dump_text.end(), [](char c) { return !std::isspace(c); });
  ModelBundle bundle;
  if (first != dump_text.end() && *first == '[') {
    bundle.model = ParseGbtDump(dump_text, base_score, space);
    bundle.source_format = SourceFormat::kGbtDump;
  } else {
    bundle.model = ParseAdditiveDump(dump_text, space);
    bundle.source_format = SourceFormat::kAdditiveDump;
  }
  bundle.metadata["source_format"] = std::string(SourceFormatName(bundle.source_format));
  return bundle;
}

PredictionFixture ParseFixtureCsv(std::string_view text, const FeatureSpace& space) {
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  std::vector<size_t> column_feature;  // CSV column -> feature index
  size_t logit_column = 0;
  bool have_header = false;
  PredictionFixture fixture;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = SplitCsvLine(line);
    const std::string where = "fixture line " + std::to_string(line_no);
    if (!have_header) {
      have_header = true;
      if (cells.size() != space.size() + 1) {
        throw Error(ErrorCode::kMalformedFixture, where + ": header must name every feature plus 'logit'");
      }
      std::vector<char> used(space.size(), 0);
      bool saw_logit = false;
      for (size_t c = 0; c < cells.size(); ++c) {
        if (cells[c] == "logit") {
          saw_logit = true;
          logit_column = c;
          column_feature.push_back(space.size());
          continue;
        }
        auto index = space.IndexOf(cells[c]);
        if (!index) throw Error(ErrorCode::kUnknownFeature, where + ": unknown feature column '" + cells[c] + "'");
        if (used[*index]++) throw Error(ErrorCode::kMalformedFixture, where + ": duplicate column '" + cells[c] + "'");
        column_feature.push_back(*index);
      }
      if (!saw_logit) throw Error(ErrorCode::kMalformedFixture, where + ": header lacks a 'logit' column");
      continue;
    }
    if (cells.size() != column_feature.size()) {
      throw Error(ErrorCode::kMalformedFixture, where + ": expected " + std::to_string(column_feature.size()) +
                                                    " cells, got " + std::to_string(cells.size()));
    }
    std::vector<float> point(space.size());
    Rational expected;
    for (size_t c = 0; c < cells.size(); ++c) {
      if (c == logit_column) {
        auto value = ParseDecimal(cells[c]);
        if (!value) throw Error(ErrorCode::kMalformedFixture, where + ": bad logit '" + cells[c] + "'");
        expected = *value;
        continue;
      }
      auto value = DecimalToBinary32(cells[c]);
      if (!value) throw Error(ErrorCode::kMalformedFixture, where + ": bad coordinate '" + cells[c] + "'");
      const size_t f = column_feature[c];
      if (!(*value >= space[f].lower && *value <= space[f].upper)) {
        throw Error(ErrorCode::kPointOutOfDomain, where + ": '" + space[f].name + "' = " + cells[c] + " outside domain");
      }
      point[f] = *value;
    }
    fixture.points.push_back(std::move(point));
    fixture.expected_logits.push_back(std::move(expected));
  }
  if (!have_header) throw Error(ErrorCode::kMalformedFixture, "fixture is empty");
  return fixture;
}

FixtureReport ValidateAgainstFixture(const Ensemble& model, const PredictionFixture& fixture, double tolerance) {
  FixtureReport report;
  report.rows = fixture.points.size();
  report.tolerance = tolerance;
  for (size_t r = 0; r < fixture.points.size(); ++r) {
    Rational actual = EvaluateExact(model, fixture.points[r]);
    const double delta = std::fabs(Rational(actual - fixture.expected_logits[r]).get_d());
    report.max_abs_delta = std::max(report.max_abs_delta, delta);
    if (!(delta <= tolerance)) report.failures.push_back({r, fixture.expected_logits[r], std::move(actual), delta});
  }
  return report;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace treeverify::ingest
