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

/* C interface to treeverify: exact verification of tree-ensemble
 * classifiers. Objects are opaque and owned by the caller, who releases
 * them with the matching *_free function. Failing calls return a nonzero
 * tv_status and leave a message for tv_last_error() on the calling thread. */

#ifndef TREEVERIFY_TREEVERIFY_H_
#define TREEVERIFY_TREEVERIFY_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TV_API __declspec(dllexport)
#else
#define TV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tv_status {
  TV_OK = 0,
  TV_ERR_INVALID_ARGUMENT = 1,
  TV_ERR_IO,
  TV_ERR_POINT_OUT_OF_DOMAIN,
  TV_ERR_NON_REPRESENTABLE,
  TV_ERR_EMPTY_BOX,
  TV_ERR_INVALID_SPACE,
  TV_ERR_MISSING_BASE_SCORE,
  TV_ERR_UNKNOWN_FEATURE,
  TV_ERR_MALFORMED_DUMP,
  TV_ERR_UNSUPPORTED_MISSING_BRANCH,
  TV_ERR_NON_ASCENDING_EDGES,
  TV_ERR_SCORE_COUNT_MISMATCH,
  TV_ERR_UNKNOWN_DIRECTION,
  TV_ERR_MALFORMED_ATOM,
  TV_ERR_MALFORMED_SPEC,
  TV_ERR_CONCLUSION_MISMATCH,
  TV_ERR_RESOURCE_EXHAUSTED,
  TV_ERR_DEGENERATE_INTERVAL,
  TV_ERR_MALFORMED_FIXTURE,
  TV_ERR_INTERNAL
} tv_status;

typedef enum tv_format { TV_FORMAT_JSON = 0, TV_FORMAT_TEXT = 1 } tv_format;

typedef struct tv_space tv_space;
typedef struct tv_model tv_model;
typedef struct tv_specs tv_specs;
typedef struct tv_result tv_result;

/* Search limits and report settings. Start from tv_options_init(). The
 * path fields are only echoed into reports and may be NULL. */
typedef struct tv_options {
  uint64_t max_nodes;
  double timeout_s;
  unsigned workers;  /* 0: one per hardware thread */
  int deterministic; /* single worker, zeroed timings */
  const char* model_path;
  const char* space_path;
  const char* specs_path;
  const char* base_score;
} tv_options;

TV_API const char* tv_version(void);
TV_API const char* tv_status_name(tv_status status);
/* Message of the last failure on this thread, or "" if none. */
TV_API const char* tv_last_error(void);
TV_API tv_status tv_last_error_code(void);

TV_API void tv_options_init(tv_options* options);

/* Feature space: {"features":[{"name","lower","upper"}]}. */
TV_API tv_status tv_space_load(const char* path, tv_space** out);
TV_API tv_status tv_space_parse(const char* text, tv_space** out);
TV_API void tv_space_free(tv_space* space);
TV_API size_t tv_space_num_features(const tv_space* space);
TV_API const char* tv_space_feature_name(const tv_space* space, size_t index);
TV_API tv_status tv_space_feature_index(const tv_space* space, const char* name, size_t* out);

/* Tree dump (JSON array) or additive dump (object with "terms"). A tree
 * dump needs `base_score` as a decimal string; it is ignored otherwise. */
TV_API tv_status tv_model_load(const char* path, const char* base_score, const tv_space* space, tv_model** out);
TV_API tv_status tv_model_parse(const char* text, const char* base_score, const tv_space* space, tv_model** out);
TV_API void tv_model_free(tv_model* model);
TV_API size_t tv_model_num_trees(const tv_model* model);
TV_API size_t tv_model_num_leaves(const tv_model* model);
/* Exact logit at `point`, rounded to double for display, and whether it
 * predicts the positive class (logit > 0). */
TV_API tv_status tv_model_predict(const tv_model* model, const float* point, size_t n, double* logit, int* positive);

TV_API tv_status tv_specs_load(const char* path, tv_specs** out);
TV_API tv_status tv_specs_parse(const char* text, tv_specs** out);
TV_API void tv_specs_free(tv_specs* specs);
TV_API size_t tv_specs_count(const tv_specs* specs);
TV_API const char* tv_specs_id(const tv_specs* specs, size_t index);

/* Each call below produces a report. Exit codes follow the command-line
 * tool: verify gives 0 (all proven), 1 (a violation) or 2 (error or
 * exhausted limits). */
TV_API tv_status tv_verify(const tv_model* model, const tv_specs* specs, const tv_options* options, tv_result** out);

/* `order` lists every feature index once, or is NULL for ascending order. */
TV_API tv_status tv_explain(const tv_model* model, const float* instance, size_t n, const size_t* order,
                            size_t order_len, const tv_options* options, tv_result** out);

/* Grid search over n points per feature for the implication spec `spec_id`
 * (NULL: the first implication). Exit code 1 when a violation is found. */
TV_API tv_status tv_grid(const tv_model* model, const tv_specs* specs, const char* spec_id, uint32_t n,
                         const tv_options* options, tv_result** out);

/* Re-verifies `spec_id` with premise atom `atom_index` set to each of the
 * decimal `thresholds`. */
TV_API tv_status tv_sweep(const tv_model* model, const tv_specs* specs, const char* spec_id, size_t atom_index,
                          const char* const* thresholds, size_t count, const tv_options* options, tv_result** out);

/* Model summary plus, when `fixture_path` is given, a comparison with the
 * expected logits of a `feature...,logit` CSV. Exit code 1 on mismatch. */
TV_API tv_status tv_check_model(const tv_model* model, const char* fixture_path, double tolerance,
                                const tv_options* options, tv_result** out);

TV_API const char* tv_result_json(const tv_result* result);
TV_API const char* tv_result_text(const tv_result* result);
TV_API int tv_result_exit_code(const tv_result* result);
TV_API void tv_result_free(tv_result* result);

#ifdef __cplusplus
}
#endif

#endif /* TREEVERIFY_TREEVERIFY_H_ */
