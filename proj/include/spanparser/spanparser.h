// Copyright 2026 The spanparser Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPANPARSER_SPANPARSER_H_
#define SPANPARSER_SPANPARSER_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SPANPARSER_BUILDING)
#define SP_API __attribute__((visibility("default")))
#else
#define SP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sp_status {
  SP_OK = 0,
  SP_ERROR_USAGE = 1,   /* bad configuration or argument */
  SP_ERROR_DATA = 2,    /* unreadable or malformed input, model mismatch */
  SP_ERROR_VERIFY = 3,  /* a verification suite failed */
  SP_ERROR_INTERNAL = 4
} sp_status;

typedef struct sp_config sp_config;
typedef struct sp_model sp_model;

/* Message of the last failed call on this thread; never NULL. */
SP_API const char *sp_last_error(void);

/* Releases strings returned by the library. */
SP_API void sp_string_free(char *text);

SP_API sp_status sp_config_create(sp_config **config);
SP_API void sp_config_free(sp_config *config);
/* Sets one key; '-' and '_' are interchangeable in key names. */
SP_API sp_status sp_config_set(sp_config *config, const char *key, const char *value);
SP_API sp_status sp_config_get(const sp_config *config, const char *key, char **value);
/* Reads key=value lines; '#' starts a comment line. */
SP_API sp_status sp_config_load_file(sp_config *config, const char *path);
/* All keys and current values, one "key=value" per line. */
SP_API sp_status sp_config_describe(const sp_config *config, char **text);

/* Called with each metrics line (no trailing newline) as training proceeds. */
typedef void (*sp_line_callback)(const char *line, void *user_data);

/* Trains on the "train" corpus, selecting on "dev" when set, and appends
   tab-separated metrics to "metrics_log" when set. */
SP_API sp_status sp_train(const sp_config *config, sp_line_callback on_line, void *user_data,
                          sp_model **model);
SP_API sp_status sp_model_load(const char *path, sp_model **model);
SP_API sp_status sp_model_save(const sp_model *model, const char *path);
SP_API void sp_model_free(sp_model *model);
/* Model settings as key=value lines. */
SP_API sp_status sp_model_describe(const sp_model *model, char **text);

/* Parses one input line: "word_TAG word_TAG ..." or a bracketed tree whose
   structure is ignored. decoder is "chart" or "topdown". Writes the
   bracketed tree and its score. Safe to call concurrently on one model. */
SP_API sp_status sp_parse(sp_model *model, const char *line, const char *decoder, char **tree,
                          double *score);

/* Corpus-level labeled precision, recall and F1 (fractions in [0, 1]). */
SP_API sp_status sp_eval_files(const char *gold_path, const char *predicted_path,
                               double *precision, double *recall, double *f1);

/* Runs a verification suite ("all" for the default set), reporting one line
   per suite. Returns SP_ERROR_VERIFY if any suite fails. */
SP_API sp_status sp_verify(const char *suite, uint64_t seed, int max_n, sp_line_callback on_line,
                           void *user_data);

/* Test hook: corrupts the backward rule of one operation ("affine", "relu",
   "tanh", "sigmoid", "matvec", "cwise_mul") until reset with NULL. */
SP_API sp_status sp_inject_gradient_fault(const char *op);

#ifdef __cplusplus
}
#endif

#endif  /* SPANPARSER_SPANPARSER_H_ */
