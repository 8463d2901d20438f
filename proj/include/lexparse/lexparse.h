// Copyright 2026 The Lexparse Authors.
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

#ifndef LEXPARSE_LEXPARSE_H_
#define LEXPARSE_LEXPARSE_H_

/* C interface to the lexparse library. Every object is an opaque handle
 * released with its _free function. Functions return LP_OK or an error
 * status; lp_last_error() then describes the failure (per thread). Strings
 * returned through char** are owned by the caller and released with
 * lp_string_free(). */

#include <stddef.h>
#include <stdint.h>

#if defined(LEXPARSE_BUILDING_LIBRARY)
#define LP_API __attribute__((visibility("default")))
#else
#define LP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lp_status {
  LP_OK = 0,
  LP_ERR_INVALID_ARGUMENT = 1,
  LP_ERR_IO = 2,
  LP_ERR_PARSE = 3,
  LP_ERR_CONTRACT = 4,
  LP_ERR_NUMERIC = 5,
  LP_ERR_INTERNAL = 6
} lp_status;

typedef struct lp_corpus lp_corpus;
typedef struct lp_lexicon lp_lexicon;
typedef struct lp_catalog lp_catalog;
typedef struct lp_parser lp_parser;
typedef struct lp_disamb lp_disamb;

/* Receives one progress line (no trailing newline). */
typedef void (*lp_log_fn)(const char* line, void* user);

LP_API const char* lp_version(void);
LP_API const char* lp_last_error(void);
LP_API const char* lp_status_name(lp_status status);
LP_API void lp_string_free(char* s);

/* Corpora: bracketed trees, one per line, or TSV with the tree last. */
LP_API lp_status lp_corpus_load(const char* path, lp_corpus** out);
LP_API lp_status lp_corpus_from_text(const char* text, lp_corpus** out);
/* Trees, or plain tokenized utterances, one per line (for parsing). */
LP_API lp_status lp_corpus_load_input(const char* path, lp_corpus** out);
LP_API lp_status lp_corpus_toy(size_t count, uint64_t seed, lp_corpus** out);
LP_API lp_status lp_corpus_save(const lp_corpus* corpus, const char* path);
LP_API size_t lp_corpus_size(const lp_corpus* corpus);
LP_API lp_status lp_corpus_line(const lp_corpus* corpus, size_t index, char** out);
LP_API void lp_corpus_free(lp_corpus* corpus);

/* Lexicons. */
LP_API lp_status lp_lexicon_build(const lp_corpus* corpus, lp_lexicon** out,
                                  size_t* total_values);
LP_API lp_status lp_lexicon_load(const char* path, lp_lexicon** out);
LP_API lp_status lp_lexicon_save(const lp_lexicon* lexicon, const char* path);
/* `value` is space-separated tokens. */
LP_API lp_status lp_lexicon_add(lp_lexicon* lexicon, const char* category, const char* value);
LP_API lp_status lp_lexicon_add_catalog(lp_lexicon* lexicon, const lp_catalog* catalog);
LP_API lp_status lp_lexicon_stats(const lp_lexicon* lexicon, size_t* categories,
                                  size_t* unique_values);
LP_API void lp_lexicon_free(lp_lexicon* lexicon);

/* New-value catalogs (lexicon TSV layout). */
LP_API lp_status lp_catalog_load(const char* path, lp_catalog** out);
LP_API lp_status lp_catalog_toy(lp_catalog** out);
LP_API lp_status lp_catalog_save(const lp_catalog* catalog, const char* path);
LP_API lp_status lp_catalog_validate(const lp_catalog* catalog, const lp_lexicon* base);
LP_API void lp_catalog_free(lp_catalog* catalog);

/* Slot disambiguator. `config` is key=value text (NULL for defaults). */
LP_API lp_status lp_disamb_train(const lp_corpus* train, const lp_corpus* heldout,
                                 const lp_lexicon* lexicon, const char* config,
                                 lp_log_fn log, void* user, lp_disamb** out);
LP_API lp_status lp_disamb_load(const char* path, lp_disamb** out);
LP_API lp_status lp_disamb_save(const lp_disamb* model, const char* path);
LP_API lp_status lp_disamb_eval(const lp_disamb* model, const lp_corpus* corpus,
                                const lp_lexicon* lexicon, double* accuracy, size_t* examples);
/* Labeled examples as TSV: category, i:j, True/False, tokens. */
LP_API lp_status lp_disamb_examples(const lp_corpus* corpus, const lp_lexicon* lexicon,
                                    char** out_tsv);
/* Same layout with Kept/Removed verdicts instead of labels. */
LP_API lp_status lp_disamb_filter(const lp_disamb* model, const lp_corpus* corpus,
                                  const lp_lexicon* lexicon, double threshold, char** out_tsv);
LP_API void lp_disamb_free(lp_disamb* model);

/* Parser. `config` is key=value text: parser and training keys plus
 * filter=none|model|oracle and threshold. `lexicon` and `disamb` may be NULL
 * when the mode or filter does not use them. */
LP_API lp_status lp_parser_train(const lp_corpus* train, const lp_corpus* dev,
                                 const lp_lexicon* lexicon, const lp_disamb* disamb,
                                 const char* config, lp_log_fn log, void* user,
                                 lp_parser** out);
LP_API lp_status lp_parser_load(const char* path, lp_parser** out);
LP_API lp_status lp_parser_save(const lp_parser* parser, const char* path);
/* Resolved configuration as key=value lines. */
LP_API lp_status lp_parser_config(const lp_parser* parser, char** out);
/* `options` is key=value text: filter, threshold. */
LP_API lp_status lp_parser_parse(const lp_parser* parser, const lp_corpus* input,
                                 const lp_lexicon* lexicon, const lp_disamb* disamb,
                                 const char* options, lp_corpus** out);
LP_API void lp_parser_free(lp_parser* parser);

/* Evaluation of aligned corpora. Either report pointer may be NULL. */
LP_API lp_status lp_evaluate(const lp_corpus* predicted, const lp_corpus* gold,
                             double* exact_match, char** report_text, char** report_kv);

/* Modified test sets. */
LP_API lp_status lp_simulate_generate(const lp_corpus* test, const lp_catalog* catalog,
                                      double p_replace, uint64_t seed, lp_corpus** out,
                                      size_t* modified_utterances, char** log_tsv);
LP_API lp_status lp_simulate_calibrate(const lp_corpus* test, const lp_catalog* catalog,
                                       double target_fraction, uint64_t seed,
                                       double* p_replace);
/* `options` is key=value text: scenario=plain|updated|stale|regex, filter,
 * threshold, seed. */
LP_API lp_status lp_simulate_run(const lp_parser* parser, const lp_disamb* disamb,
                                 const lp_lexicon* lexicon, const lp_catalog* catalog,
                                 const lp_corpus* test, const char* options,
                                 double* exact_match, char** report_kv);
/* One column per model; specs[i] is key=value text as for lp_simulate_run
 * plus name=. */
LP_API lp_status lp_simulate_sweep(const lp_corpus* test, const lp_catalog* catalog,
                                   const lp_lexicon* lexicon, const lp_disamb* disamb,
                                   const double* rates, size_t num_rates, uint64_t seed,
                                   const lp_parser* const* parsers, const char* const* specs,
                                   size_t num_models, char** out_tsv);

/* FNV-1a hash of a file's bytes. */
LP_API lp_status lp_file_hash(const char* path, uint64_t* out);

#ifdef __cplusplus
}
#endif

#endif /* LEXPARSE_LEXPARSE_H_ */
