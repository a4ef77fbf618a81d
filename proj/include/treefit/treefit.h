/*
 * Copyright 2026 The treefit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the treefit shared library.
 *
 * Objects are opaque handles released with their *_free function. Every
 * fallible call returns a tf_status; on failure tf_last_error() describes the
 * problem for the calling thread until its next failing call. Label indices
 * follow the order of the distance matrix the object was computed from.
 */

#ifndef TREEFIT_TREEFIT_H_
#define TREEFIT_TREEFIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(TREEFIT_BUILDING_LIBRARY)
#define TF_API __attribute__((visibility("default")))
#else
#define TF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tf_status {
  TF_OK = 0,
  TF_ERR_USAGE = 1,  /* invalid argument or null handle */
  TF_ERR_DATA = 2,   /* malformed or out-of-range input */
  TF_ERR_SOLVER = 3, /* LP solver failure */
  TF_ERR_INTERNAL = 4
} tf_status;

typedef enum tf_format {
  TF_FORMAT_AUTO = 0,
  TF_FORMAT_CSV = 1,
  TF_FORMAT_PHYLIP = 2
} tf_format;

typedef enum tf_corrclust_strategy {
  TF_CC_PIVOT_SWEEP = 0,
  TF_CC_RANDOM_PIVOT = 1,
  TF_CC_EXACT = 2
} tf_corrclust_strategy;

typedef enum tf_mode { TF_MODE_ULTRAMETRIC = 0, TF_MODE_TREE = 1 } tf_mode;

typedef struct tf_matrix tf_matrix;
typedef struct tf_result tf_result;
typedef struct tf_clustering tf_clustering;

typedef struct tf_options {
  /* Seed for randomized correlation clustering. */
  uint64_t seed;
  /* LP feasibility tolerance; values <= 0 select 1e-7. */
  double lp_tol;
  /* Per-level correlation clustering strategy of the fitting pipeline. */
  int corrclust_strategy;
  /* Tree fits: pivot label, or NULL to try every pivot. */
  const char* pivot;
  /* Keep the text dump of the lower-bound LP in the result. */
  int dump_lp;
  /* Worker threads for the pivot sweep; 0 uses the hardware concurrency. */
  unsigned threads;
} tf_options;

TF_API void tf_options_init(tf_options* options);

TF_API const char* tf_last_error(void);
TF_API const char* tf_version(void);

/* ---- distance matrices ---- */

TF_API tf_status tf_matrix_load(const char* path, tf_format format,
                                tf_matrix** out);
TF_API tf_status tf_matrix_parse(const char* text, tf_format format,
                                 tf_matrix** out);
/* `condensed` holds the n(n-1)/2 upper-triangle entries row by row. */
TF_API tf_status tf_matrix_create(size_t n, const char* const* labels,
                                  const double* condensed, tf_matrix** out);
TF_API void tf_matrix_free(tf_matrix* m);
TF_API size_t tf_matrix_size(const tf_matrix* m);
TF_API const char* tf_matrix_label(const tf_matrix* m, size_t i);
TF_API double tf_matrix_get(const tf_matrix* m, size_t i, size_t j);
/* Parser warnings, such as averaged asymmetric entries. */
TF_API size_t tf_matrix_warning_count(const tf_matrix* m);
TF_API const char* tf_matrix_warning(const tf_matrix* m, size_t k);

/* ---- fitting ---- */

/* `options` may be NULL for defaults. */
TF_API tf_status tf_fit_ultrametric(const tf_matrix* m,
                                    const tf_options* options,
                                    tf_result** out);
TF_API tf_status tf_fit_tree(const tf_matrix* m, const tf_options* options,
                             tf_result** out);
/* Exhaustive L1-optimal ultrametric; at most 7 labels. */
TF_API tf_status tf_oracle_ultrametric(const tf_matrix* m, tf_result** out);

TF_API void tf_result_free(tf_result* r);
TF_API tf_mode tf_result_mode(const tf_result* r);
TF_API size_t tf_result_size(const tf_result* r);
TF_API double tf_result_l1_error(const tf_result* r);
/* Returns 0 when no LP bound was computed. */
TF_API int tf_result_lp_lower_bound(const tf_result* r, double* bound);
TF_API size_t tf_result_num_levels(const tf_result* r);
/* Fitted distance between labels i and j of the source matrix. */
TF_API double tf_result_distance(const tf_result* r, size_t i, size_t j);
TF_API const char* tf_result_newick(const tf_result* r);
/* Empty unless dump_lp was requested. */
TF_API const char* tf_result_lp_dump(const tf_result* r);

/* ---- clustering ---- */

/* Correlation clustering of the graph whose edges are the pairs with
 * distance <= threshold. */
TF_API tf_status tf_corrclust(const tf_matrix* m, double threshold,
                              tf_corrclust_strategy strategy, uint64_t seed,
                              tf_clustering** out);
/* Exhaustive cluster-agreement optimum for the per-level correlation
 * clusterings of the ultrametric reduction of m; at most 6 labels and 3
 * levels. The pipeline's own cost on the same input is reported as the
 * algorithm cost. */
TF_API tf_status tf_oracle_hca(const tf_matrix* m, const tf_options* options,
                               tf_clustering** out);

TF_API void tf_clustering_free(tf_clustering* c);
TF_API size_t tf_clustering_num_levels(const tf_clustering* c);
TF_API size_t tf_clustering_num_parts(const tf_clustering* c, size_t level);
TF_API size_t tf_clustering_part_size(const tf_clustering* c, size_t level,
                                      size_t part);
TF_API size_t tf_clustering_member(const tf_clustering* c, size_t level,
                                   size_t part, size_t k);
TF_API double tf_clustering_cost(const tf_clustering* c);
/* Returns 0 when not available. */
TF_API int tf_clustering_algorithm_cost(const tf_clustering* c, double* cost);
TF_API int tf_clustering_lp_lower_bound(const tf_clustering* c,
                                        double* bound);

/* ---- evaluation ---- */

/* L_p error of a Newick tree against m; p = INFINITY gives the maximum. */
TF_API tf_status tf_eval_newick(const char* newick, const tf_matrix* m,
                                double p, double* error);

#ifdef __cplusplus
}
#endif

#endif /* TREEFIT_TREEFIT_H_ */
