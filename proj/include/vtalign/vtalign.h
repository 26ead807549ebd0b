/*
 * SPDX-FileCopyrightText: (c) 2026 The vtalign Authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

/*
 * C interface of libvtalign: weakly supervised temporal alignment of two
 * ordered feature streams (video intervals against text sentences).
 *
 * Every function returns a vtalign_status. On failure a one-line message is
 * available from vtalign_last_error() on the calling thread until the next
 * failing call. Handles are opaque; each *_create / *_load / *_solve output
 * is released with the matching *_free. Matrices cross the boundary as
 * row-major double arrays.
 */

#ifndef VTALIGN_H
#define VTALIGN_H

#include <stddef.h>
#include <stdint.h>

#if defined(VTALIGN_BUILDING_LIBRARY)
#define VTALIGN_API __attribute__((visibility("default")))
#else
#define VTALIGN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vtalign_status {
  VTALIGN_OK = 0,
  VTALIGN_ERR_INVALID_ARGUMENT = 1,
  VTALIGN_ERR_SHAPE_MISMATCH = 2,
  VTALIGN_ERR_NON_FINITE = 3,
  VTALIGN_ERR_INFEASIBLE = 4,
  VTALIGN_ERR_PARSE = 5,
  VTALIGN_ERR_IO = 6,
  VTALIGN_ERR_SIZE_GUARD = 7,
  VTALIGN_ERR_INTERNAL = 8
} vtalign_status;

/* Stable machine-readable name, e.g. "infeasible". */
VTALIGN_API const char* vtalign_status_name(vtalign_status status);
VTALIGN_API const char* vtalign_last_error(void);
VTALIGN_API const char* vtalign_version(void);

/* ---- matrices ---------------------------------------------------------- */

typedef struct vtalign_matrix vtalign_matrix;

/* A NULL row_major gives a zero matrix. */
VTALIGN_API vtalign_status vtalign_matrix_create(size_t rows, size_t cols,
                                                 const double* row_major,
                                                 vtalign_matrix** out);
/* Headered comma-separated text format ("rows,cols" then one line per row). */
VTALIGN_API vtalign_status vtalign_matrix_read(const char* path, vtalign_matrix** out);
VTALIGN_API vtalign_status vtalign_matrix_write(const vtalign_matrix* m, const char* path);
VTALIGN_API size_t vtalign_matrix_rows(const vtalign_matrix* m);
VTALIGN_API size_t vtalign_matrix_cols(const vtalign_matrix* m);
/* Copies rows*cols values in row-major order; capacity is in doubles. */
VTALIGN_API vtalign_status vtalign_matrix_copy(const vtalign_matrix* m, double* row_major,
                                               size_t capacity);
VTALIGN_API void vtalign_matrix_free(vtalign_matrix* m);

/* ---- alignment oracle -------------------------------------------------- */

/* Cheapest monotone alignment path under a J x I linear cost. `forbidden`
 * is NULL or a J*I row-major array where nonzero marks a forbidden cell.
 * Writes I row indices (0-based) to `assignment`. */
VTALIGN_API vtalign_status vtalign_minimize_linear(const vtalign_matrix* cost,
                                                   const uint8_t* forbidden,
                                                   int32_t* assignment, double* value);

/* ---- problems ---------------------------------------------------------- */

typedef enum vtalign_rounding {
  VTALIGN_ROUNDING_NEAREST = 0,
  VTALIGN_ROUNDING_FEATURE = 1,
  VTALIGN_ROUNDING_MODEL = 2
} vtalign_rounding;

typedef enum vtalign_supervision {
  VTALIGN_SUPERVISION_NONE = 0,
  VTALIGN_SUPERVISION_SOFT = 1,
  VTALIGN_SUPERVISION_HARD = 2
} vtalign_supervision;

/* Model hyperparameters. mu and mu_background are absolute target
 * durations; NaN leaves them unset (uniform I/J targets). */
typedef struct vtalign_params {
  double lambda;
  double sigma;
  double mu;
  double mu_background;
  double alpha;
  double beta;
  double kappa;
  vtalign_rounding rounding;
  double gap_tol;
  int32_t max_iter;
  uint64_t seed;
  int32_t affine;
} vtalign_params;

VTALIGN_API void vtalign_params_default(vtalign_params* params);

typedef struct vtalign_problem vtalign_problem;

VTALIGN_API vtalign_status vtalign_problem_create(const vtalign_params* params,
                                                  vtalign_problem** out);
/* Loads every stream and hyperparameter named by a JSON manifest. */
VTALIGN_API vtalign_status vtalign_problem_load_manifest(const char* path,
                                                         vtalign_problem** out);
/* phi is D x I raw video features, psi_raw is E x K sentence features
 * (background columns are interleaved internally, giving J = 2K + 1 rows).
 * `annotation` holds n_intervals (j, start, end) triples in interleaved row
 * indices, or NULL. Supervised streams require an annotation. */
VTALIGN_API vtalign_status vtalign_problem_add_stream(vtalign_problem* problem, const char* id,
                                                      const vtalign_matrix* phi,
                                                      const vtalign_matrix* psi_raw,
                                                      const int32_t* annotation,
                                                      size_t n_intervals, int supervised);
VTALIGN_API size_t vtalign_problem_stream_count(const vtalign_problem* problem);
VTALIGN_API vtalign_status vtalign_problem_get_params(const vtalign_problem* problem,
                                                      vtalign_params* out);
VTALIGN_API vtalign_status vtalign_problem_set_params(vtalign_problem* problem,
                                                      const vtalign_params* params);
VTALIGN_API void vtalign_problem_free(vtalign_problem* problem);

/* ---- solving ----------------------------------------------------------- */

typedef struct vtalign_result vtalign_result;

/* Solves the relaxed problem, rounds every stream and scores annotated
 * ones. */
VTALIGN_API vtalign_status vtalign_problem_solve(const vtalign_problem* problem,
                                                 vtalign_supervision supervision,
                                                 vtalign_result** out);

VTALIGN_API int32_t vtalign_result_iterations(const vtalign_result* result);
VTALIGN_API int vtalign_result_converged(const vtalign_result* result);
VTALIGN_API double vtalign_result_final_objective(const vtalign_result* result);
VTALIGN_API double vtalign_result_final_gap(const vtalign_result* result);
VTALIGN_API size_t vtalign_result_trace_length(const vtalign_result* result);
/* Either output pointer may be NULL. */
VTALIGN_API vtalign_status vtalign_result_copy_trace(const vtalign_result* result,
                                                     double* objective, double* gap,
                                                     size_t capacity);
VTALIGN_API size_t vtalign_result_stream_count(const vtalign_result* result);
VTALIGN_API const char* vtalign_result_stream_id(const vtalign_result* result, size_t index);
/* Writes the stream's interval count to *length and, when capacity
 * suffices, its row indices to assignment. */
VTALIGN_API vtalign_status vtalign_result_stream_path(const vtalign_result* result,
                                                      size_t index, int32_t* assignment,
                                                      size_t capacity, size_t* length);
/* Fails with VTALIGN_ERR_INVALID_ARGUMENT when the stream has no
 * annotation. */
VTALIGN_API vtalign_status vtalign_result_stream_jaccard(const vtalign_result* result,
                                                         size_t index, double* jaccard);
/* Mean over unsupervised annotated streams of the rounded prediction and of
 * the diagonal and random baselines; any output may be NULL. */
VTALIGN_API vtalign_status vtalign_result_mean_jaccard(const vtalign_result* result,
                                                       double* model, double* diagonal,
                                                       double* random);
VTALIGN_API vtalign_status vtalign_result_model(const vtalign_result* result,
                                                vtalign_matrix** w_star);
/* <id>.pred.csv per stream, report.json, trace.csv, w_star.csv. */
VTALIGN_API vtalign_status vtalign_result_write(const vtalign_result* result,
                                                const char* out_dir);
VTALIGN_API void vtalign_result_free(vtalign_result* result);

/* ---- files and experiments -------------------------------------------- */

/* Jaccard of a prediction file against an annotation file. */
VTALIGN_API vtalign_status vtalign_evaluate_files(const char* predictions,
                                                  const char* annotations, double* score);

typedef struct vtalign_synth_config {
  int32_t sentences;
  int32_t intervals;
  int32_t text_dim;
  int32_t video_dim;
  double noise;
  double concentration;
  uint64_t seed;
  int32_t streams;
  int32_t supervised_streams;
  int32_t min_duration; /* shortest sentence duration accepted by the sampler */
} vtalign_synth_config;

VTALIGN_API void vtalign_synth_config_default(vtalign_synth_config* config);

/* Writes stream files plus out_dir/manifest.json. params may be
 * NULL for the synthetic defaults. */
VTALIGN_API vtalign_status vtalign_synthesize(const vtalign_synth_config* config,
                                              const vtalign_params* params,
                                              const char* out_dir);

/* Runs every grid point ("name=v1,v2,...", Cartesian product over axes) on
 * every dataset and writes a CSV of mean and standard error. threads == 0
 * uses the hardware concurrency. */
VTALIGN_API vtalign_status vtalign_sweep(const vtalign_problem* const* datasets,
                                         size_t n_datasets, const char* const* axes,
                                         size_t n_axes, vtalign_supervision supervision,
                                         unsigned threads, const char* out_csv);

#ifdef __cplusplus
}
#endif

#endif /* VTALIGN_H */
