/* Copyright 2026 The fwscale Authors
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

/* C interface to libfwscale. Every call returns an fws_status; on failure the
 * message is available from fws_last_error() on the same thread until the
 * next failing call. Matrices are dense column-major arrays of doubles. */

#ifndef FWSCALE_FWSCALE_H_
#define FWSCALE_FWSCALE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FWS_BUILDING_LIBRARY)
#define FWS_API __declspec(dllexport)
#else
#define FWS_API __declspec(dllimport)
#endif
#else
#define FWS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fws_status {
  FWS_OK = 0,
  FWS_ERR_PARAMETER = 1,
  FWS_ERR_INPUT = 2,
  FWS_ERR_CONVERGENCE = 3,
  FWS_ERR_CONDITIONING = 4,
  FWS_ERR_DEGENERATE = 5,
  FWS_ERR_IO = 6,
  FWS_ERR_NULL_ARGUMENT = 7,
  FWS_ERR_INTERNAL = 8
} fws_status;

FWS_API const char* fws_status_string(fws_status status);
FWS_API const char* fws_last_error(void);
FWS_API const char* fws_version(void);

/* ---- Completion instances ---------------------------------------------- */

typedef struct fws_instance fws_instance;

typedef struct fws_instance_info {
  size_t rows;
  size_t cols;
  int symmetric;
  size_t rank; /* 0 when the ground truth is unknown */
  size_t num_observed;
  int has_truth;
} fws_instance_info;

FWS_API fws_status fws_instance_create_symmetric(size_t n, size_t rank,
                                                 double noise_scale, double p,
                                                 uint64_t seed,
                                                 fws_instance** out);
FWS_API fws_status fws_instance_create_rectangular(size_t m, size_t n,
                                                   size_t rank,
                                                   double noise_scale, double p,
                                                   uint64_t seed,
                                                   fws_instance** out);
FWS_API fws_status fws_instance_load(const char* path, fws_instance** out);
FWS_API fws_status fws_instance_save(const fws_instance* inst,
                                     const char* path);
FWS_API fws_status fws_instance_info_get(const fws_instance* inst,
                                         fws_instance_info* info);
/* rel_obj and rel_err of a rows x cols point; needs the ground truth. */
FWS_API fws_status fws_instance_metrics(const fws_instance* inst,
                                        const double* x, double* rel_obj,
                                        double* rel_err);
FWS_API void fws_instance_free(fws_instance* inst);

/* ---- Oracles and spectral solvers --------------------------------------- */

/* Vertex -alpha*sign(g_i) e_i; writes its index, value and <g, vertex>. */
FWS_API fws_status fws_lmo_l1(const double* g, size_t n, double alpha,
                              size_t* index, double* value, double* inner);
/* Atom scale * u v^T over the nuclear ball (u: rows, v: cols). */
FWS_API fws_status fws_lmo_nuclear(const double* g, size_t rows, size_t cols,
                                   double alpha, double xi, uint64_t seed,
                                   double* scale, double* u, double* v,
                                   double* inner);
/* Atom scale * v v^T over the PSD part of the ball; scale is 0 when the
 * minimizer is the zero matrix. g must be symmetric. */
FWS_API fws_status fws_lmo_psd_nuclear(const double* g, size_t n, double alpha,
                                       double xi, uint64_t seed, double* scale,
                                       double* v, double* inner);

/* largest != 0 selects the largest eigenvalue, else the smallest. */
FWS_API fws_status fws_extreme_eigenpair(const double* a, size_t n, int largest,
                                         double xi, uint64_t seed,
                                         double* value, double* vec,
                                         double* residual);
FWS_API fws_status fws_top_singular_pair(const double* a, size_t rows,
                                         size_t cols, double xi, uint64_t seed,
                                         double* sigma, double* u, double* v);

/* ---- Sketches ----------------------------------------------------------- */

typedef struct fws_sketch fws_sketch;

FWS_API fws_status fws_sketch_create(size_t rows, size_t cols, size_t rank,
                                     uint64_t seed, fws_sketch** out);
FWS_API fws_status fws_sketch_update(fws_sketch* sketch, double beta1,
                                     double beta2, const double* u,
                                     const double* v);
/* Writes the rank-r reconstruction as a dense rows x cols matrix. */
FWS_API fws_status fws_sketch_reconstruct(const fws_sketch* sketch, size_t r,
                                          double* x);
FWS_API size_t fws_sketch_buffer_floats(const fws_sketch* sketch);
FWS_API void fws_sketch_free(fws_sketch* sketch);

/* ---- Experiments --------------------------------------------------------- */

typedef void (*fws_line_sink)(const char* line, void* ctx);

typedef struct fws_bench_options {
  const char* config_path; /* NULL: defaults for the subcommand */
  const char* out_path;    /* NULL: keep the config value */
  int has_seed;            /* nonzero: run this single seed */
  uint64_t seed;
  double time_budget_s; /* <= 0: keep the config value */
  uint64_t max_iters;   /* 0: keep the config value */
  int shadow;           /* nonzero: dense shadow checks (ssvrf) */
  fws_line_sink sink;   /* receives report and summary lines; may be NULL */
  void* sink_ctx;
} fws_bench_options;

FWS_API void fws_bench_options_init(fws_bench_options* options);

/* subcommand: complete-fw, svrf, ssvrf, lmo-bench or verify-bounds.
 * *all_passed is 0 when a check in the run failed. */
FWS_API fws_status fws_bench_run(const char* subcommand,
                                 const fws_bench_options* options,
                                 int* all_passed);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* FWSCALE_FWSCALE_H_ */
