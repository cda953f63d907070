/*  topostat
 *  ========
 *  Copyright (C) 2026 The topostat Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

#ifndef TOPOSTAT_TOPOSTAT_H
#define TOPOSTAT_TOPOSTAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(TOPOSTAT_BUILDING_LIBRARY)
#define TOPOSTAT_API __attribute__((visibility("default")))
#else
#define TOPOSTAT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. 1..7 mirror topostat::ErrorCode. */
typedef enum ts_status {
  TS_OK = 0,
  TS_INVALID_INPUT = 1,
  TS_INVALID_FILTRATION = 2,
  TS_DEGENERATE_VOLUME = 3,
  TS_INVALID_CAP = 4,
  TS_INVALID_PERSISTENCE = 5,
  TS_INVALID_LABELS = 6,
  TS_IO = 7,
  TS_INVALID_ARGUMENT = 8, /* null handle or out-pointer */
  TS_INTERNAL = 9
} ts_status;

/* Short kebab-case name, e.g. "invalid-cap". Never NULL. */
TOPOSTAT_API const char* ts_status_name(ts_status status);
/* Message of the last failure on the calling thread; empty after success. */
TOPOSTAT_API const char* ts_last_error(void);
TOPOSTAT_API const char* ts_version(void);

/* 0 restores the default (TOPOSTAT_THREADS or hardware concurrency). */
TOPOSTAT_API void ts_set_threads(size_t n);
TOPOSTAT_API size_t ts_get_threads(void);

/* Strings returned through char** are owned by the caller. */
TOPOSTAT_API void ts_string_free(char* s);

typedef struct ts_cloud ts_cloud;
typedef struct ts_volume ts_volume;
typedef struct ts_diagram ts_diagram;
typedef struct ts_image ts_image;
typedef struct ts_test_result ts_test_result;

/* ---- point clouds ---- */

TOPOSTAT_API ts_status ts_cloud_create(size_t dim, size_t n, const double* coords, ts_cloud** out);
TOPOSTAT_API ts_status ts_cloud_read_csv(const char* path, int skip_header, ts_cloud** out);
TOPOSTAT_API ts_status ts_cloud_write_csv(const ts_cloud* cloud, const char* path);
TOPOSTAT_API size_t ts_cloud_size(const ts_cloud* cloud);
TOPOSTAT_API size_t ts_cloud_dim(const ts_cloud* cloud);
/* Row-major, size() * dim() values; valid while the handle lives. */
TOPOSTAT_API const double* ts_cloud_coords(const ts_cloud* cloud);
TOPOSTAT_API void ts_cloud_free(ts_cloud* cloud);

/* Points on one circle (kind 0, radius r1) or two concentric circles
   (kind 1, radii r1 and r2), plus N(0, sigma^2) noise per coordinate. */
TOPOSTAT_API ts_status ts_sample_shape(int kind, double r1, double r2, size_t n, double sigma, uint64_t seed,
                                       ts_cloud** out);

/* ---- binary volumes ---- */

/* phase is x fastest; nonzero marks grain. */
TOPOSTAT_API ts_status ts_volume_create(size_t ndim, const size_t* extents, const uint8_t* phase,
                                        ts_volume** out);
/* .pgm (P5) or raw bytes with a <path>.json sidecar. */
TOPOSTAT_API ts_status ts_volume_read(const char* path, ts_volume** out);
TOPOSTAT_API ts_status ts_volume_write_pgm(const ts_volume* volume, const char* path);
TOPOSTAT_API ts_status ts_volume_write_raw(const ts_volume* volume, const char* path);
TOPOSTAT_API size_t ts_volume_ndim(const ts_volume* volume);
TOPOSTAT_API size_t ts_volume_extent(const ts_volume* volume, size_t axis);
TOPOSTAT_API const uint8_t* ts_volume_phase(const ts_volume* volume);
TOPOSTAT_API double ts_volume_porosity(const ts_volume* volume);
TOPOSTAT_API void ts_volume_free(ts_volume* volume);

typedef struct ts_rock_spec {
  size_t seeds;      /* M */
  size_t dispersion; /* S */
  double sigma1;
  double sigma2;
  double threshold;
  size_t width;
  size_t height;
} ts_rock_spec;

TOPOSTAT_API void ts_rock_spec_default(ts_rock_spec* spec);
TOPOSTAT_API ts_status ts_pseudo_rock(const ts_rock_spec* spec, uint64_t seed, ts_volume** out);

/* Signed distance transform, x fastest, into a caller buffer of
   volume-size doubles. */
TOPOSTAT_API ts_status ts_sedt(const ts_volume* volume, double* out);

/* ---- persistence diagrams ---- */

TOPOSTAT_API ts_status ts_diagram_create(size_t n, const int* dims, const double* births, const double* deaths,
                                         ts_diagram** out);
TOPOSTAT_API ts_status ts_diagram_read_csv(const char* path, ts_diagram** out);
TOPOSTAT_API ts_status ts_diagram_write_csv(const ts_diagram* diagram, const char* path);
TOPOSTAT_API size_t ts_diagram_size(const ts_diagram* diagram);
TOPOSTAT_API ts_status ts_diagram_get(const ts_diagram* diagram, size_t i, int* dim, double* birth, double* death);
TOPOSTAT_API void ts_diagram_free(ts_diagram* diagram);

/* Rips persistence up to dimension min(max_dim - 1, hom_dim). */
TOPOSTAT_API ts_status ts_rips_persistence(const ts_cloud* cloud, int max_dim, double max_scale, int hom_dim,
                                           ts_diagram** out);
/* Cubical persistence of the volume's signed distance transform. */
TOPOSTAT_API ts_status ts_volume_persistence(const ts_volume* volume, int hom_dim, ts_diagram** out);
/* Cubical persistence of a real-valued grid, x fastest. */
TOPOSTAT_API ts_status ts_grid_persistence(size_t ndim, const size_t* extents, const double* values, int hom_dim,
                                           ts_diagram** out);
TOPOSTAT_API ts_status ts_betti(const ts_diagram* diagram, int k, double t, int* out);

/* ---- vectorization ---- */

typedef enum ts_weight { TS_WEIGHT_CONSTANT = 0, TS_WEIGHT_SOFT_ARCTAN, TS_WEIGHT_HARD_ARCTAN, TS_WEIGHT_LINEAR } ts_weight;

typedef struct ts_grid {
  double b_min, b_max;
  double p_min, p_max;
  size_t nx, ny;
} ts_grid;

/* Accepts constant, soft_arctan, soft, hard_arctan, hard, linear. */
TOPOSTAT_API ts_status ts_weight_parse(const char* name, ts_weight* out);
TOPOSTAT_API const char* ts_weight_name(ts_weight weight);

/* Fit a grid around the transformed dim-`dim` points of every diagram. */
TOPOSTAT_API ts_status ts_grid_fit(const ts_diagram* const* diagrams, size_t count, int dim, double inf_cap,
                                   size_t nx, size_t ny, ts_grid* out);
/* Largest finite death (or birth) of dimension `dim` over the diagrams. */
TOPOSTAT_API ts_status ts_experiment_inf_cap(const ts_diagram* const* diagrams, size_t count, int dim,
                                             double* out);

/* h <= 0 selects 1.5 pixel widths. */
TOPOSTAT_API ts_status ts_persistence_image(const ts_diagram* diagram, int dim, const ts_grid* grid,
                                            ts_weight weight, double h, double inf_cap, ts_image** out);
TOPOSTAT_API ts_status ts_binning_image(const ts_diagram* diagram, int dim, const ts_grid* grid, double inf_cap,
                                        ts_image** out);
TOPOSTAT_API ts_status ts_image_read(const char* path, ts_image** out);
TOPOSTAT_API ts_status ts_image_write(const ts_image* image, const char* path);
TOPOSTAT_API ts_status ts_image_grid(const ts_image* image, ts_grid* out);
/* nx * ny values, x fastest, row j = 0 at the lowest persistence. */
TOPOSTAT_API const double* ts_image_values(const ts_image* image);
TOPOSTAT_API size_t ts_image_dropped(const ts_image* image);
TOPOSTAT_API int ts_image_dim(const ts_image* image);
/* Cap used for infinite deaths; +inf when unknown. */
TOPOSTAT_API double ts_image_inf_cap(const ts_image* image);
TOPOSTAT_API void ts_image_free(ts_image* image);

/* Min-max scaled P5 file, top row = highest persistence. */
TOPOSTAT_API ts_status ts_render_pgm(const double* values, size_t nx, size_t ny, const char* path);

/* ---- distances ---- */

typedef enum ts_metric { TS_METRIC_WASSERSTEIN = 0, TS_METRIC_BOTTLENECK = 1 } ts_metric;

TOPOSTAT_API ts_status ts_distance(const ts_diagram* a, const ts_diagram* b, int dim, ts_metric metric, double p,
                                   double* out);
/* count * count row-major matrix, computed in parallel. */
TOPOSTAT_API ts_status ts_distance_matrix(const ts_diagram* const* diagrams, size_t count, int dim,
                                          ts_metric metric, double p, double* out);

/* ---- inference ---- */

typedef enum ts_filter { TS_FILTER_MEAN = 0, TS_FILTER_SD = 1 } ts_filter;
typedef enum ts_adjust { TS_ADJUST_QVALUE = 0, TS_ADJUST_BH = 1 } ts_adjust;
typedef enum ts_element_status { TS_ELEMENT_MASKED = 0, TS_ELEMENT_FILTERED = 1, TS_ELEMENT_TESTED = 2 } ts_element_status;

typedef struct ts_filter_config {
  ts_filter filter;
  double threshold;  /* percentile C in [0, 100) */
  double corner_cap; /* +inf disables the corner mask */
  int welch;         /* nonzero selects Welch's test */
  ts_adjust adjust;
  double lambda;
} ts_filter_config;

TOPOSTAT_API void ts_filter_config_default(ts_filter_config* config);

/* labels are 1 or 2, one per image; images must share a grid. */
TOPOSTAT_API ts_status ts_two_stage(const ts_image* const* images, size_t count, const int* labels,
                                    const ts_filter_config* config, ts_test_result** out);
TOPOSTAT_API size_t ts_result_nx(const ts_test_result* result);
TOPOSTAT_API size_t ts_result_ny(const ts_test_result* result);
TOPOSTAT_API size_t ts_result_tested(const ts_test_result* result);
TOPOSTAT_API double ts_result_min_q(const ts_test_result* result);
TOPOSTAT_API double ts_result_pi0(const ts_test_result* result);
TOPOSTAT_API double ts_result_filter_cutoff(const ts_test_result* result);
TOPOSTAT_API size_t ts_result_rejections(const ts_test_result* result, double alpha);
TOPOSTAT_API ts_status ts_result_element(const ts_test_result* result, size_t i, size_t j,
                                         ts_element_status* status, double* filter_stat, double* t, double* p,
                                         double* q);
TOPOSTAT_API ts_status ts_result_write_csv(const ts_test_result* result, const char* path);
/* Per-element q-values (1 where untested), x fastest, into nx * ny doubles. */
TOPOSTAT_API ts_status ts_result_qvalues(const ts_test_result* result, double* out);
TOPOSTAT_API void ts_result_free(ts_test_result* result);

typedef struct ts_permutation_summary {
  double p;
  double unshuffled_loss;
  size_t shuffles; /* losses actually evaluated */
  int exhaustive;
} ts_permutation_summary;

/* losses may be NULL; otherwise it receives up to `shuffles` shuffled losses
   (summary.shuffles of them). */
TOPOSTAT_API ts_status ts_permutation_test(const ts_diagram* const* diagrams, size_t count, const int* labels,
                                           int dim, ts_metric metric, double p, size_t shuffles, uint64_t seed,
                                           ts_permutation_summary* out, double* losses);

TOPOSTAT_API ts_status ts_pooled_t(const double* x, size_t nx, const double* y, size_t ny, double* t, double* p);
TOPOSTAT_API ts_status ts_qvalues(const double* p, size_t m, double lambda, double* out);
TOPOSTAT_API ts_status ts_bh_adjust(const double* p, size_t m, double* out);

/* ---- experiments ----
   Both take a JSON configuration (missing keys use defaults) and return a
   JSON document holding the resolved configuration under "config" and the
   results. */

TOPOSTAT_API ts_status ts_power_experiment(const char* config_json, char** result_json);
TOPOSTAT_API ts_status ts_scenario_experiment(const char* config_json, char** result_json);

#ifdef __cplusplus
}
#endif

#endif /* TOPOSTAT_TOPOSTAT_H */
