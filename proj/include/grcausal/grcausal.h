/* C interface to the grcausal library.
 *
 * Every function returns a grc_status; on failure the thread's last error
 * message is available from grc_last_error(). Handles are opaque and owned by
 * the caller, who releases them with the matching *_free function. Matrices
 * are dense, row-major, d x d. */
#ifndef GRCAUSAL_H
#define GRCAUSAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GRC_BUILDING_LIBRARY)
#    define GRC_API __declspec(dllexport)
#  else
#    define GRC_API __declspec(dllimport)
#  endif
#else
#  define GRC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum grc_status {
  GRC_OK = 0,
  GRC_INVALID_ARGUMENT = 1,
  GRC_INSUFFICIENT_DATA = 2,
  GRC_DEGENERATE_INPUT = 3,
  GRC_DEGENERATE_TARGETS = 4,
  GRC_DEGENERATE_RESIDUALS = 5,
  GRC_NUMERICAL_ERROR = 6,
  GRC_TIES_ERROR = 7,
  GRC_DOMAIN_ERROR = 8,
  GRC_RESOURCE_LIMIT = 9,
  GRC_PARSE_ERROR = 10,
  GRC_IO_ERROR = 11,
  GRC_OUT_OF_MEMORY = 12,
  GRC_INTERNAL_ERROR = 13
} grc_status;

typedef enum grc_method { GRC_GRAN = 0, GRC_GRAN_STAR = 1, GRC_GRK4 = 2, GRC_GRENT = 3 } grc_method;
typedef enum grc_direction { GRC_X_CAUSES_Y = 0, GRC_Y_CAUSES_X = 1 } grc_direction;
typedef enum grc_mechanism { GRC_M1 = 0, GRC_M2 = 1, GRC_M3 = 2, GRC_M4 = 3 } grc_mechanism;
typedef enum grc_cause { GRC_P1 = 0, GRC_P2 = 1, GRC_P3 = 2 } grc_cause;
typedef enum grc_noise {
  GRC_NOISE_GENERALIZED_GAUSSIAN = 0,
  GRC_NOISE_LAPLACE = 1,
  GRC_NOISE_GAUSSIAN = 2,
  GRC_NOISE_BIMODAL = 3
} grc_noise;

GRC_API const char* grc_version(void);
GRC_API const char* grc_status_name(grc_status status);
/* Message of the last failed call on this thread, "" if none. */
GRC_API const char* grc_last_error(void);

/* Names accepted by the parsers: gran, gran-star, grk4, grent; M1..M4;
 * p1..p3; gg, laplace, gauss, bimodal. */
GRC_API grc_status grc_method_parse(const char* name, grc_method* out);
GRC_API const char* grc_method_name(grc_method method);
GRC_API const char* grc_direction_name(grc_direction direction);
GRC_API grc_status grc_mechanism_parse(const char* name, grc_mechanism* out);
GRC_API grc_status grc_cause_parse(const char* name, grc_cause* out);
GRC_API grc_status grc_noise_parse(const char* name, grc_noise* out);
GRC_API const char* grc_mechanism_name(grc_mechanism m);
GRC_API const char* grc_cause_name(grc_cause c);
GRC_API const char* grc_noise_name(grc_noise e);

/* ---- paired samples ---- */

typedef struct grc_pair grc_pair;

GRC_API grc_status grc_pair_create(const double* x, const double* y, size_t n, grc_pair** out);
/* Two whitespace-separated columns; '#' lines skipped; at least 20 rows. */
GRC_API grc_status grc_pair_load(const char* path, grc_pair** out);
GRC_API grc_status grc_pair_save(const grc_pair* pair, const char* path);
GRC_API void grc_pair_free(grc_pair* pair);
GRC_API size_t grc_pair_size(const grc_pair* pair);
GRC_API const double* grc_pair_x(const grc_pair* pair);
GRC_API const double* grc_pair_y(const grc_pair* pair);
GRC_API double grc_pair_tie_fraction_x(const grc_pair* pair);
GRC_API double grc_pair_tie_fraction_y(const grc_pair* pair);
/* Load-time warnings (excess ties). */
GRC_API size_t grc_pair_warning_count(const grc_pair* pair);
GRC_API const char* grc_pair_warning(const grc_pair* pair, size_t index);

/* ---- inference configuration ---- */

typedef struct grc_config grc_config;

/* Defaults: GR-AN, 10-point grids, 10 folds, seed 0. */
GRC_API grc_status grc_config_create(grc_config** out);
GRC_API void grc_config_free(grc_config* cfg);
GRC_API grc_status grc_config_set_method(grc_config* cfg, grc_method method);
GRC_API grc_status grc_config_set_grid_size(grc_config* cfg, size_t grid_size);
GRC_API grc_status grc_config_set_folds(grc_config* cfg, size_t folds);
GRC_API grc_status grc_config_set_seed(grc_config* cfg, uint64_t seed);
/* Absolute grids; pass count 0 to return to the data-driven default. */
GRC_API grc_status grc_config_set_gamma_grid(grc_config* cfg, const double* values, size_t count);
GRC_API grc_status grc_config_set_tau_grid(grc_config* cfg, const double* values, size_t count);
GRC_API grc_status grc_config_set_entropy_neighbors(grc_config* cfg, size_t k);
GRC_API grc_status grc_config_set_tie_threshold(grc_config* cfg, double fraction);

/* Fits are ordered x~ -> y, y -> x~, y~ -> x, x -> y~. */
typedef struct grc_decision {
  grc_direction direction;
  double confidence;
  double g_xtilde;
  double g_ytilde;
  double stats[4];
  double gamma[4];
  double tau[4];
} grc_decision;

GRC_API grc_status grc_infer(const grc_pair* pair, const grc_config* cfg, grc_decision* out);

/* ---- Gaussianity scores ---- */

GRC_API grc_status grc_energy_statistic(const double* z, size_t n, double* out);
GRC_API grc_status grc_kurtosis_score(const double* z, size_t n, double* out);
GRC_API grc_status grc_knn_entropy(const double* z, size_t n, size_t k, double* out);

/* ---- synthetic benchmark ---- */

typedef struct grc_synth_spec {
  grc_mechanism mechanism;
  grc_cause cause;
  grc_noise noise;
  size_t n;
  uint64_t seed;
} grc_synth_spec;

/* x is the cause. */
GRC_API grc_status grc_synth_generate(const grc_synth_spec* spec, grc_pair** out);

typedef struct grc_bench_result {
  size_t repetitions;
  size_t decided;
  size_t correct;
  size_t undecided;
  double accuracy; /* correct / decided */
} grc_bench_result;

/* Optional per-repetition outputs (NULL to skip), each of length
 * repetitions: decided flag, correct flag, confidence. Repetition r uses
 * seed spec->seed ^ r for the data and the folds. */
GRC_API grc_status grc_bench_run(const grc_synth_spec* spec, size_t repetitions, const grc_config* cfg,
                                 grc_bench_result* out, int* decided, int* correct, double* confidence);

typedef struct grc_diagnostics grc_diagnostics;
typedef enum grc_side { GRC_CAUSAL = 0, GRC_ANTICAUSAL = 1 } grc_side;

/* Residual diagnostics for x~ -> y (causal) and y -> x~ (anti-causal). */
GRC_API grc_status grc_diagnose(const grc_synth_spec* spec, const grc_config* cfg, size_t grid_points,
                                size_t histogram_bins, grc_diagnostics** out);
GRC_API void grc_diagnostics_free(grc_diagnostics* d);
GRC_API double grc_diagnostics_energy(const grc_diagnostics* d, grc_side side);
GRC_API void grc_diagnostics_hyper(const grc_diagnostics* d, grc_side side, double* gamma, double* tau);
GRC_API void grc_diagnostics_fit(const grc_diagnostics* d, grc_side side, double* mean, double* sd);
GRC_API const double* grc_diagnostics_component(const grc_diagnostics* d, grc_side side, size_t* length);
/* edges has bins + 1 entries. */
GRC_API void grc_diagnostics_histogram(const grc_diagnostics* d, grc_side side, size_t* bins,
                                       const double** edges, const double** density);
GRC_API void grc_diagnostics_preimages(const grc_diagnostics* d, grc_side side, size_t* length,
                                       const double** grid, const double** values);

/* ---- cumulant asymmetry lab ---- */

GRC_API grc_status grc_cumulant_factor(double w, int n, double* out);
GRC_API grc_status grc_mn_op_norm(const double* a, size_t d, int n, double* out);
/* Writes the d^n x d^n matrix M_n row-major into m, which must hold
 * capacity >= d^(2n) doubles; *dim receives d^n. */
GRC_API grc_status grc_mn_matrix(const double* a, size_t d, int n, double* m, size_t capacity, size_t* dim);
GRC_API grc_status grc_symmetric_op_norm(const double* eigenvalues, size_t d, int n, double* out);
GRC_API grc_status grc_determinant_check(const double* a, size_t d, double* det_aat, double* det_ata);
GRC_API grc_status grc_second_cumulant_ratio(const double* a, size_t d, double* out);
GRC_API grc_status grc_hermite_moments(double* h2, double* h3);
GRC_API grc_status grc_gram_charlier_energy(double kappa3, double kappa4, double* out);
GRC_API grc_status grc_projection_check(const double* a, size_t d, int n, double* c, double* residual,
                                        int* degenerate_top);
GRC_API grc_status grc_random_mixing_matrix(const double* singular_values, size_t d, uint64_t seed, double* out);
GRC_API grc_status grc_random_symmetric_matrix(const double* eigenvalues, size_t d, uint64_t seed, double* out);

/* ---- decision-rate curve ---- */

/* Sorts by confidence (descending, stable) and writes n points. */
GRC_API grc_status grc_decision_rate_curve(const int* correct, const double* confidence, size_t n,
                                           double* thresholds, double* decision_fraction, double* accuracy);

#ifdef __cplusplus
}
#endif

#endif
