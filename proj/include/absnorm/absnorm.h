#ifndef ABSNORM_H
#define ABSNORM_H

/* C interface of the absnorm library. Every handle is opaque and owned by
 * the caller once returned; release it with the matching *_free function.
 * Functions return ABSNORM_OK or an error status; absnorm_last_error() then
 * holds a message for the calling thread. Output arguments are untouched on
 * failure unless stated otherwise. */

#include <stddef.h>

#if defined(_WIN32)
#define ABSNORM_API __declspec(dllexport)
#else
#define ABSNORM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum absnorm_status {
  ABSNORM_OK = 0,
  ABSNORM_E_INVALID_ARGUMENT = 1,
  ABSNORM_E_INVALID_NORM = 2,
  ABSNORM_E_PARSE = 3,
  ABSNORM_E_DIMENSION_MISMATCH = 4,
  ABSNORM_E_INFINITY_NORM_EXCLUDED = 5,
  ABSNORM_E_RESOLUTION_EXHAUSTED = 6,
  ABSNORM_E_CERTIFICATION_UNAVAILABLE = 7,
  ABSNORM_E_EMPTY_SAMPLE = 8,
  ABSNORM_E_SINGULAR_MATRIX = 9,
  ABSNORM_E_INCONSISTENCY = 10,
  ABSNORM_E_NO_QUALIFYING_SAMPLES = 11,
  ABSNORM_E_IO = 12,
  ABSNORM_E_INTERNAL = 99
} absnorm_status;

typedef struct absnorm_norm absnorm_norm;
typedef struct absnorm_space absnorm_space;
typedef struct absnorm_map absnorm_map;
typedef struct absnorm_text absnorm_text;

typedef struct absnorm_interval {
  double lo;
  double hi;
} absnorm_interval;

ABSNORM_API const char* absnorm_version(void);
ABSNORM_API const char* absnorm_status_name(absnorm_status status);
ABSNORM_API const char* absnorm_last_error(void);

/* Text results (JSON reports, CSV). */
ABSNORM_API const char* absnorm_text_data(const absnorm_text* text);
ABSNORM_API size_t absnorm_text_size(const absnorm_text* text);
ABSNORM_API void absnorm_text_free(absnorm_text* text);

/* Absolute normalised norms on R^2. p may be INFINITY. */
ABSNORM_API absnorm_status absnorm_norm_parse(const char* json, absnorm_norm** out);
ABSNORM_API absnorm_status absnorm_norm_load(const char* path, absnorm_norm** out);
ABSNORM_API absnorm_status absnorm_norm_p(double p, absnorm_norm** out);
ABSNORM_API absnorm_status absnorm_norm_polygon(const double* vertices, size_t count,
                                                absnorm_norm** out);
ABSNORM_API void absnorm_norm_free(absnorm_norm* norm);
ABSNORM_API absnorm_status absnorm_norm_spec(const absnorm_norm* norm, absnorm_text** out);
ABSNORM_API absnorm_status absnorm_norm_eval(const absnorm_norm* norm, double a, double b,
                                             double* out);
ABSNORM_API absnorm_status absnorm_boundary(const absnorm_norm* norm, double t, double tol,
                                            double* out);
ABSNORM_API absnorm_status absnorm_r(const absnorm_norm* norm, double tol, double* out);
ABSNORM_API absnorm_status absnorm_dual(const absnorm_norm* norm, int resolution,
                                        absnorm_norm** out);
ABSNORM_API absnorm_status absnorm_lasq2_modulus(const absnorm_norm* norm, double eps,
                                                 double* out);
ABSNORM_API absnorm_status absnorm_loh3_modulus(const absnorm_norm* norm, double eps,
                                                double* out);
/* "t,f" CSV with n+1 rows, 12 significant digits. */
ABSNORM_API absnorm_status absnorm_curve_csv(const absnorm_norm* norm, int n,
                                             absnorm_text** out);

/* Finite-dimensional spaces. */
ABSNORM_API absnorm_status absnorm_space_parse(const char* json, absnorm_space** out);
ABSNORM_API absnorm_status absnorm_space_load(const char* path, absnorm_space** out);
ABSNORM_API absnorm_status absnorm_space_p(double p, int dim, absnorm_space** out);
ABSNORM_API absnorm_status absnorm_space_sum(const absnorm_space* left,
                                             const absnorm_space* right,
                                             const absnorm_norm* F, absnorm_space** out);
ABSNORM_API void absnorm_space_free(absnorm_space* space);
ABSNORM_API int absnorm_space_dim(const absnorm_space* space);
ABSNORM_API absnorm_status absnorm_space_norm(const absnorm_space* space, const double* x,
                                              size_t n, double* out);
/* Certified brackets. resolution 0 and gap 0 select the defaults. Above
 * dimension 4 the estimate is written and ABSNORM_E_CERTIFICATION_UNAVAILABLE
 * returned. margin may be NULL. */
ABSNORM_API absnorm_status absnorm_s_modulus(const absnorm_space* space, long resolution,
                                             double gap, absnorm_interval* out,
                                             double* margin);
ABSNORM_API absnorm_status absnorm_lasq_defect(const absnorm_space* space, long resolution,
                                               double gap, absnorm_interval* out,
                                               double* margin);

/* Invertible linear maps, row-major. */
ABSNORM_API absnorm_status absnorm_map_create(int dim, const double* entries,
                                              absnorm_map** out);
ABSNORM_API void absnorm_map_free(absnorm_map* map);
ABSNORM_API absnorm_status absnorm_operator_norm(const absnorm_map* map,
                                                 const absnorm_space* from,
                                                 const absnorm_space* to, long resolution,
                                                 absnorm_interval* out);
/* Upper bound on the Banach-Mazur distance; best_map (dim*dim entries) may be NULL. */
ABSNORM_API absnorm_status absnorm_bm_upper(const absnorm_space* X, const absnorm_space* Y,
                                            int restarts, long resolution, double* out,
                                            double* best_map);

/* JSON request {"verb", "claim", "inputs", "parameters"}; relative input
 * paths resolve against base_dir (NULL = "."). Computation errors are
 * reported inside the returned report, not as a status. */
ABSNORM_API absnorm_status absnorm_execute(const char* request_json, const char* base_dir,
                                           absnorm_text** report);

/* Runs a manifest. output_dir and tol may be NULL (manifest values). On
 * ABSNORM_OK, *failed is the number of failed or erroring checks and
 * *summary the summary JSON. Manifest problems are returned as errors before
 * anything runs. */
ABSNORM_API absnorm_status absnorm_suite_run(const char* manifest_path, const char* output_dir,
                                             const double* tol, absnorm_text** summary,
                                             int* failed);

#ifdef __cplusplus
}
#endif

#endif
