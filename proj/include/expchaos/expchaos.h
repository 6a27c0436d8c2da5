#ifndef EXPCHAOS_H
#define EXPCHAOS_H

#include <stddef.h>
#include <stdint.h>

#if defined(EXPCHAOS_BUILDING)
#define EC_API __attribute__((visibility("default")))
#else
#define EC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Nonzero values mirror expchaos::ErrorCode. */
typedef enum ec_status {
  EC_OK = 0,
  EC_INVALID_ARGUMENT = 1,
  EC_OVERFLOW,
  EC_ZERO_ARGUMENT,
  EC_ON_CUT,
  EC_DISC_CONTAINS_ORIGIN,
  EC_ANCHOR_MISMATCH,
  EC_OUTSIDE_DOMAIN,
  EC_PARAMETER_OUTSIDE_DISC,
  EC_DISC_TOUCHES_ORIGIN,
  EC_ORBIT_MISMATCH,
  EC_EMPTY_K,
  EC_ZERO_IN_K,
  EC_TARGET_ZERO,
  EC_CENTER_TOO_FAR_LEFT,
  EC_NOT_FOUND,
  EC_IO,
  EC_PARSE,
  EC_INTERNAL = 100
} ec_status;

typedef struct ec_complex {
  double re, im;
} ec_complex;

typedef struct ec_disc {
  ec_complex center;
  double radius;
} ec_disc;

/* Message for the last failing call on this thread; "" after success. */
EC_API const char* ec_last_error(void);
EC_API const char* ec_status_name(ec_status s);

/* Strings handed out by the library are released with ec_string_free. */
EC_API void ec_string_free(char* s);

EC_API ec_status ec_exp_map(ec_complex z, ec_complex* out);

/* ---- orbits ---- */

typedef enum ec_orbit_class {
  EC_ESCAPING_CERTIFIED = 0,
  EC_ESCAPING_HEURISTIC,
  EC_PERIODIC_DETECTED,
  EC_UNRESOLVED,
  EC_OVERFLOWED
} ec_orbit_class;

typedef struct ec_classify_params {
  double escape_re_threshold; /* 50 */
  int k_consec;               /* 3 */
  double tol_axis;            /* 1e-10 */
  double periodic_tol;        /* 1e-9 */
  int period_scan_limit;      /* 64 */
} ec_classify_params;

typedef struct ec_classification {
  ec_orbit_class kind;
  int period;
  int at_step;
} ec_classification;

typedef struct ec_orbit ec_orbit;

EC_API void ec_classify_params_default(ec_classify_params* p);
EC_API const char* ec_orbit_class_name(ec_orbit_class c);

/* params may be NULL for defaults. */
EC_API ec_status ec_orbit_iterate(ec_complex z0, int max_steps, const ec_classify_params* params,
                                  ec_orbit** out);
EC_API void ec_orbit_free(ec_orbit* o);
EC_API size_t ec_orbit_length(const ec_orbit* o);
EC_API ec_status ec_orbit_point(const ec_orbit* o, size_t k, ec_complex* out);
EC_API ec_status ec_orbit_shadow(const ec_orbit* o, size_t k, double* log_mod, double* arg);
EC_API ec_status ec_orbit_classification(const ec_orbit* o, ec_classification* out);
EC_API ec_status ec_orbit_csv(const ec_orbit* o, char** out);
EC_API ec_status ec_orbit_json(const ec_orbit* o, char** out);
/* log|(f^n)'(z0)| along the recorded points; *value_ok is 0 when the product is not representable. */
EC_API ec_status ec_orbit_multiplier(const ec_orbit* o, double* log_modulus, ec_complex* value,
                                     int* value_ok);

/* ---- hyperbolic metric ---- */

/* domain: "UnitDisc", "RightHalfPlane", "StripPi", "SlitPlanePos", "SlitPlaneNeg"
   (or unit-disc, right-half-plane, strip, slit-pos, slit-neg) */
EC_API ec_status ec_density(const char* domain, ec_complex z, double* out);
EC_API ec_status ec_expansion_u(ec_complex zeta, double* out);
EC_API ec_status ec_expansion_slitneg(ec_complex zeta, double* out);

/* Height that keeps the f^-2 branch for target v well defined. */
EC_API ec_status ec_rho_for_target(ec_complex v, double* out);

/* ---- witnesses ---- */

typedef struct ec_report ec_report;

#define EC_DEFAULT_SEED 20240917u

EC_API ec_status ec_find_escaping_point(ec_disc u, double t_star, int m_max, ec_report** out);
EC_API ec_status ec_transitivity_witness(ec_disc u, ec_complex v, int n_min, uint64_t seed,
                                         ec_report** out);
EC_API ec_status ec_find_periodic(ec_disc u, uint64_t seed, ec_report** out);
EC_API ec_status ec_sensitivity_witness(ec_disc u, double s, uint64_t seed, ec_report** out);

EC_API ec_status ec_report_from_json(const char* text, ec_report** out);
EC_API void ec_report_free(ec_report* r);
EC_API ec_status ec_report_json(const ec_report* r, char** out);
/* Keys of the report's outputs object, e.g. "period" or "point". */
EC_API ec_status ec_report_output_number(const ec_report* r, const char* key, double* out);
EC_API ec_status ec_report_output_complex(const ec_report* r, const char* key, ec_complex* out);
/* *ok is 1 when every replay check passes; failures (JSON array of strings) may be NULL. */
EC_API ec_status ec_report_verify(const ec_report* r, int* ok, char** failures);

/* ---- rendering ---- */

typedef struct ec_grid {
  double re_min, re_max, im_min, im_max;
  int width, height;
} ec_grid;

typedef enum ec_palette { EC_PALETTE_GRAYSCALE = 0, EC_PALETTE_CLASSIFICATION = 1 } ec_palette;

typedef struct ec_render_params {
  int max_steps;              /* 40 */
  double escape_re_threshold; /* 50 */
  ec_palette palette;
  int threads; /* 1 */
} ec_render_params;

typedef struct ec_image ec_image;

EC_API void ec_render_params_default(ec_render_params* p);
EC_API ec_status ec_render_escape(const ec_grid* grid, const ec_render_params* params,
                                  ec_image** out);
EC_API ec_status ec_render_density(const char* domain, const ec_grid* grid, int threads,
                                   ec_image** out);
EC_API void ec_image_free(ec_image* img);
EC_API ec_status ec_image_size(const ec_image* img, int* width, int* height);
/* RGB bytes, row-major; owned by the image. */
EC_API const uint8_t* ec_image_pixels(const ec_image* img);
EC_API ec_status ec_image_ppm(const ec_image* img, char** bytes, size_t* len);
EC_API ec_status ec_image_write_ppm(const ec_image* img, const char* path);
/* FNV-1a of the PPM bytes, 16 hex digits plus NUL. */
EC_API ec_status ec_image_hash(const ec_image* img, char out[17]);

#ifdef __cplusplus
}
#endif

#endif
