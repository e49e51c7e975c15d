#ifndef STRATA_STRATA_H
#define STRATA_STRATA_H

/* C interface of libstrata. Objects are opaque handles released with their *_free
 * function. Every fallible call returns a strata_status_t; on failure the message is
 * available from strata_last_error() in the calling thread. Strings returned through
 * char** are heap-allocated and released with strata_string_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define STRATA_API __declspec(dllexport)
#else
#define STRATA_API __attribute__((visibility("default")))
#endif

typedef enum strata_status {
  STRATA_OK = 0,
  STRATA_E_DEGENERATE_INPUT = 1,
  STRATA_E_ROOT_FINDING = 2,
  STRATA_E_PATH_THROUGH_SINGULARITY = 3,
  STRATA_E_QUADRATURE = 4,
  STRATA_E_STEP = 5,
  STRATA_E_AMBIGUOUS_DIRECTION = 6,
  STRATA_E_STRUCTURE_AMBIGUOUS = 7,
  STRATA_E_GENERAL_POSITION = 8,
  STRATA_E_INCONSISTENT_DIAGRAM = 9,
  STRATA_E_BUDGET = 10,
  STRATA_E_INVALID_DIAGONAL = 11,
  STRATA_E_OVERFLOW = 12,
  STRATA_E_NOT_REPRESENTABLE = 13,
  STRATA_E_ARRANGEMENT = 14,
  STRATA_E_NO_SIGN_CHANGE = 15,
  STRATA_E_PRECONDITION = 16,
  STRATA_E_INVALID_ARGUMENT = 17,
  STRATA_E_IO = 18,
  STRATA_E_INTERNAL = 99
} strata_status_t;

typedef enum strata_orientation { STRATA_HORIZONTAL = 0, STRATA_VERTICAL = 1 } strata_orientation_t;

typedef struct strata_qd strata_qd_t;
typedef struct strata_structure strata_structure_t;
typedef struct strata_graph strata_graph_t;
typedef struct strata_extended strata_extended_t;
typedef struct strata_wallmap strata_wallmap_t;

typedef struct strata_config {
  double step_tolerance;
  double capture_tolerance;
  double wall_tolerance;
  long max_steps;
  long quadrature_evaluations;
} strata_config_t;

STRATA_API const char* strata_version(void);
STRATA_API const char* strata_last_error(void);
STRATA_API const char* strata_status_name(strata_status_t status);
/* Nonzero for errors caused by the input rather than by the numerics. */
STRATA_API int strata_status_is_input_error(strata_status_t status);
STRATA_API void strata_string_free(char* s);
STRATA_API void strata_buffer_free(unsigned char* data);

STRATA_API void strata_config_default(strata_config_t* config);
/* STRATA_E_INVALID_ARGUMENT unless every tolerance and budget is positive. */
STRATA_API strata_status_t strata_config_validate(const strata_config_t* config);

/* Differentials. coeffs holds k (re, im) pairs a_0 .. a_{k-1}. */
STRATA_API strata_status_t strata_qd_create(int k, const double* coeffs, strata_qd_t** out);
/* Monic polynomial differential of the given degree, coefficients as above. */
STRATA_API strata_status_t strata_qd_create_polynomial(int degree, const double* coeffs, strata_qd_t** out);
STRATA_API void strata_qd_free(strata_qd_t* q);
/* Writes up to `capacity` zeros as (re, im) pairs; *count receives the total. */
STRATA_API strata_status_t strata_qd_zeros(const strata_qd_t* q, double* out, int capacity, int* count);
/* Integral of sqrt(q) along a polyline of n (re, im) points; hint fixes the branch. */
STRATA_API strata_status_t strata_qd_period(const strata_qd_t* q, const double* points, int n, double hint_re,
                                            double hint_im, const strata_config_t* config, double out[2]);
STRATA_API strata_status_t strata_qd_json(const strata_qd_t* q, char** out);

/* Trajectory structures. config may be NULL for defaults. */
STRATA_API strata_status_t strata_trace(const strata_qd_t* q, strata_orientation_t o, const strata_config_t* config,
                                        strata_structure_t** out);
STRATA_API void strata_structure_free(strata_structure_t* s);
STRATA_API strata_status_t strata_structure_counts(const strata_structure_t* s, int* sectors, int* half_planes,
                                                   int* strips, int* shorts, int* pole_connections);
STRATA_API strata_status_t strata_structure_json(const strata_structure_t* s, char** out);
STRATA_API strata_status_t strata_structure_svg(const strata_structure_t* s, char** out);
/* Number of zero-to-zero connections at capture tolerance tol. */
STRATA_API strata_status_t strata_find_short(const strata_qd_t* q, strata_orientation_t o, double tol,
                                             const strata_config_t* config, int* count);

/* Admissible graphs and chord diagrams. */
STRATA_API strata_status_t strata_graph_build(const strata_structure_t* s, strata_graph_t** out);
STRATA_API strata_status_t strata_graph_from_json(const char* json, strata_graph_t** out);
STRATA_API void strata_graph_free(strata_graph_t* g);
STRATA_API strata_status_t strata_graph_json(const strata_graph_t* g, char** out);
/* *admissible is 1 or 0; reason (may be NULL) receives the first violation. */
STRATA_API strata_status_t strata_graph_check(const strata_graph_t* g, int* admissible, char** reason);
STRATA_API strata_status_t strata_graph_has_short(const strata_graph_t* g, int* has_short);
STRATA_API strata_status_t strata_graph_signature(const strata_graph_t* g, char** out);
/* Γ as JSON, including "has_short" and "signature". */
STRATA_API strata_status_t strata_gamma_json(const strata_graph_t* g, char** out);

/* Merged and extended graph from the horizontal and vertical graphs. */
STRATA_API strata_status_t strata_extended_build(const strata_graph_t* gh, const strata_graph_t* gv,
                                                 strata_extended_t** out);
STRATA_API void strata_extended_free(strata_extended_t* g);
STRATA_API strata_status_t strata_extended_json(const strata_extended_t* g, char** out);
STRATA_API strata_status_t strata_extended_svg(const strata_extended_t* g, char** out);

/* Combinatorics. n is the associahedron index: polygons have n + 1 vertices. */
STRATA_API strata_status_t strata_triangulation_count(int n, uint64_t* count);
/* Triangulations as a JSON list of diagonal lists. */
STRATA_API strata_status_t strata_triangulations_json(int n, char** out);
/* Number of edges of the flip graph. */
STRATA_API strata_status_t strata_flip_graph_edges(int n, uint64_t* edges);
/* Fan face of a balanced weight with `count` = n + 1 values; STRATA_E_INVALID_ARGUMENT
 * when the balance constraints are violated beyond 1e-9. JSON carries "degenerate". */
STRATA_API strata_status_t strata_fan_face_json(const double* values, int count, char** out);
STRATA_API strata_status_t strata_weight_to_diagram_json(const double* values, int count, char** out);
STRATA_API strata_status_t strata_diagram_to_weight_json(const char* diagram_json, char** out);
/* Random balanced weight (degenerate != 0: on a wall of the fan) from a seed. */
STRATA_API strata_status_t strata_random_weight(int n_plus_1, uint64_t seed, int degenerate, double* values);

/* Slice scans. spec_text uses the key = value slice format. threads <= 0 keeps the
 * spec's setting. config may be NULL. */
STRATA_API strata_status_t strata_scan(const char* spec_text, int threads, const strata_config_t* config,
                                       strata_wallmap_t** out);
STRATA_API void strata_wallmap_free(strata_wallmap_t* m);
STRATA_API strata_status_t strata_wallmap_counts(const strata_wallmap_t* m, int* cells, int* signatures,
                                                 int* short_walls, int* pole_zero_walls, int* unresolved,
                                                 int* failed_cells);
STRATA_API strata_status_t strata_wallmap_csv(const strata_wallmap_t* m, char** out);
STRATA_API strata_status_t strata_wallmap_walls_json(const strata_wallmap_t* m, char** out);
STRATA_API strata_status_t strata_wallmap_ppm(const strata_wallmap_t* m, int cell, unsigned char** data, size_t* size);

#ifdef __cplusplus
}
#endif

#endif
