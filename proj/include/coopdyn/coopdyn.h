/* C interface to the coopdyn library. */
#ifndef COOPDYN_H
#define COOPDYN_H

#include <stddef.h>
#include <stdint.h>

#if defined(COOPDYN_BUILDING_LIBRARY)
#define COOPDYN_API __attribute__((visibility("default")))
#else
#define COOPDYN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum coopdyn_status {
  COOPDYN_OK = 0,
  COOPDYN_INVALID_ARGUMENT = 1,
  COOPDYN_NON_CONVERGENCE = 2,
  COOPDYN_UNSUPPORTED = 3,
  COOPDYN_IO = 4,
  COOPDYN_SCHEMA = 5,
  COOPDYN_OVERFLOW = 6,
  COOPDYN_INTERNAL = 99
} coopdyn_status;

typedef struct coopdyn_measure coopdyn_measure;
typedef struct coopdyn_grid_function coopdyn_grid_function;

/* Points on the sphere: is_infinity nonzero means the point at infinity and
   re/im are ignored. */
typedef struct coopdyn_point {
  double re, im;
  int is_infinity;
} coopdyn_point;

typedef struct coopdyn_grid {
  double center_re, center_im;
  double half_width;
  int resolution;
} coopdyn_grid;

COOPDYN_API const char* coopdyn_version(void);
/* Message of the last failed call on this thread; "" if none. */
COOPDYN_API const char* coopdyn_last_error(void);

/* Map k has numerator coefficients num[num_offsets[k] .. num_offsets[k+1])
   as interleaved (re, im) pairs ascending by degree; likewise den. A map
   whose den range is empty is a polynomial. Offsets count complex
   coefficients. */
COOPDYN_API coopdyn_status coopdyn_measure_create(size_t n_maps, const double* num, const size_t* num_offsets,
                                                  const double* den, const size_t* den_offsets,
                                                  const double* weights, coopdyn_measure** out);
/* Same, from a scenario-style JSON document {"maps": [...], "weights": [...]}. */
COOPDYN_API coopdyn_status coopdyn_measure_from_json(const char* json, coopdyn_measure** out);
COOPDYN_API void coopdyn_measure_destroy(coopdyn_measure* m);
COOPDYN_API size_t coopdyn_measure_size(const coopdyn_measure* m);
/* Escape radius of an all-polynomial system; COOPDYN_UNSUPPORTED otherwise. */
COOPDYN_API coopdyn_status coopdyn_measure_escape_radius(const coopdyn_measure* m, double* out);
COOPDYN_API coopdyn_status coopdyn_measure_eval(const coopdyn_measure* m, size_t generator, coopdyn_point z,
                                                coopdyn_point* out);

COOPDYN_API double coopdyn_chordal_distance(coopdyn_point p, coopdyn_point q);

/* Monte Carlo probability that the orbit of z tends to infinity (polynomial
   systems). */
COOPDYN_API coopdyn_status coopdyn_estimate_T_infinity(const coopdyn_measure* m, coopdyn_point z, size_t n_samples,
                                                       size_t n_steps, uint64_t seed, double* estimate,
                                                       double* std_error);

/* Discovers the attracting minimal sets, labels the grid and solves for
   T_infinity on it. */
COOPDYN_API coopdyn_status coopdyn_solve_T_infinity(const coopdyn_measure* m, coopdyn_grid grid, int classify_depth,
                                                    int classify_words, double tol, int max_iter, uint64_t seed,
                                                    coopdyn_grid_function** out);
COOPDYN_API void coopdyn_grid_function_destroy(coopdyn_grid_function* f);
COOPDYN_API coopdyn_grid coopdyn_grid_function_geometry(const coopdyn_grid_function* f);
/* Node values, row-major with row j holding imaginary offset -hw + j*step. */
COOPDYN_API const double* coopdyn_grid_function_values(const coopdyn_grid_function* f);
COOPDYN_API double coopdyn_grid_function_sample(const coopdyn_grid_function* f, coopdyn_point z);
COOPDYN_API double coopdyn_grid_function_residual(const coopdyn_grid_function* f);

COOPDYN_API coopdyn_status coopdyn_lebesgue_singular(double a, double x, int depth, double* out);
COOPDYN_API double coopdyn_takagi_classic(double x, int n_terms);
COOPDYN_API coopdyn_status coopdyn_devils_staircase(double x, int depth, double* out);

/* Runs a CLI command. exit_code receives 0, 1 or 2 as the CLI would return;
   the status reflects whether the command ran at all. */
COOPDYN_API coopdyn_status coopdyn_run_command(const char* name, const char* scenario_path, const char* out_dir,
                                               int has_seed, uint64_t seed, int* exit_code);
/* NULL-terminated list of command names. */
COOPDYN_API const char* const* coopdyn_command_names(void);

#ifdef __cplusplus
}
#endif

#endif
