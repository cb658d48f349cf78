/* C interface to the Creutz-ladder superradiance-lattice simulator. */
#ifndef CREUTZ_CREUTZ_H
#define CREUTZ_CREUTZ_H

#include <stddef.h>

#if defined(_WIN32)
#  ifdef CREUTZ_BUILDING_LIBRARY
#    define CREUTZ_API __declspec(dllexport)
#  else
#    define CREUTZ_API __declspec(dllimport)
#  endif
#else
#  define CREUTZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum creutz_status {
  CREUTZ_OK = 0,
  CREUTZ_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad index, bad parameter */
  CREUTZ_ERR_CONFIG = 2,           /* config or input validation; message has the field path */
  CREUTZ_ERR_NUMERICAL = 3,        /* solver or fit failure */
  CREUTZ_ERR_IO = 4,
  CREUTZ_ERR_INTERNAL = 5
} creutz_status;

typedef enum creutz_leg { CREUTZ_LEG_A = 0, CREUTZ_LEG_B = 1 } creutz_leg;

typedef struct creutz_params {
  double omega1_mhz;
  double omega2_mhz;
  double delta_c_mhz;
  double phi_rad;
} creutz_params;

typedef struct creutz_hoppings {
  double t1_mhz;
  double t2_mhz;
  double t3_mhz;
  double eta; /* NaN when omega1 == 0 */
} creutz_hoppings;

typedef struct creutz_probe {
  creutz_leg leg;
  double detuning_mhz;
  double omega_p;
  double gamma_a_mhz;
  double gamma_b_mhz;
} creutz_probe;

typedef struct creutz_hamiltonian creutz_hamiltonian;
typedef struct creutz_bands creutz_bands;
typedef struct creutz_cls creutz_cls;
typedef struct creutz_steady_state creutz_steady_state;
typedef struct creutz_result creutz_result;

CREUTZ_API const char* creutz_version(void);

/* Message of the last failure on the calling thread; "" when none. */
CREUTZ_API const char* creutz_last_error(void);

/* Defaults: omega = (15, 68) MHz, delta_c = 233.5 MHz, phi = pi. */
CREUTZ_API creutz_params creutz_default_params(void);
CREUTZ_API creutz_probe creutz_default_probe(void);

CREUTZ_API creutz_status creutz_hoppings_derive(const creutz_params* params, creutz_hoppings* out);

/* Open-boundary ladder, n_cells odd and >= 3. Rows ordered (a, b) per cell
   from cell -(n-1)/2 upwards. */
CREUTZ_API creutz_status creutz_hamiltonian_create(const creutz_params* params, int n_cells,
                                                   creutz_hamiltonian** out);
CREUTZ_API void creutz_hamiltonian_destroy(creutz_hamiltonian* h);
CREUTZ_API int creutz_hamiltonian_dim(const creutz_hamiltonian* h);
CREUTZ_API creutz_status creutz_hamiltonian_element(const creutz_hamiltonian* h, int row, int col,
                                                    double* re, double* im);

CREUTZ_API creutz_status creutz_bands_compute(const creutz_params* params, int n_k, int threads,
                                              creutz_bands** out);
CREUTZ_API void creutz_bands_destroy(creutz_bands* b);
CREUTZ_API size_t creutz_bands_size(const creutz_bands* b);
/* branch 0 = flat, 1 = dispersive. */
CREUTZ_API creutz_status creutz_bands_get(const creutz_bands* b, size_t index, int branch,
                                          double* k, double* energy, double* sigma_z);

CREUTZ_API creutz_status creutz_band_gap(const creutz_params* params, int n_k, double* gap_mhz);

/* literal_eta != 0 uses eta instead of omega2/omega1 as the a/b coefficient. */
CREUTZ_API creutz_status creutz_cls_build(const creutz_params* params, int cell, int literal_eta,
                                          creutz_cls** out);
CREUTZ_API void creutz_cls_destroy(creutz_cls* c);
CREUTZ_API size_t creutz_cls_size(const creutz_cls* c);
CREUTZ_API creutz_status creutz_cls_site(const creutz_cls* c, size_t index, creutz_leg* leg,
                                         int* cell, double* re, double* im);
CREUTZ_API creutz_status creutz_cls_residual(const creutz_cls* c, const creutz_hamiltonian* h,
                                             double* residual_mhz);

CREUTZ_API creutz_status creutz_steady_state_solve(const creutz_params* params,
                                                   const creutz_probe* probe, int n_cells,
                                                   creutz_steady_state** out);
CREUTZ_API void creutz_steady_state_destroy(creutz_steady_state* s);
CREUTZ_API creutz_status creutz_steady_state_amplitude(const creutz_steady_state* s,
                                                       creutz_leg leg, int cell, double* re,
                                                       double* im);
CREUTZ_API creutz_status creutz_steady_state_ratio(const creutz_steady_state* s, double* ratio,
                                                   double* boundary_ratio);

/* R = |x1/x0|^2 at each detuning; out_values has n entries. r_bar receives
   the band-window average (NaN when the window misses the grid). */
CREUTZ_API creutz_status creutz_spectrum(const creutz_params* params, const creutz_probe* probe,
                                         const double* detunings, size_t n, int n_cells,
                                         int threads, double* out_values, double* r_bar);

CREUTZ_API creutz_status creutz_averaged_reflectivity(const double* detunings,
                                                      const double* values, size_t n, double lo,
                                                      double hi, double* out);

/* values ~ offset + amplitude * sin(phi + phase). */
CREUTZ_API creutz_status creutz_fit_sinusoid(const double* phi, const double* values, size_t n,
                                             double* offset, double* amplitude, double* phase,
                                             double* rms_residual);

/* conic receives (A, B, C, D, E, F). phase_difference in [0, pi] for the
   model x = sin(u), y = sin(-u + p). */
CREUTZ_API creutz_status creutz_fit_ellipse(const double* x, const double* y, size_t n,
                                            double conic[6], double* phase_difference,
                                            int* degenerate, double* rms_residual);

typedef struct creutz_run_options {
  int write_files;         /* nonzero: write the bundle to disk */
  const char* out_dir;     /* NULL: output.directory from the config */
  int threads;             /* <= 0 means 1 */
  int svg;                 /* nonzero forces SVG output */
  const char* input_path;  /* fit */
  const char* x_column;    /* fit, NULL for default */
  const char* y_column;
  int plus_convention;     /* fit: y = sin(u + p) */
} creutz_run_options;

/* Runs bands | spectrum | sweep | cls | fit with a JSON config (NULL or ""
   for defaults). The result holds the metadata JSON and every file. */
CREUTZ_API creutz_status creutz_run(const char* command, const char* config_json,
                                    const creutz_run_options* options, creutz_result** out);
CREUTZ_API void creutz_result_destroy(creutz_result* r);
CREUTZ_API const char* creutz_result_metadata(const creutz_result* r);
CREUTZ_API size_t creutz_result_file_count(const creutz_result* r);
CREUTZ_API const char* creutz_result_file_name(const creutz_result* r, size_t index);
CREUTZ_API const char* creutz_result_file_content(const creutz_result* r, size_t index,
                                                  size_t* length);

/* Resolved snapshot of a config, all defaults filled in. Free with
   creutz_string_free. */
CREUTZ_API creutz_status creutz_config_resolve(const char* config_json, char** out);
CREUTZ_API void creutz_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
