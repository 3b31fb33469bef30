#ifndef MOYALSPIN_H
#define MOYALSPIN_H

/*
 * C interface to the moyalspin library.
 *
 * Every fallible call returns ms_status; on failure ms_last_error() gives a
 * message for the calling thread. Objects are opaque handles released with
 * the matching *_destroy function. Matrices over the spin grid are dense
 * row-major arrays of dim*dim ms_complex: operators as [row][col], symbols
 * as [m][n], tilde tables as [k][l].
 *
 * Lattice data follows the library layout: fields psi_n(q) as
 * [n][q_flat], phase-space functions as [p_flat][q_flat] and Wigner tables
 * as [m][n][p_flat][q_flat].
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MOYALSPIN_BUILDING_LIBRARY)
#    define MS_API __declspec(dllexport)
#  else
#    define MS_API __declspec(dllimport)
#  endif
#else
#  define MS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ms_status {
  MS_OK = 0,
  MS_ERR_INVALID_ARGUMENT = 1,
  MS_ERR_DIMENSION_PARITY = 2,
  MS_ERR_KERNEL_ZERO = 3,
  MS_ERR_INVALID_STATE = 4,
  MS_ERR_DIMENSION_MISMATCH = 5,
  MS_ERR_GRID_MISMATCH = 6,
  MS_ERR_RESONANT_DENOMINATOR = 7,
  MS_ERR_STEP_TOO_LARGE = 8,
  MS_ERR_INTERNAL = 99
} ms_status;

typedef struct ms_complex {
  double re;
  double im;
} ms_complex;

MS_API const char* ms_version(void);
MS_API const char* ms_status_name(ms_status status);
MS_API const char* ms_last_error(void);

typedef struct ms_tolerances {
  double algebra; /* exact identities */
  double star;    /* star product against matrix products */
  double state;   /* density operator validation */
  double purity;  /* purity defect */
} ms_tolerances;

MS_API ms_tolerances ms_default_tolerances(void);

/* ---- spin grid ---------------------------------------------------------- */

typedef enum ms_kernel_variant {
  MS_KERNEL_PARITY_ODD = 0,
  MS_KERNEL_PARITY_EVEN_HALF_ODD = 1,
  MS_KERNEL_COSINE = 2,
  MS_KERNEL_CUSTOM = 3
} ms_kernel_variant;

typedef struct ms_kernel ms_kernel;

/* spin_dim is the Hilbert dimension s+1. */
MS_API ms_status ms_kernel_create(int spin_dim, ms_kernel_variant variant, double epsilon,
                                  ms_kernel** out);
MS_API ms_status ms_kernel_create_default(int spin_dim, ms_kernel** out);
MS_API ms_status ms_kernel_from_table(int spin_dim, const ms_complex* table, ms_kernel** out);
MS_API void ms_kernel_destroy(ms_kernel* kernel);
MS_API double ms_default_epsilon(int spin_dim);

MS_API int ms_kernel_dim(const ms_kernel* kernel);
MS_API double ms_kernel_epsilon(const ms_kernel* kernel);
MS_API ms_kernel_variant ms_kernel_get_variant(const ms_kernel* kernel);
MS_API ms_status ms_kernel_table(const ms_kernel* kernel, ms_complex* out);

MS_API ms_status ms_disp_D(int spin_dim, long k, long l, ms_complex* out);
MS_API ms_status ms_quantizer(const ms_kernel* kernel, int m, int n, ms_complex* out);
MS_API ms_status ms_spin_wigner(const ms_kernel* kernel, const ms_complex* rho, ms_complex* out);
MS_API ms_status ms_spin_symbol(const ms_kernel* kernel, const ms_complex* op, ms_complex* out);
MS_API ms_status ms_spin_dequantize(const ms_kernel* kernel, const ms_complex* symbol,
                                    ms_complex* out);
MS_API ms_status ms_spin_star(const ms_kernel* kernel, const ms_complex* f, const ms_complex* g,
                              ms_complex* out);
MS_API ms_status ms_tilde(int spin_dim, const ms_complex* op, ms_complex* out);
MS_API ms_status ms_boxtimes(int spin_dim, const ms_complex* f, const ms_complex* g,
                             ms_complex* out);

/* ---- verification reports ----------------------------------------------- */

typedef struct ms_report ms_report;

MS_API ms_status ms_quantizer_checks(const ms_kernel* kernel, ms_report** out);
MS_API ms_status ms_star_checks(const ms_kernel* kernel, int pairs, uint64_t seed,
                                ms_report** out);
MS_API size_t ms_report_count(const ms_report* report);
/* The name pointer stays valid until the report is destroyed. */
MS_API ms_status ms_report_entry(const ms_report* report, size_t index, const char** name,
                                 double* residual, double* tolerance, int* passed,
                                 int* required);
MS_API int ms_report_passed(const ms_report* report);
MS_API void ms_report_destroy(ms_report* report);

/* ---- continuous lattice ------------------------------------------------- */

typedef struct ms_grid_spec {
  int d;
  int n_points;
  double length;
  double hbar;
} ms_grid_spec;

MS_API ms_grid_spec ms_grid_default(void);
MS_API ms_status ms_grid_validate(const ms_grid_spec* grid);
/* N^d, or 0 for an invalid grid. */
MS_API size_t ms_grid_points(const ms_grid_spec* grid);
MS_API double ms_grid_position(const ms_grid_spec* grid, int k);
MS_API double ms_grid_momentum(const ms_grid_spec* grid, int j);

MS_API ms_status ms_oscillator_state(const ms_grid_spec* grid, int n, double m0, double omega,
                                     ms_complex* out);
MS_API ms_status ms_wigner_continuous(const ms_grid_spec* grid, const ms_complex* row,
                                      const ms_complex* col, ms_complex* out);

typedef enum ms_derivative_scheme {
  MS_DERIVATIVE_SPECTRAL = 0,
  MS_DERIVATIVE_FINITE_DIFFERENCE = 1
} ms_derivative_scheme;

/* order = MS_MOYAL_EXACT selects the untruncated product. */
#define MS_MOYAL_EXACT (-1)

MS_API ms_status ms_moyal_star(const ms_grid_spec* grid, const ms_complex* f,
                               const ms_complex* g, int order, ms_derivative_scheme scheme,
                               ms_complex* out);
MS_API ms_status ms_free_evolution(const ms_grid_spec* grid, const ms_complex* rho, double t,
                                   double m0, ms_complex* out);

/* ---- full Wigner functions ---------------------------------------------- */

typedef struct ms_wigner ms_wigner;

/* amplitudes: spin_dim * N^d values psi_n(q). */
MS_API ms_status ms_wigner_pure(const ms_grid_spec* grid, int spin_dim,
                                const ms_complex* amplitudes, const ms_kernel* kernel,
                                ms_wigner** out);
/* density: <q,a|rho|q',b> as [a][b][q][q'], d = 1 only. */
MS_API ms_status ms_wigner_mixed(const ms_grid_spec* grid, int spin_dim,
                                 const ms_complex* density, const ms_kernel* kernel,
                                 ms_wigner** out);
MS_API void ms_wigner_destroy(ms_wigner* w);
MS_API int ms_wigner_dim(const ms_wigner* w);
MS_API ms_grid_spec ms_wigner_grid(const ms_wigner* w);
MS_API size_t ms_wigner_size(const ms_wigner* w);
MS_API ms_status ms_wigner_values(const ms_wigner* w, double* out);
MS_API double ms_wigner_total(const ms_wigner* w);
/* position, momentum: N^d entries each; number, phase: spin_dim entries. */
MS_API ms_status ms_wigner_marginals(const ms_wigner* w, double* position, double* momentum,
                                     double* number, double* phase);
MS_API ms_status ms_wigner_kernel_change(const ms_wigner* w, const ms_kernel* from,
                                         const ms_kernel* to, ms_wigner** out);

/* ---- worked systems ----------------------------------------------------- */

typedef struct ms_em_params {
  double m0;
  double e0;
  double c;
  double hbar;
  double B3;
  double b;
  double omega;
  double mu0;
} ms_em_params;

MS_API ms_em_params ms_em_default(void);

typedef struct ms_landau_mode {
  int N;
  int lambda0;
  double p10;
  double p30;
  ms_em_params params;
} ms_landau_mode;

typedef struct ms_landau_residuals {
  double ode;
  double transport;
  double eigen_p;
  double normalization;
} ms_landau_residuals;

MS_API ms_landau_mode ms_landau_default(void);
MS_API ms_status ms_landau_energy(const ms_landau_mode* mode, double* out);
MS_API ms_status ms_landau_wigner(const ms_landau_mode* mode, double p2, double q2, double* out);
MS_API ms_status ms_landau_centre(const ms_landau_mode* mode, double* q2_centre);
MS_API ms_status ms_landau_residuals_compute(const ms_landau_mode* mode,
                                             ms_landau_residuals* out);
MS_API ms_status ms_landau_spin_vector(int lambda0, double gamma_mn[4]);

MS_API ms_status ms_rabi_frequency(const ms_em_params* params, double* out);
MS_API ms_status ms_rabi_period(const ms_em_params* params, double* out);
MS_API ms_status ms_pure_amplitude(const ms_em_params* params, double* out);
MS_API ms_status ms_resonance_analytic(const ms_em_params* params, double a, double t,
                                       double gamma012[3]);

typedef struct ms_trajectory ms_trajectory;

MS_API ms_status ms_resonance_integrate(const ms_em_params* params, const double gamma_mn[4],
                                        double t_end, double dt, ms_trajectory** out);
/* Integrates from the closed-form solution at t = 0 and reports the largest
 * deviation from it. */
MS_API ms_status ms_resonance_compare(const ms_em_params* params, double a, double t_end,
                                      double dt, ms_trajectory** out, double* max_deviation);
MS_API size_t ms_trajectory_length(const ms_trajectory* tr);
MS_API ms_status ms_trajectory_sample(const ms_trajectory* tr, size_t index, double* t,
                                      double gamma012[3]);
MS_API ms_status ms_trajectory_rabi_fit(const ms_trajectory* tr, double* omega,
                                        double* amplitude, int* peaks);
MS_API void ms_trajectory_destroy(ms_trajectory* tr);

typedef struct ms_purity_report {
  int is_pure;
  double defect;
  int star_is_pure;
  double star_defect;
} ms_purity_report;

MS_API ms_status ms_purity_check(const double gamma_mn[4], const ms_kernel* kernel,
                                 ms_purity_report* out);

#ifdef __cplusplus
}
#endif

#endif
