/* C interface to the dispersive-laser simulation library. */
#ifndef DLS_DLS_H
#define DLS_DLS_H

#include <stddef.h>

#if defined(DLS_BUILDING_LIBRARY)
#define DLS_API __attribute__((visibility("default")))
#else
#define DLS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dls_status {
  DLS_OK = 0,
  DLS_ERR_DOMAIN = 1,
  DLS_ERR_BELOW_THRESHOLD = 2,
  DLS_ERR_NO_LASING_SOLUTION = 3,
  DLS_ERR_SINGULAR = 4,
  DLS_ERR_NO_CONVERGENCE = 5,
  DLS_ERR_CONFIG = 6,
  DLS_ERR_IO = 7,
  DLS_ERR_UNREACHABLE_TARGET = 8,
  DLS_ERR_NUMERICAL = 9,
  DLS_ERR_INVALID_ARGUMENT = 10
} dls_status;

typedef struct dls_config dls_config;
typedef struct dls_result dls_result;

/* Message of the last failed call on this thread; empty after success. */
DLS_API const char* dls_last_error(void);
DLS_API const char* dls_status_name(int status);

DLS_API int dls_config_default(dls_config** out);
DLS_API int dls_config_load(const char* path, dls_config** out);
DLS_API int dls_config_parse(const char* text, dls_config** out);
DLS_API int dls_config_set_experiment(dls_config* cfg, const char* name);
DLS_API const char* dls_config_experiment(const dls_config* cfg);
DLS_API const char* dls_config_output_dir(const dls_config* cfg);
/* Writes every field; loading the file back gives an identical config. */
DLS_API int dls_config_write(const dls_config* cfg, const char* path);
DLS_API void dls_config_free(dls_config* cfg);

/* out_dir may be NULL (uses the config's output dir). A successful call can
   still report failed rows through dls_result_exit_code. */
DLS_API int dls_run(const dls_config* cfg, const char* out_dir, int workers, dls_result** out);
/* 0 ok, 2 partial row failures, 4 non-convergence on a required row */
DLS_API int dls_result_exit_code(const dls_result* r);
DLS_API const char* dls_result_report(const dls_result* r);
DLS_API size_t dls_result_file_count(const dls_result* r);
DLS_API const char* dls_result_file(const dls_result* r, size_t i);
DLS_API double dls_result_seconds(const dls_result* r);
DLS_API void dls_result_free(dls_result* r);

/* Lambda system, all rates in rad/s. */
typedef struct dls_three_level_params {
  double omega_L;
  double omega_P;
  double delta_p;
  double delta_diff;
  double gamma_eff;
  double gamma_3;
  int depletion; /* nonzero: optical pumping fills |1> instead of |2> */
  double branch_to_1;
} dls_three_level_params;

/* Row-major 3x3 density matrix, real and imaginary parts. */
DLS_API int dls_three_level_steady_state(const dls_three_level_params* p, double rho_re[9], double rho_im[9]);
/* Reduced two-level coherence rho21 after eliminating |3>. */
DLS_API int dls_two_level_rho21(const dls_three_level_params* p, double* re, double* im);
/* (n_g - 1)/n_g */
DLS_API int dls_shift_ratio_analytic(double n_g, double* ratio);
/* Linear-index laser calibrated to n_g, pump shifted by delta_P_hz. */
DLS_API int dls_solve_linear_shift(double n_g, double delta_P_hz, double* delta_L_hz);

#ifdef __cplusplus
}
#endif

#endif
