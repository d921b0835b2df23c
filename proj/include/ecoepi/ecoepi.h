#ifndef ECOEPI_ECOEPI_H
#define ECOEPI_ECOEPI_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(ECOEPI_BUILDING)
#    define ECOEPI_API __declspec(dllexport)
#  else
#    define ECOEPI_API __declspec(dllimport)
#  endif
#else
#  define ECOEPI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; the CLI uses them as process exit codes. */
typedef enum ecoepi_status {
    ECOEPI_OK = 0,
    ECOEPI_INVALID_ARGUMENT = 1,
    ECOEPI_CONFIG_ERROR = 2,
    ECOEPI_IO_ERROR = 3,
    ECOEPI_NUMERICAL_ERROR = 4,
    ECOEPI_DEGENERATE = 5,
    ECOEPI_INTERNAL_ERROR = 6
} ecoepi_status;

typedef enum ecoepi_termination {
    ECOEPI_REACHED_T_MAX = 0,
    ECOEPI_CONVERGED = 1,
    ECOEPI_STEP_FAILURE = 2
} ecoepi_termination;

typedef enum ecoepi_feasibility {
    ECOEPI_FEASIBLE = 0,
    ECOEPI_MARGINAL = 1,
    ECOEPI_INFEASIBLE = 2
} ecoepi_feasibility;

typedef enum ecoepi_stability {
    ECOEPI_STABLE_NODE = 0,
    ECOEPI_STABLE_FOCUS = 1,
    ECOEPI_SADDLE = 2,
    ECOEPI_UNSTABLE = 3,
    ECOEPI_MARGINAL_STABILITY = 4
} ecoepi_stability;

ECOEPI_API const char* ecoepi_version(void);
/* Message of the last failed call on this thread ("" if none). */
ECOEPI_API const char* ecoepi_last_error(void);

/* ---- model: parameters, initial state and integration settings ---- */

typedef struct ecoepi_model ecoepi_model;

ECOEPI_API ecoepi_status ecoepi_model_load(const char* path, ecoepi_model** out);
ECOEPI_API ecoepi_status ecoepi_model_parse(const char* text, ecoepi_model** out);
/* Names fig1..fig5. */
ECOEPI_API ecoepi_status ecoepi_model_preset(const char* name, ecoepi_model** out);
ECOEPI_API ecoepi_status ecoepi_model_clone(const ecoepi_model* model, ecoepi_model** out);
ECOEPI_API void ecoepi_model_free(ecoepi_model* model);

/* Keys: parameter names, P0 S0 V0 W0, rel_tol abs_tol t_max initial_step max_step. */
ECOEPI_API ecoepi_status ecoepi_model_get(const ecoepi_model* model, const char* key, double* value);
ECOEPI_API ecoepi_status ecoepi_model_set(ecoepi_model* model, const char* key, double value);
/* rel_tol = tol, abs_tol = tol / 100. */
ECOEPI_API ecoepi_status ecoepi_model_set_tolerance(ecoepi_model* model, double tol);

/* Writes at most capacity bytes including the terminator; *needed gets the full length + 1. */
ECOEPI_API ecoepi_status ecoepi_model_dump(const ecoepi_model* model, char* buffer, size_t capacity, size_t* needed);

ECOEPI_API ecoepi_status ecoepi_model_rhs(const ecoepi_model* model, const double x[4], double dx[4]);
/* Row-major 4x4. */
ECOEPI_API ecoepi_status ecoepi_model_jacobian(const ecoepi_model* model, const double x[4], double jac[16]);

/* ---- trajectories ---- */

typedef struct ecoepi_trajectory ecoepi_trajectory;

/* Step failure yields ECOEPI_NUMERICAL_ERROR and no trajectory. */
ECOEPI_API ecoepi_status ecoepi_simulate(const ecoepi_model* model, ecoepi_trajectory** out);
ECOEPI_API size_t ecoepi_trajectory_size(const ecoepi_trajectory* traj);
ECOEPI_API ecoepi_status ecoepi_trajectory_sample(const ecoepi_trajectory* traj, size_t index, double* t, double x[4]);
ECOEPI_API ecoepi_termination ecoepi_trajectory_reason(const ecoepi_trajectory* traj);
ECOEPI_API ecoepi_status ecoepi_trajectory_write_csv(const ecoepi_trajectory* traj, const char* path);
ECOEPI_API void ecoepi_trajectory_free(ecoepi_trajectory* traj);

/* ---- equilibrium catalog and stability report ---- */

typedef struct ecoepi_equilibrium {
    char id[16];
    double point[4];
    int defined;
    ecoepi_feasibility feasibility;
    ecoepi_stability stability;   /* valid when has_stability */
    int has_stability;
    double leading_real;
} ecoepi_equilibrium;

typedef struct ecoepi_report ecoepi_report;

/* E0..E7; with_stability adds eigenvalues, class and face verdicts to each line. */
ECOEPI_API ecoepi_status ecoepi_analyze(const ecoepi_model* model, int with_stability, ecoepi_report** out);
ECOEPI_API size_t ecoepi_report_size(const ecoepi_report* report);
ECOEPI_API ecoepi_status ecoepi_report_entry(const ecoepi_report* report, size_t index, ecoepi_equilibrium* out);
/* JSON-lines text, valid until the report is freed. */
ECOEPI_API const char* ecoepi_report_jsonl(const ecoepi_report* report);
ECOEPI_API ecoepi_status ecoepi_report_write(const ecoepi_report* report, const char* path);
ECOEPI_API void ecoepi_report_free(ecoepi_report* report);

/* ---- parameter sweeps and transcritical points ---- */

typedef struct ecoepi_sweep ecoepi_sweep;

ECOEPI_API ecoepi_status ecoepi_sweep_run(const ecoepi_model* model, const char* key, double lo, double hi, size_t n,
                                          ecoepi_sweep** out);
ECOEPI_API size_t ecoepi_sweep_size(const ecoepi_sweep* sweep);
ECOEPI_API ecoepi_status ecoepi_sweep_row(const ecoepi_sweep* sweep, size_t index, double* value,
                                          ecoepi_equilibrium* out);
ECOEPI_API ecoepi_status ecoepi_sweep_write_csv(const ecoepi_sweep* sweep, const char* path);
ECOEPI_API void ecoepi_sweep_free(ecoepi_sweep* sweep);

typedef struct ecoepi_transcritical_point {
    double critical;
    double coincidence_gap;
    double crossing_re_first;
    double crossing_re_second;
    int crossing_index;
} ecoepi_transcritical_point;

/* Pairs: E2/E4, E2/E5, E4/E6, E5/E7, E1/E3, E2/E3. */
ECOEPI_API ecoepi_status ecoepi_transcritical(const ecoepi_model* model, const char* key, const char* first,
                                              const char* second, double lo, double hi,
                                              ecoepi_transcritical_point* out);

/* ---- basins and separatrices (P-S-V slice at W = 0) ---- */

typedef struct ecoepi_region {
    double lo[3];
    double hi[3];
} ecoepi_region;

/* Default box of the fig4 reproduction. */
ECOEPI_API ecoepi_region ecoepi_default_region(void);

typedef struct ecoepi_basin ecoepi_basin;

/* Two attractor ids, e.g. "E1" and "E4"; labels 0/1 follow that order, -1 is undecided. */
ECOEPI_API ecoepi_status ecoepi_basin_run(const ecoepi_model* model, const char* first, const char* second,
                                          const ecoepi_region* region, const int resolution[3], ecoepi_basin** out);
ECOEPI_API size_t ecoepi_basin_size(const ecoepi_basin* basin);
ECOEPI_API int ecoepi_basin_label(const ecoepi_basin* basin, size_t index);
ECOEPI_API size_t ecoepi_basin_undecided(const ecoepi_basin* basin);
ECOEPI_API ecoepi_status ecoepi_basin_write_csv(const ecoepi_basin* basin, const char* path);
ECOEPI_API void ecoepi_basin_free(ecoepi_basin* basin);

typedef struct ecoepi_separatrix_info {
    size_t points;
    size_t skipped;
    double fit_residual;
    size_t probes_tested;
    size_t probes_agreed;
    int below_label;
    int above_label;
} ecoepi_separatrix_info;

typedef struct ecoepi_separatrix ecoepi_separatrix;

/* kernel: "thin_plate", "cubic", "wendland_c2" or NULL for the default. */
ECOEPI_API ecoepi_status ecoepi_separatrix_run(const ecoepi_model* model, const char* first, const char* second,
                                               const ecoepi_region* region, const int segments[2],
                                               const char* kernel, ecoepi_separatrix** out);
ECOEPI_API ecoepi_status ecoepi_separatrix_get_info(const ecoepi_separatrix* sep, ecoepi_separatrix_info* out);
/* Surface V over (P, S). */
ECOEPI_API ecoepi_status ecoepi_separatrix_height(const ecoepi_separatrix* sep, double p, double s, double* v);
ECOEPI_API ecoepi_status ecoepi_separatrix_write_points(const ecoepi_separatrix* sep, const char* path);
ECOEPI_API ecoepi_status ecoepi_separatrix_write_obj(const ecoepi_separatrix* sep, const char* path, int n);
ECOEPI_API ecoepi_status ecoepi_separatrix_write_lattice(const ecoepi_separatrix* sep, const char* path, int n);
ECOEPI_API void ecoepi_separatrix_free(ecoepi_separatrix* sep);

/* ---- figure reproductions ---- */

typedef struct ecoepi_reproduction ecoepi_reproduction;

/* tol <= 0 keeps the default integration settings. */
ECOEPI_API ecoepi_status ecoepi_reproduce(const char* figure, const char* out_dir, double tol,
                                          ecoepi_reproduction** out);
ECOEPI_API const char* ecoepi_reproduction_summary(const ecoepi_reproduction* rep);
ECOEPI_API int ecoepi_reproduction_passed(const ecoepi_reproduction* rep);
ECOEPI_API void ecoepi_reproduction_free(ecoepi_reproduction* rep);

#ifdef __cplusplus
}
#endif

#endif
