#ifndef DDSIM_DDSIM_H
#define DDSIM_DDSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(DDSIM_BUILDING_LIBRARY)
#define DDSIM_API __attribute__((visibility("default")))
#else
#define DDSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ddsim_status {
    DDSIM_OK = 0,
    DDSIM_E_INPUT = 1,    /* bad arguments, shapes, preconditions */
    DDSIM_E_IO = 2,       /* unreadable/unwritable files, malformed documents */
    DDSIM_E_SOLVER = 3,   /* inconsistent or degenerate numerical problem */
    DDSIM_E_INTERNAL = 4
} ddsim_status;

typedef enum ddsim_matrix_kind { DDSIM_HANKEL = 0, DDSIM_PAGE = 1 } ddsim_matrix_kind;

typedef struct ddsim_model ddsim_model;
typedef struct ddsim_trajectory ddsim_trajectory;
typedef struct ddsim_task ddsim_task;
typedef struct ddsim_config ddsim_config;
typedef struct ddsim_design_result ddsim_design_result;

/* Message of the last failing call on this thread; "" if none. */
DDSIM_API const char* ddsim_last_error(void);
DDSIM_API const char* ddsim_version(void);

/* Models */
DDSIM_API ddsim_status ddsim_model_load_json(const char* path, ddsim_model** out);
DDSIM_API ddsim_status ddsim_model_benchmark(ddsim_model** out);
DDSIM_API ddsim_status ddsim_model_dims(const ddsim_model* model, size_t* nx, size_t* nu, size_t* ny);
/* y from state x0 (n_x values, NULL for zero) under input u. */
DDSIM_API ddsim_status ddsim_model_simulate(const ddsim_model* model, const double* x0,
                                            const ddsim_trajectory* u, ddsim_trajectory** y);
DDSIM_API void ddsim_model_free(ddsim_model* model);

/* Trajectories; values are time-major (value(t, c) = values[t * channels + c]). */
DDSIM_API ddsim_status ddsim_trajectory_create(size_t channels, size_t length, const double* values,
                                               ddsim_trajectory** out);
DDSIM_API ddsim_status ddsim_trajectory_load_csv(const char* path, ddsim_trajectory** out);
DDSIM_API ddsim_status ddsim_trajectory_save_csv(const ddsim_trajectory* traj, const char* path);
DDSIM_API ddsim_status ddsim_trajectory_shape(const ddsim_trajectory* traj, size_t* channels,
                                              size_t* length);
DDSIM_API const double* ddsim_trajectory_data(const ddsim_trajectory* traj);
/* Channels [first, first + count) as a new trajectory. */
DDSIM_API ddsim_status ddsim_trajectory_channels(const ddsim_trajectory* traj, size_t first, size_t count,
                                                 ddsim_trajectory** out);
DDSIM_API void ddsim_trajectory_free(ddsim_trajectory* traj);

/* Simulation tasks (u_ini, y_ini, u_s) */
DDSIM_API ddsim_status ddsim_task_load_json(const char* path, ddsim_task** out);
DDSIM_API ddsim_status ddsim_task_create(const ddsim_trajectory* u_ini, const ddsim_trajectory* y_ini,
                                         const ddsim_trajectory* u_s, ddsim_task** out);
DDSIM_API void ddsim_task_free(ddsim_task* task);

/* Exact data-driven simulation with minimum-norm g. residual may be NULL. */
DDSIM_API ddsim_status ddsim_simulate_dd(const ddsim_trajectory* u_d, const ddsim_trajectory* y_d,
                                         const ddsim_task* task, ddsim_matrix_kind kind,
                                         ddsim_trajectory** y_s_hat, double* residual);
/* Relaxed maximum-likelihood simulation for noisy outputs with variance sigma2. */
DDSIM_API ddsim_status ddsim_simulate_smm(const ddsim_trajectory* u_d, const ddsim_trajectory* y_d,
                                          const ddsim_task* task, ddsim_matrix_kind kind, double sigma2,
                                          ddsim_trajectory** y_s_hat);

/* Experiment configuration */
DDSIM_API ddsim_status ddsim_config_load_json(const char* path, ddsim_config** out);
DDSIM_API ddsim_status ddsim_config_set_seed(ddsim_config* config, uint64_t seed);
/* Applies DDSIM_SEED from the environment when set. */
DDSIM_API ddsim_status ddsim_config_apply_env(ddsim_config* config);
DDSIM_API void ddsim_config_free(ddsim_config* config);

/* Input design for the first (N, noise level, kind) of the configuration. */
DDSIM_API ddsim_status ddsim_design_run(const ddsim_config* config, ddsim_design_result** out);
DDSIM_API ddsim_status ddsim_design_result_input(const ddsim_design_result* res, ddsim_trajectory** out);
DDSIM_API ddsim_status ddsim_design_result_objective(const ddsim_design_result* res, double* objective);
DDSIM_API ddsim_status ddsim_design_result_energy(const ddsim_design_result* res, double* energy);
DDSIM_API ddsim_status ddsim_design_result_kkt_residual(const ddsim_design_result* res, double* residual);
DDSIM_API ddsim_status ddsim_design_result_converged(const ddsim_design_result* res, int* converged);
DDSIM_API ddsim_status ddsim_design_result_save_json(const ddsim_design_result* res, const char* path);
DDSIM_API void ddsim_design_result_free(ddsim_design_result* res);

/* Full Monte-Carlo grid; writes raw.csv, summary.csv, report.json, config.json, designs/. */
DDSIM_API ddsim_status ddsim_experiment_run(const ddsim_config* config, const char* out_dir);

DDSIM_API ddsim_status ddsim_fit(const ddsim_trajectory* y_true, const ddsim_trajectory* y_hat, double* fit);

#ifdef __cplusplus
}
#endif

#endif
