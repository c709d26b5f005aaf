#include "ddsim/ddsim.h"

#include <exception>
#include <new>
#include <string>

#include "ddsim/design.hpp"
#include "ddsim/error.hpp"
#include "ddsim/harness.hpp"
#include "ddsim/io.hpp"
#include "ddsim/lti.hpp"
#include "ddsim/simulation.hpp"
#include "ddsim/smm.hpp"

struct ddsim_model {
    ddsim::StateSpaceModel value;
};
struct ddsim_trajectory {
    ddsim::Trajectory value;
};
struct ddsim_task {
    ddsim::SimulationTask value;
};
struct ddsim_config {
    ddsim::ExperimentConfig value;
};
struct ddsim_design_result {
    ddsim::DesignResult value;
};

namespace {

thread_local std::string g_last_error;

ddsim_status status_of(ddsim::ErrorKind kind) {
    if (kind == ddsim::ErrorKind::Io) return DDSIM_E_IO;
    return ddsim::is_input_error(kind) ? DDSIM_E_INPUT : DDSIM_E_SOLVER;
}

template <typename Fn>
ddsim_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return DDSIM_OK;
    } catch (const ddsim::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return DDSIM_E_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DDSIM_E_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return DDSIM_E_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (p == nullptr) ddsim::fail(ddsim::ErrorKind::InputContract, std::string(what) + " is null");
}

ddsim::MatrixKind kind_of(ddsim_matrix_kind k) {
    switch (k) {
        case DDSIM_HANKEL: return ddsim::MatrixKind::Hankel;
        case DDSIM_PAGE: return ddsim::MatrixKind::Page;
    }
    ddsim::fail(ddsim::ErrorKind::InputContract, "unknown matrix kind");
}

const ddsim::DesignResult& result_of(const ddsim_design_result* r) {
    need(r, "design result");
    return r->value;
}

}  // namespace

extern "C" {

const char* ddsim_last_error(void) { return g_last_error.c_str(); }

const char* ddsim_version(void) { return "1.0.0"; }

ddsim_status ddsim_model_load_json(const char* path, ddsim_model** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new ddsim_model{ddsim::load_model_json(path)};
    });
}

ddsim_status ddsim_model_benchmark(ddsim_model** out) {
    return guarded([&] {
        need(out, "out");
        *out = new ddsim_model{ddsim::benchmark_system()};
    });
}

ddsim_status ddsim_model_dims(const ddsim_model* model, size_t* nx, size_t* nu, size_t* ny) {
    return guarded([&] {
        need(model, "model");
        if (nx) *nx = model->value.nx();
        if (nu) *nu = model->value.nu();
        if (ny) *ny = model->value.ny();
    });
}

ddsim_status ddsim_model_simulate(const ddsim_model* model, const double* x0, const ddsim_trajectory* u,
                                  ddsim_trajectory** y) {
    return guarded([&] {
        need(model, "model");
        need(u, "u");
        need(y, "y");
        const auto n = static_cast<Eigen::Index>(model->value.nx());
        Eigen::VectorXd x = x0 ? Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(x0, n))
                               : Eigen::VectorXd::Zero(n);
        *y = new ddsim_trajectory{ddsim::simulate(model->value, x, u->value).y};
    });
}

void ddsim_model_free(ddsim_model* model) { delete model; }

ddsim_status ddsim_trajectory_create(size_t channels, size_t length, const double* values,
                                     ddsim_trajectory** out) {
    return guarded([&] {
        need(out, "out");
        if (channels == 0) ddsim::fail(ddsim::ErrorKind::InputContract, "trajectory needs at least one channel");
        std::vector<double> v(channels * length, 0.0);
        if (values) v.assign(values, values + channels * length);
        *out = new ddsim_trajectory{ddsim::Trajectory(channels, std::move(v))};
    });
}

ddsim_status ddsim_trajectory_load_csv(const char* path, ddsim_trajectory** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new ddsim_trajectory{ddsim::load_trajectory_csv(path)};
    });
}

ddsim_status ddsim_trajectory_save_csv(const ddsim_trajectory* traj, const char* path) {
    return guarded([&] {
        need(traj, "trajectory");
        need(path, "path");
        ddsim::save_trajectory_csv(path, traj->value);
    });
}

ddsim_status ddsim_trajectory_shape(const ddsim_trajectory* traj, size_t* channels, size_t* length) {
    return guarded([&] {
        need(traj, "trajectory");
        if (channels) *channels = traj->value.channels();
        if (length) *length = traj->value.length();
    });
}

const double* ddsim_trajectory_data(const ddsim_trajectory* traj) {
    return traj ? traj->value.values().data() : nullptr;
}

ddsim_status ddsim_trajectory_channels(const ddsim_trajectory* traj, size_t first, size_t count,
                                       ddsim_trajectory** out) {
    return guarded([&] {
        need(traj, "trajectory");
        need(out, "out");
        *out = new ddsim_trajectory{traj->value.channel_range(first, count)};
    });
}

void ddsim_trajectory_free(ddsim_trajectory* traj) { delete traj; }

ddsim_status ddsim_task_load_json(const char* path, ddsim_task** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new ddsim_task{ddsim::load_task_json(path)};
    });
}

ddsim_status ddsim_task_create(const ddsim_trajectory* u_ini, const ddsim_trajectory* y_ini,
                               const ddsim_trajectory* u_s, ddsim_task** out) {
    return guarded([&] {
        need(u_ini, "u_ini");
        need(y_ini, "y_ini");
        need(u_s, "u_s");
        need(out, "out");
        ddsim::SimulationTask t{u_ini->value, y_ini->value, u_s->value};
        t.validate();
        *out = new ddsim_task{std::move(t)};
    });
}

void ddsim_task_free(ddsim_task* task) { delete task; }

ddsim_status ddsim_simulate_dd(const ddsim_trajectory* u_d, const ddsim_trajectory* y_d, const ddsim_task* task,
                               ddsim_matrix_kind kind, ddsim_trajectory** y_s_hat, double* residual) {
    return guarded([&] {
        need(u_d, "u_d");
        need(y_d, "y_d");
        need(task, "task");
        need(y_s_hat, "y_s_hat");
        const auto sol = ddsim::simulate_dd(u_d->value, y_d->value, task->value, kind_of(kind));
        if (residual) *residual = sol.residual;
        *y_s_hat = new ddsim_trajectory{sol.y_s_hat};
    });
}

ddsim_status ddsim_simulate_smm(const ddsim_trajectory* u_d, const ddsim_trajectory* y_d, const ddsim_task* task,
                                ddsim_matrix_kind kind, double sigma2, ddsim_trajectory** y_s_hat) {
    return guarded([&] {
        need(u_d, "u_d");
        need(y_d, "y_d");
        need(task, "task");
        need(y_s_hat, "y_s_hat");
        const auto& t = task->value;
        const auto part = ddsim::partition_data(u_d->value, y_d->value, t.L0(), t.Ls(), kind_of(kind));
        *y_s_hat = new ddsim_trajectory{ddsim::solve_smm_relaxed(part, t, sigma2).y_s_hat};
    });
}

ddsim_status ddsim_config_load_json(const char* path, ddsim_config** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new ddsim_config{ddsim::load_experiment_config(path)};
    });
}

ddsim_status ddsim_config_set_seed(ddsim_config* config, uint64_t seed) {
    return guarded([&] {
        need(config, "config");
        config->value.seed = seed;
    });
}

ddsim_status ddsim_config_apply_env(ddsim_config* config) {
    return guarded([&] {
        need(config, "config");
        ddsim::apply_seed_override(config->value);
    });
}

void ddsim_config_free(ddsim_config* config) { delete config; }

ddsim_status ddsim_design_run(const ddsim_config* config, ddsim_design_result** out) {
    return guarded([&] {
        need(config, "config");
        need(out, "out");
        const auto& c = config->value;
        const auto baseline = ddsim::estimate_experiment_baseline(c);
        const auto truth = ddsim::make_ground_truth(c);
        const ddsim::DesignProblem problem{truth.task, baseline, ddsim::cell_sigma2(c.noise.front(), c, baseline),
                                           c.N.front(), c.kinds.front(), c.E0};
        ddsim::DesignOptions opts = c.design_options;
        opts.seed = c.seed;
        *out = new ddsim_design_result{ddsim::design_input(problem, opts)};
    });
}

ddsim_status ddsim_design_result_input(const ddsim_design_result* res, ddsim_trajectory** out) {
    return guarded([&] {
        need(out, "out");
        *out = new ddsim_trajectory{result_of(res).u_d_opt};
    });
}

ddsim_status ddsim_design_result_objective(const ddsim_design_result* res, double* objective) {
    return guarded([&] {
        need(objective, "objective");
        *objective = result_of(res).objective;
    });
}

ddsim_status ddsim_design_result_energy(const ddsim_design_result* res, double* energy) {
    return guarded([&] {
        need(energy, "energy");
        *energy = result_of(res).energy_used;
    });
}

ddsim_status ddsim_design_result_kkt_residual(const ddsim_design_result* res, double* residual) {
    return guarded([&] {
        need(residual, "residual");
        *residual = result_of(res).kkt_residual;
    });
}

ddsim_status ddsim_design_result_converged(const ddsim_design_result* res, int* converged) {
    return guarded([&] {
        need(converged, "converged");
        *converged = result_of(res).solver_report.converged ? 1 : 0;
    });
}

ddsim_status ddsim_design_result_save_json(const ddsim_design_result* res, const char* path) {
    return guarded([&] {
        need(path, "path");
        ddsim::write_text(path, ddsim::design_result_to_json(result_of(res)));
    });
}

void ddsim_design_result_free(ddsim_design_result* res) { delete res; }

ddsim_status ddsim_experiment_run(const ddsim_config* config, const char* out_dir) {
    return guarded([&] {
        need(config, "config");
        need(out_dir, "out_dir");
        const auto result = ddsim::run_experiment(config->value);
        ddsim::write_experiment(result, config->value, out_dir);
    });
}

ddsim_status ddsim_fit(const ddsim_trajectory* y_true, const ddsim_trajectory* y_hat, double* fit) {
    return guarded([&] {
        need(y_true, "y_true");
        need(y_hat, "y_hat");
        need(fit, "fit");
        *fit = ddsim::fit_metric(y_true->value, y_hat->value);
    });
}

}  // extern "C"
