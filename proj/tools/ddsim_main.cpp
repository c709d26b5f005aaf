#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "ddsim/ddsim.h"

namespace {

int exit_code(ddsim_status s) {
    switch (s) {
        case DDSIM_OK: return 0;
        case DDSIM_E_INPUT:
        case DDSIM_E_IO: return 2;
        case DDSIM_E_SOLVER: return 3;
        default: return 1;
    }
}

struct Failure {
    ddsim_status status;
};

void check(ddsim_status s) {
    if (s != DDSIM_OK) throw Failure{s};
}

template <typename T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
    T** out() { return &p; }
    operator T*() const { return p; }
};

using Model = Handle<ddsim_model, ddsim_model_free>;
using Traj = Handle<ddsim_trajectory, ddsim_trajectory_free>;
using Task = Handle<ddsim_task, ddsim_task_free>;
using Config = Handle<ddsim_config, ddsim_config_free>;
using Design = Handle<ddsim_design_result, ddsim_design_result_free>;

void print_trajectory(const ddsim_trajectory* t) {
    size_t channels = 0, length = 0;
    check(ddsim_trajectory_shape(t, &channels, &length));
    const double* v = ddsim_trajectory_data(t);
    std::printf("t");
    for (size_t c = 0; c < channels; ++c) std::printf(",ch%zu", c);
    std::printf("\n");
    for (size_t i = 0; i < length; ++i) {
        std::printf("%zu", i);
        for (size_t c = 0; c < channels; ++c) std::printf(",%.17g", v[i * channels + c]);
        std::printf("\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-driven simulation with Hankel and Page matrices"};
    app.require_subcommand(1);

    std::string model_path, data_path, task_path, kind_name = "hankel", method = "dd", out_path;
    double sigma2 = 0.0;
    auto* sim = app.add_subcommand("simulate", "Predict the response to a task from measured data");
    sim->add_option("--model", model_path, "Model JSON (channel counts of the data file)")->required();
    sim->add_option("--data", data_path, "Data CSV: t, input channels, output channels")->required();
    sim->add_option("--task", task_path, "Task JSON with u_ini, y_ini, u_s")->required();
    sim->add_option("--kind", kind_name, "hankel or page")->check(CLI::IsMember({"hankel", "page"}));
    sim->add_option("--method", method, "dd (exact) or smm (noisy data)")->check(CLI::IsMember({"dd", "smm"}));
    sim->add_option("--sigma2", sigma2, "Noise variance for --method smm");
    sim->add_option("--out", out_path, "Write the prediction CSV here instead of stdout");

    std::string config_path, design_out, result_out;
    auto* des = app.add_subcommand("design", "Design an experiment input");
    des->add_option("--config", config_path, "Experiment config JSON")->required();
    des->add_option("--out", design_out, "Designed input CSV")->required();
    des->add_option("--result", result_out, "Full result JSON (default: --out with .json)");

    std::string exp_out;
    auto* exp = app.add_subcommand("experiment", "Run the Monte-Carlo comparison grid");
    exp->add_option("--config", config_path, "Experiment config JSON")->required();
    exp->add_option("--out", exp_out, "Output directory")->required();

    std::string true_path, est_path;
    auto* fit = app.add_subcommand("fit", "Fit W between two trajectories");
    fit->add_option("--true", true_path, "Reference CSV")->required();
    fit->add_option("--est", est_path, "Estimate CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*sim) {
            Model model;
            check(ddsim_model_load_json(model_path.c_str(), model.out()));
            size_t nu = 0, ny = 0;
            check(ddsim_model_dims(model, nullptr, &nu, &ny));
            Traj data, u, y, yhat;
            check(ddsim_trajectory_load_csv(data_path.c_str(), data.out()));
            size_t channels = 0;
            check(ddsim_trajectory_shape(data, &channels, nullptr));
            if (channels != nu + ny) {
                std::fprintf(stderr, "error: data has %zu signal columns, model expects %zu inputs + %zu outputs\n",
                             channels, nu, ny);
                return 2;
            }
            check(ddsim_trajectory_channels(data, 0, nu, u.out()));
            check(ddsim_trajectory_channels(data, nu, ny, y.out()));
            Task task;
            check(ddsim_task_load_json(task_path.c_str(), task.out()));
            const ddsim_matrix_kind kind = kind_name == "page" ? DDSIM_PAGE : DDSIM_HANKEL;
            if (method == "dd")
                check(ddsim_simulate_dd(u, y, task, kind, yhat.out(), nullptr));
            else
                check(ddsim_simulate_smm(u, y, task, kind, sigma2, yhat.out()));
            if (out_path.empty())
                print_trajectory(yhat);
            else
                check(ddsim_trajectory_save_csv(yhat, out_path.c_str()));
        } else if (*des) {
            Config config;
            check(ddsim_config_load_json(config_path.c_str(), config.out()));
            check(ddsim_config_apply_env(config));
            Design result;
            check(ddsim_design_run(config, result.out()));
            Traj u;
            check(ddsim_design_result_input(result, u.out()));
            check(ddsim_trajectory_save_csv(u, design_out.c_str()));
            if (result_out.empty()) result_out = std::filesystem::path(design_out).replace_extension(".json").string();
            check(ddsim_design_result_save_json(result, result_out.c_str()));
            double objective = 0.0;
            int converged = 0;
            check(ddsim_design_result_objective(result, &objective));
            check(ddsim_design_result_converged(result, &converged));
            std::printf("objective %.17g converged %d\n", objective, converged);
        } else if (*exp) {
            Config config;
            check(ddsim_config_load_json(config_path.c_str(), config.out()));
            check(ddsim_config_apply_env(config));
            check(ddsim_experiment_run(config, exp_out.c_str()));
        } else if (*fit) {
            Traj a, b;
            check(ddsim_trajectory_load_csv(true_path.c_str(), a.out()));
            check(ddsim_trajectory_load_csv(est_path.c_str(), b.out()));
            double w = 0.0;
            check(ddsim_fit(a, b, &w));
            std::printf("%.17g\n", w);
        }
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s\n", ddsim_last_error());
        return exit_code(f.status);
    }
    return 0;
}
