// Exercises the shared library through its C interface only.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "ddsim/ddsim.h"

namespace {

int failures = 0;

void expect(bool ok, const char* what) {
    if (!ok) {
        ++failures;
        std::printf("FAIL %s (%s)\n", what, ddsim_last_error());
    } else {
        std::printf("ok   %s\n", what);
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::string data = argc > 1 ? argv[1] : "tests/data";

    ddsim_model* model = nullptr;
    expect(ddsim_model_load_json((data + "/model.json").c_str(), &model) == DDSIM_OK, "load model");
    size_t nx = 0, nu = 0, ny = 0;
    expect(ddsim_model_dims(model, &nx, &nu, &ny) == DDSIM_OK && nx == 4 && nu == 1 && ny == 1, "model dims");

    ddsim_trajectory* table = nullptr;
    expect(ddsim_trajectory_load_csv((data + "/data.csv").c_str(), &table) == DDSIM_OK, "load data");
    ddsim_trajectory *u = nullptr, *y = nullptr;
    expect(ddsim_trajectory_channels(table, 0, 1, &u) == DDSIM_OK, "split input");
    expect(ddsim_trajectory_channels(table, 1, 1, &y) == DDSIM_OK, "split output");

    ddsim_task* task = nullptr;
    expect(ddsim_task_load_json((data + "/task.json").c_str(), &task) == DDSIM_OK, "load task");

    ddsim_trajectory *expected = nullptr, *yh = nullptr, *yp = nullptr, *ys = nullptr;
    expect(ddsim_trajectory_load_csv((data + "/expected.csv").c_str(), &expected) == DDSIM_OK, "load expected");
    double residual = -1.0;
    expect(ddsim_simulate_dd(u, y, task, DDSIM_HANKEL, &yh, &residual) == DDSIM_OK && residual >= 0.0,
           "hankel simulation");
    double w = 0.0;
    expect(ddsim_fit(expected, yh, &w) == DDSIM_OK && w > 99.999, "hankel fit");
    expect(ddsim_simulate_smm(u, y, task, DDSIM_HANKEL, 1e-12, &ys) == DDSIM_OK, "relaxed simulation");
    expect(ddsim_fit(expected, ys, &w) == DDSIM_OK && w > 99.99, "relaxed fit");
    // 60 samples give only 4 Page columns for 14 constraints: no exact solution
    expect(ddsim_simulate_dd(u, y, task, DDSIM_PAGE, &yp, nullptr) == DDSIM_E_SOLVER, "page reports solver error");
    expect(std::strlen(ddsim_last_error()) > 0, "error message set");

    ddsim_task* bad = nullptr;
    expect(ddsim_task_load_json((data + "/task_inconsistent.json").c_str(), &bad) == DDSIM_OK, "load bad task");
    ddsim_trajectory* none = nullptr;
    expect(ddsim_simulate_dd(u, y, bad, DDSIM_HANKEL, &none, nullptr) == DDSIM_E_SOLVER && none == nullptr,
           "inconsistent task");

    ddsim_model* m2 = nullptr;
    expect(ddsim_model_load_json("/nonexistent.json", &m2) == DDSIM_E_IO, "missing file is IO error");
    expect(ddsim_fit(nullptr, yh, &w) == DDSIM_E_INPUT, "null argument is input error");

    const double vals[4] = {1, 2, 3, 4};
    ddsim_trajectory* t2 = nullptr;
    expect(ddsim_trajectory_create(2, 2, vals, &t2) == DDSIM_OK, "create trajectory");
    size_t ch = 0, len = 0;
    expect(ddsim_trajectory_shape(t2, &ch, &len) == DDSIM_OK && ch == 2 && len == 2, "shape");
    expect(ddsim_trajectory_data(t2)[3] == 4.0, "data access");
    const auto tmp = std::filesystem::temp_directory_path() / "ddsim_capi_roundtrip.csv";
    expect(ddsim_trajectory_save_csv(t2, tmp.c_str()) == DDSIM_OK, "save csv");
    ddsim_trajectory* t3 = nullptr;
    expect(ddsim_trajectory_load_csv(tmp.c_str(), &t3) == DDSIM_OK && ddsim_trajectory_data(t3)[2] == 3.0,
           "reload csv");

    ddsim_model* bench = nullptr;
    expect(ddsim_model_benchmark(&bench) == DDSIM_OK, "benchmark model");
    ddsim_trajectory* ysim = nullptr;
    expect(ddsim_model_simulate(bench, nullptr, u, &ysim) == DDSIM_OK, "simulate");
    expect(ddsim_fit(y, ysim, &w) == DDSIM_OK && w > 99.9999, "simulation matches data");

    ddsim_config* cfg = nullptr;
    expect(ddsim_config_load_json((data + "/tiny_config.json").c_str(), &cfg) == DDSIM_OK, "load config");
    expect(ddsim_config_set_seed(cfg, 3) == DDSIM_OK, "set seed");
    ddsim_design_result* res = nullptr;
    expect(ddsim_design_run(cfg, &res) == DDSIM_OK, "design");
    double obj = 0.0, energy = 0.0, kkt = 1.0;
    int conv = -1;
    expect(ddsim_design_result_objective(res, &obj) == DDSIM_OK && obj > 0.0, "objective");
    expect(ddsim_design_result_energy(res, &energy) == DDSIM_OK && energy <= 2.8 + 1e-9, "energy");
    expect(ddsim_design_result_kkt_residual(res, &kkt) == DDSIM_OK && kkt < 1e-5, "kkt residual");
    expect(ddsim_design_result_converged(res, &conv) == DDSIM_OK && (conv == 0 || conv == 1), "converged flag");
    ddsim_config* badcfg = nullptr;
    expect(ddsim_config_load_json((data + "/bad_config.json").c_str(), &badcfg) == DDSIM_E_INPUT, "bad config");

    for (auto* t : {table, u, y, expected, yh, yp, ys, none, t2, t3, ysim}) ddsim_trajectory_free(t);
    ddsim_task_free(task);
    ddsim_task_free(bad);
    ddsim_model_free(model);
    ddsim_model_free(bench);
    ddsim_config_free(cfg);
    ddsim_design_result_free(res);
    std::filesystem::remove(tmp);

    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
