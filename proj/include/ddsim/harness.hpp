#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ddsim/design.hpp"
#include "ddsim/lti.hpp"
#include "ddsim/signal_matrix.hpp"
#include "ddsim/simulation.hpp"
#include "ddsim/trajectory.hpp"

namespace ddsim {

// W = 100 (1 - ||y - y_hat|| / ||y - mean(y)||), pooled over all channels.
[[nodiscard]] double fit_metric(const Trajectory& y_true, const Trajectory& y_hat);

enum class TaskType { Impulse, DampedSine, Custom };

struct TaskSpec {
    TaskType type = TaskType::Impulse;
    double omega = 0.5;  // damped sine: u_s,t = sin(omega t) exp(-zeta t)
    double zeta = 0.3;
    std::optional<SimulationTask> custom;
    // Start the true system from a random state with a random u_ini instead
    // of at rest. The data experiment always starts at rest.
    bool random_initial_state = false;
};

// Noise level of a cell: either an absolute variance or an output SNR,
// converted as sigma2 = E0 ||h||^2 / snr with h the baseline impulse response.
struct NoiseLevel {
    enum class Kind { Variance, Snr } kind = Kind::Variance;
    double value = 0.0;
};

struct BaselineSettings {
    std::size_t length = 100;
    double snr = 10.0;
    std::size_t n_h = 0;  // 0 -> 4 Ls
};

struct ExperimentConfig {
    std::size_t L0 = 4;
    std::size_t Ls = 10;
    double E0 = 0.1;
    std::vector<std::size_t> N{28, 42, 56, 70, 84};
    std::vector<NoiseLevel> noise{{NoiseLevel::Kind::Variance, 0.001},
                                   {NoiseLevel::Kind::Variance, 0.01}};
    std::vector<MatrixKind> kinds{MatrixKind::Hankel, MatrixKind::Page};
    std::size_t realizations = 200;
    std::uint64_t seed = 1;
    TaskSpec task;
    bool design = true;
    BaselineSettings baseline;
    DesignOptions design_options;
    std::size_t threads = 0;  // trial workers, 0 -> hardware concurrency
    std::optional<StateSpaceModel> model;  // defaults to the benchmark system

    [[nodiscard]] std::size_t L() const noexcept { return L0 + Ls; }
    void validate() const;
};

[[nodiscard]] ExperimentConfig parse_experiment_config(const std::string& json_text);
[[nodiscard]] ExperimentConfig load_experiment_config(const std::filesystem::path& path);
[[nodiscard]] std::string config_to_json(const ExperimentConfig& config);
// DDSIM_SEED, when set, replaces config.seed.
void apply_seed_override(ExperimentConfig& config);

// True system output for a task plus the task itself.
struct GroundTruth {
    SimulationTask task;
    Eigen::VectorXd x0;
    Trajectory y_s;  // oracle output over the simulation horizon
};

[[nodiscard]] GroundTruth make_ground_truth(const ExperimentConfig& config);
[[nodiscard]] StateSpaceModel experiment_model(const ExperimentConfig& config);

// FIR fit from a prior i.i.d. Gaussian experiment on the true system.
[[nodiscard]] BaselineModel estimate_experiment_baseline(const ExperimentConfig& config);

[[nodiscard]] double cell_sigma2(const NoiseLevel& level, const ExperimentConfig& config,
                                 const BaselineModel& baseline);

// Fixed per-cell inputs shared by all trials of the cell.
struct CellSetup {
    MatrixKind kind = MatrixKind::Hankel;
    std::size_t N = 0;
    std::size_t N_index = 0;
    std::size_t noise_index = 0;
    double sigma2 = 0.0;
    Trajectory u_d;
    Trajectory y_d;  // clean response of the true system from rest
    std::optional<DesignResult> design;
};

[[nodiscard]] CellSetup prepare_cell(const ExperimentConfig& config, const GroundTruth& truth,
                                     const BaselineModel& baseline, MatrixKind kind,
                                     std::size_t N_index, std::size_t noise_index);

// Noise realization key; independent of the matrix kind so Hankel and Page
// trials at the same (N, noise, trial) see the same noise.
[[nodiscard]] std::uint64_t noise_realization(std::size_t N_index, std::size_t noise_index,
                                              std::size_t trial);

struct TrialOutcome {
    double W = 0.0;
    bool ok = false;
    std::string error;
};

[[nodiscard]] TrialOutcome run_trial(const ExperimentConfig& config, const GroundTruth& truth,
                                     const CellSetup& cell, std::size_t trial);

struct FitStatistics {
    std::size_t count = 0;
    std::size_t failures = 0;
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// Statistics over the successful entries; quartiles by linear interpolation
// between order statistics.
[[nodiscard]] FitStatistics summarize(const std::vector<TrialOutcome>& trials);

struct FitReport {
    MatrixKind kind = MatrixKind::Hankel;
    std::size_t N = 0;
    std::size_t noise_index = 0;
    double sigma2 = 0.0;
    std::vector<TrialOutcome> trials;
    FitStatistics stats;
    std::optional<double> design_objective;
    Trajectory u_d;
};

struct SignTest {
    std::size_t N = 0;
    std::size_t noise_index = 0;
    double sigma2 = 0.0;
    std::size_t wins = 0;    // Page strictly better
    std::size_t losses = 0;  // Hankel strictly better
    std::size_t ties = 0;
    double p_value = 1.0;
};

// Two-sided exact binomial sign test, ties dropped.
[[nodiscard]] double sign_test_p_value(std::size_t wins, std::size_t losses);
[[nodiscard]] SignTest paired_sign_test(const FitReport& hankel, const FitReport& page);

struct ExperimentResult {
    std::vector<FitReport> cells;
    std::vector<SignTest> sign_tests;
    BaselineModel baseline;

    [[nodiscard]] const FitReport* find(MatrixKind kind, std::size_t N, std::size_t noise_index) const;
};

// Runs every (N, noise, kind) cell. Throws SolverFailure when a cell has more
// than half of its trials failing.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& config);

// raw.csv, summary.csv, report.json, config.json and one designs/*.csv per cell.
void write_experiment(const ExperimentResult& result, const ExperimentConfig& config,
                      const std::filesystem::path& out_dir);
[[nodiscard]] std::string raw_csv(const ExperimentResult& result);
[[nodiscard]] std::string summary_csv(const ExperimentResult& result);
[[nodiscard]] std::string report_json(const ExperimentResult& result);

}  // namespace ddsim
