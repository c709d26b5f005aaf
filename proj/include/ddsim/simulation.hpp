#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "ddsim/linalg.hpp"
#include "ddsim/lti.hpp"
#include "ddsim/signal_matrix.hpp"
#include "ddsim/trajectory.hpp"

namespace ddsim {

// Initial trajectory (u_ini, y_ini) of length L0 and the simulation input u_s
// of length Ls.
struct SimulationTask {
    Trajectory u_ini;
    Trajectory y_ini;
    Trajectory u_s;

    [[nodiscard]] std::size_t L0() const noexcept { return u_ini.length(); }
    [[nodiscard]] std::size_t Ls() const noexcept { return u_s.length(); }
    [[nodiscard]] std::size_t L() const noexcept { return L0() + Ls(); }
    [[nodiscard]] std::size_t nu() const noexcept { return u_ini.channels(); }
    [[nodiscard]] std::size_t ny() const noexcept { return y_ini.channels(); }

    // Throws InputContract on length or channel inconsistencies.
    void validate() const;

    // [u_ini; u_s]
    [[nodiscard]] Eigen::VectorXd input_stack() const;
    // [u_ini; y_ini; u_s]
    [[nodiscard]] Eigen::VectorXd stacked_rhs() const;
};

struct DdSolution {
    Eigen::VectorXd g;
    Trajectory y_s_hat;
    double residual = 0.0;
};

struct DdOptions {
    linalg::RankOptions rank;
    // Consistency tolerance: residual <= relative_tolerance * (1 + ||rhs||).
    double relative_tolerance = 1e-6;
};

// [Up; Yp; Uf]
[[nodiscard]] Eigen::MatrixXd stacked_data(const PartitionedData& part);

// Minimum-norm g of [Up; Yp; Uf] g = [u_ini; y_ini; u_s]; y_s_hat = Yf g.
// Throws NoSolutionError when the system is inconsistent.
[[nodiscard]] DdSolution solve_g(const PartitionedData& part, const SimulationTask& task,
                                 const DdOptions& opts = {});

// [u_ini; y_ini; u_s] in Im([Up; Yp; Uf]); checkable from data alone.
[[nodiscard]] bool check_range_condition(const PartitionedData& part, const SimulationTask& task,
                                         const DdOptions& opts = {});

// Diagnostic needing the true data state trajectory x_d (at least N samples):
// [u_ini; u_s; x_hat] in Im([Up; Uf; Xp]) with x_hat from estimate_x0. For
// Page data Xp takes the states at the column starts 0, L, 2L, ...
[[nodiscard]] bool check_relaxed_conditions(const StateSpaceModel& model, const Trajectory& u_d,
                                            const Trajectory& y_d, const Trajectory& x_d,
                                            const SimulationTask& task, MatrixKind kind,
                                            const DdOptions& opts = {});

// Build matrices of the requested kind, partition, and solve for g.
[[nodiscard]] DdSolution simulate_dd(const Trajectory& u_d, const Trajectory& y_d,
                                     const SimulationTask& task, MatrixKind kind,
                                     const DdOptions& opts = {});

// Builds and partitions both data matrices for a task's horizons.
[[nodiscard]] PartitionedData partition_data(const Trajectory& u_d, const Trajectory& y_d,
                                             std::size_t L0, std::size_t Ls, MatrixKind kind);

}  // namespace ddsim
