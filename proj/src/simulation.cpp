#include "ddsim/simulation.hpp"

#include <sstream>

#include "ddsim/error.hpp"

namespace ddsim {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void SimulationTask::validate() const {
    require(u_ini.length() >= 1 && u_s.length() >= 1, ErrorKind::InputContract,
            "task horizons L0 and Ls must be >= 1");
    require(y_ini.length() == u_ini.length(), ErrorKind::InputContract,
            "u_ini and y_ini must have the same length");
    require(u_s.channels() == u_ini.channels(), ErrorKind::InputContract,
            "u_s and u_ini must have the same channel count");
}

VectorXd SimulationTask::input_stack() const {
    VectorXd v(u_ini.values().size() + u_s.values().size());
    v << u_ini.as_vector(), u_s.as_vector();
    return v;
}

VectorXd SimulationTask::stacked_rhs() const {
    VectorXd v(u_ini.values().size() + y_ini.values().size() + u_s.values().size());
    v << u_ini.as_vector(), y_ini.as_vector(), u_s.as_vector();
    return v;
}

MatrixXd stacked_data(const PartitionedData& part) {
    MatrixXd A(part.Up.rows() + part.Yp.rows() + part.Uf.rows(), part.Up.cols());
    A << part.Up, part.Yp, part.Uf;
    return A;
}

namespace {

void check_task_against(const PartitionedData& part, const SimulationTask& task) {
    task.validate();
    require(task.L0() == part.L0 && task.Ls() == part.Ls, ErrorKind::InputContract,
            "task horizons do not match the data partition");
    require(static_cast<Index>(task.L0() * task.nu()) == part.Up.rows() &&
                static_cast<Index>(task.L0() * task.ny()) == part.Yp.rows(),
            ErrorKind::InputContract, "task channel counts do not match the data");
}

}  // namespace

DdSolution solve_g(const PartitionedData& part, const SimulationTask& task, const DdOptions& opts) {
    check_task_against(part, task);
    const MatrixXd A = stacked_data(part);
    const VectorXd rhs = task.stacked_rhs();
    DdSolution sol;
    sol.g = linalg::min_norm_solve(A, rhs, opts.rank);
    sol.residual = (A * sol.g - rhs).norm();
    const double tol = opts.relative_tolerance * (1.0 + rhs.norm());
    if (sol.residual > tol) throw NoSolutionError(sol.residual, tol);
    sol.y_s_hat = Trajectory::from_vector(task.ny(), part.Yf * sol.g);
    return sol;
}

bool check_range_condition(const PartitionedData& part, const SimulationTask& task,
                           const DdOptions& opts) {
    check_task_against(part, task);
    const VectorXd rhs = task.stacked_rhs();
    return linalg::in_column_span(stacked_data(part), rhs,
                                  opts.relative_tolerance * (1.0 + rhs.norm()), opts.rank);
}

PartitionedData partition_data(const Trajectory& u_d, const Trajectory& y_d, std::size_t L0,
                               std::size_t Ls, MatrixKind kind) {
    require(u_d.length() == y_d.length(), ErrorKind::InputContract,
            "input and output data must have the same length");
    const std::size_t L = L0 + Ls;
    return partition(build_signal_matrix(kind, u_d, L), build_signal_matrix(kind, y_d, L), L0, Ls);
}

bool check_relaxed_conditions(const StateSpaceModel& model, const Trajectory& u_d,
                              const Trajectory& y_d, const Trajectory& x_d,
                              const SimulationTask& task, MatrixKind kind, const DdOptions& opts) {
    task.validate();
    require(x_d.channels() == model.nx() && x_d.length() >= u_d.length(), ErrorKind::InputContract,
            "state trajectory must have nx channels and cover the data length");
    const VectorXd xhat = estimate_x0(model, task.u_ini, task.y_ini, {opts.rank});
    const PartitionedData part = partition_data(u_d, y_d, task.L0(), task.Ls(), kind);
    const std::size_t cols = part.cols();
    const std::size_t stride = kind == MatrixKind::Hankel ? 1 : task.L();
    const auto nx = static_cast<Index>(model.nx());
    MatrixXd Xp(nx, static_cast<Index>(cols));
    for (std::size_t j = 0; j < cols; ++j)
        for (Index i = 0; i < nx; ++i)
            Xp(i, static_cast<Index>(j)) = x_d(j * stride, static_cast<std::size_t>(i));

    MatrixXd lhs(part.Up.rows() + part.Uf.rows() + nx, static_cast<Index>(cols));
    lhs << part.Up, part.Uf, Xp;
    VectorXd rhs(lhs.rows());
    rhs << task.input_stack(), xhat;
    return linalg::in_column_span(lhs, rhs, opts.relative_tolerance * (1.0 + rhs.norm()), opts.rank);
}

DdSolution simulate_dd(const Trajectory& u_d, const Trajectory& y_d, const SimulationTask& task,
                       MatrixKind kind, const DdOptions& opts) {
    task.validate();
    require(u_d.channels() == task.nu() && y_d.channels() == task.ny(), ErrorKind::InputContract,
            "data channel counts do not match the task");
    return solve_g(partition_data(u_d, y_d, task.L0(), task.Ls(), kind), task, opts);
}

}  // namespace ddsim
