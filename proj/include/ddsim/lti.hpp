#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "ddsim/linalg.hpp"
#include "ddsim/trajectory.hpp"

namespace ddsim {

// Discrete-time LTI realization
//   x_{t+1} = A x_t + B u_t,   y_t = C x_t + D u_t.
class StateSpaceModel {
public:
    StateSpaceModel(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C, Eigen::MatrixXd D);

    [[nodiscard]] const Eigen::MatrixXd& A() const noexcept { return A_; }
    [[nodiscard]] const Eigen::MatrixXd& B() const noexcept { return B_; }
    [[nodiscard]] const Eigen::MatrixXd& C() const noexcept { return C_; }
    [[nodiscard]] const Eigen::MatrixXd& D() const noexcept { return D_; }

    [[nodiscard]] std::size_t nx() const noexcept { return static_cast<std::size_t>(A_.rows()); }
    [[nodiscard]] std::size_t nu() const noexcept { return static_cast<std::size_t>(B_.cols()); }
    [[nodiscard]] std::size_t ny() const noexcept { return static_cast<std::size_t>(C_.rows()); }

    // Rank tests of the observability and reversed controllability matrices.
    [[nodiscard]] bool is_minimal(const linalg::RankOptions& opts = {}) const;

private:
    Eigen::MatrixXd A_, B_, C_, D_;
};

struct SimulationResult {
    Trajectory y;  // same length as the input
    Trajectory x;  // length(u) + 1 samples, terminal state included
};

[[nodiscard]] SimulationResult simulate(const StateSpaceModel& model, const Eigen::VectorXd& x0,
                                        const Trajectory& u);

// Block lower-triangular Toeplitz matrix of Markov parameters, i*ny x i*nu.
[[nodiscard]] Eigen::MatrixXd toeplitz_matrix(const StateSpaceModel& model, std::size_t horizon);

// Rows C, CA, ..., CA^{i-1}.
[[nodiscard]] Eigen::MatrixXd observability(const StateSpaceModel& model, std::size_t horizon);

// Columns A^{i-1}B, ..., AB, B.
[[nodiscard]] Eigen::MatrixXd controllability_rev(const StateSpaceModel& model,
                                                  std::size_t horizon);

// Smallest i with rank O_i = nx. Throws Unobservable when no such i <= nx exists.
[[nodiscard]] std::size_t lag(const StateSpaceModel& model, const linalg::RankOptions& opts = {});

struct EstimateX0Options {
    linalg::RankOptions rank;
    // Residual tolerance is relative_tolerance * (1 + ||y_ini||).
    double relative_tolerance = 1e-8;
};

// x_hat = pinv(O_L0) (y_ini - T_L0 u_ini), with a consistency check on the residual.
[[nodiscard]] Eigen::VectorXd estimate_x0(const StateSpaceModel& model, const Trajectory& u_ini,
                                          const Trajectory& y_ini,
                                          const EstimateX0Options& opts = {});

// G(z) = 0.1159 (z^3 + 0.5 z) / (z^4 - 2.2 z^3 + 2.42 z^2 - 1.87 z + 0.7225)
// in controllable canonical form.
[[nodiscard]] StateSpaceModel benchmark_system();

// SISO realization of num(z)/den(z) in controllable canonical form.
// Coefficients are in descending powers, den monic after normalization,
// deg(num) <= deg(den).
[[nodiscard]] StateSpaceModel controllable_canonical(std::vector<double> num,
                                                     std::vector<double> den);

}  // namespace ddsim
