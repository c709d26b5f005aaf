#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>

#include "ddsim/linalg.hpp"
#include "ddsim/signal_matrix.hpp"
#include "ddsim/simulation.hpp"
#include "ddsim/trajectory.hpp"

namespace ddsim {

// i.i.d. Gaussian output noise w ~ N(0, sigma2).
struct NoiseModel {
    double sigma2 = 0.0;
    std::uint64_t seed = 0;
};

// y + w with w drawn from the stream (seed, realization). Scalar output only.
[[nodiscard]] Trajectory noise_inject(const Trajectory& y, const NoiseModel& nm,
                                      std::uint64_t realization = 0);

// Covariance of Y g - [y_ini; 0] given g, L x L.
//   Hankel: sigma2 * sum_k g_k g_{k+|i-j|}   (banded Toeplitz)
//   Page:   sigma2 * ||g||^2 * I_L
[[nodiscard]] Eigen::MatrixXd covariance(const Eigen::VectorXd& g, double sigma2, std::size_t L,
                                         MatrixKind kind);

struct SmmObjectiveOptions {
    // Reject g outside {g : [Up; Uf] g = [u_ini; u_s]}.
    bool check_feasibility = true;
    double feasibility_tolerance = 1e-6;  // relative to 1 + ||[u_ini; u_s]||
};

// logdet(Sigma_y(g)) + r' Sigma_y(g)^{-1} r,   r = [Yp g - y_ini; 0].
// Sigma_y gets a 1e-12 * trace / L ridge if its Cholesky factorization fails.
[[nodiscard]] double smm_objective(const Eigen::VectorXd& g, const PartitionedData& part,
                                   const SimulationTask& task, double sigma2,
                                   const SmmObjectiveOptions& opts = {});

struct SmmSolution {
    Eigen::VectorXd g;
    Eigen::VectorXd nu;  // multipliers of [Up; Uf] g = [u_ini; u_s]
    Trajectory y_s_hat;
    Eigen::MatrixXd sigma_y;   // L x L at g
    Eigen::MatrixXd sigma_yf;  // trailing Ls x Ls block
    double objective = 0.0;    // L sigma2 ||g||^2 + ||Yp g - y_ini||^2
    double kkt_residual = 0.0;
    std::size_t constraint_rank = 0;
};

struct SmmOptions {
    linalg::RankOptions rank;
    // Accepted saddle-point residual: relative_tolerance * (1 + ||rhs||).
    double relative_tolerance = 1e-8;
};

// Relaxed estimator:
//   min_g  L sigma2 ||g||^2 + ||Yp g - y_ini||^2   s.t.  [Up; Uf] g = [u_ini; u_s]
// solved through the saddle-point system
//   [F U'; U 0] [g; nu] = [Yp' y_ini; u_bar],   F = L sigma2 I + Yp' Yp.
[[nodiscard]] SmmSolution solve_smm_relaxed(const PartitionedData& part, const SimulationTask& task,
                                            double sigma2, const SmmOptions& opts = {});

}  // namespace ddsim
