#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddsim/signal_matrix.hpp"
#include "ddsim/simulation.hpp"
#include "ddsim/trajectory.hpp"

namespace ddsim {

// Truncated impulse response y_t = sum_k h_k u_{t-k} used to predict the
// output of a candidate input before the experiment is run.
struct BaselineModel {
    std::vector<double> h;

    [[nodiscard]] std::size_t n_h() const noexcept { return h.size(); }
};

struct FirOptions {
    // Ridge weight; defaults to 1e-6 * sum(u^2).
    std::optional<double> lambda;
};

// Ridge-regularized least-squares FIR fit of y on lagged u from rest.
[[nodiscard]] BaselineModel estimate_baseline_fir(const Trajectory& u_prior,
                                                  const Trajectory& y_prior, std::size_t n_h,
                                                  const FirOptions& opts = {});

// Causal convolution of u_d with h from zero initial state.
[[nodiscard]] Trajectory predicted_output(const BaselineModel& baseline, const Trajectory& u_d);

// Past block (first L0 block rows) of the L-row data matrix of the predicted output.
[[nodiscard]] Eigen::MatrixXd predicted_Yp(const BaselineModel& baseline, const Trajectory& u_d,
                                           std::size_t L0, std::size_t L, MatrixKind kind);

// Input design instance: pick u_d (length N, scalar) with sum u^2 <= E0 N
// minimizing ||g||^2, where (g, nu) solves the relaxed estimator's
// saddle-point system built from u_d and the baseline prediction.
struct DesignProblem {
    SimulationTask task;
    BaselineModel baseline;
    double sigma2 = 0.0;
    std::size_t N = 0;
    MatrixKind kind = MatrixKind::Hankel;
    double E0 = 0.1;

    void validate() const;
    [[nodiscard]] std::size_t L() const noexcept { return task.L(); }
    [[nodiscard]] std::size_t M() const noexcept { return column_count(kind, N, task.L()); }
    [[nodiscard]] double energy_budget() const noexcept { return E0 * static_cast<double>(N); }
};

struct KktSystem {
    Eigen::MatrixXd F;    // L sigma2 I_M + Yp' Yp
    Eigen::MatrixXd U;    // L x M input data matrix
    Eigen::MatrixXd Yp;   // L0 x M predicted past outputs
    Eigen::VectorXd rhs;  // [Yp' y_ini; u_bar]

    [[nodiscard]] Eigen::MatrixXd saddle_matrix() const;
    // More equality constraints than unknowns (cols < L); the saddle matrix is
    // then singular and only inputs with u_bar in range(U) are feasible.
    [[nodiscard]] bool overdetermined() const noexcept { return U.rows() > U.cols(); }
};

[[nodiscard]] KktSystem assemble_kkt(const DesignProblem& problem, const Trajectory& u_d);

// ||g||^2 at u_d; throws Degenerate when the saddle-point system has no solution.
[[nodiscard]] double design_objective(const DesignProblem& problem, const Trajectory& u_d);

struct DesignOptions {
    std::size_t multistart = 5;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::size_t max_outer_iterations = 40;
    std::size_t max_inner_iterations = 4000;
    std::size_t lbfgs_memory = 12;
    double constraint_tolerance = 1e-9;  // relative, before restoration
    double kkt_tolerance = 1e-6;         // relative acceptance of the final solve
    double stationarity_tolerance = 1e-5;  // projected-gradient inf-norm
    // Relative objective slack for the refinement pass that lowers the
    // past-output residual ||Yp_hat g - y_ini||; 0 disables it.
    double tie_break_tolerance = 1e-3;
};

struct SolverReport {
    std::size_t iterations = 0;        // inner iterations summed over outer passes
    std::size_t outer_iterations = 0;
    std::size_t restoration_steps = 0;
    bool converged = false;
    std::string message;
};

struct DesignResult {
    Trajectory u_d_opt;
    Eigen::VectorXd g_opt;
    Eigen::VectorXd nu_opt;
    double objective = 0.0;     // ||g_opt||^2
    double energy_used = 0.0;   // sum u^2
    double kkt_residual = 0.0;  // ||[F U'; U 0][g; nu] - rhs||
    double rhs_norm = 0.0;
    double past_residual = 0.0;  // ||Yp_hat g - y_ini||^2 under the baseline model
    std::size_t start_index = 0;
    SolverReport solver_report;
};

// Gaussian draw scaled onto the energy boundary, stream (seed, index).
[[nodiscard]] Trajectory random_design_start(const DesignProblem& problem, std::uint64_t seed,
                                             std::size_t index);

// Single local solve from init_u (scaled into the energy ball if needed).
[[nodiscard]] DesignResult solve_design(const DesignProblem& problem, const Trajectory& init_u,
                                        const DesignOptions& opts = {});

// Multistart wrapper: best objective among starts whose final saddle-point
// solve is feasible. Starts within the tie tolerance of the best objective are
// ranked by past-output residual, then by lowest start index.
[[nodiscard]] DesignResult design_input(const DesignProblem& problem,
                                        const DesignOptions& opts = {});

namespace design_detail {

// Augmented Lagrangian of the full-space program in x = [u; g; nu]:
//   ||g||^2 + w ||Yp g - y_ini||^2 + lambda'c(x) + mu/2 ||c(x)||^2,
//   c = [L sigma2 g + Yp'(Yp g - y_ini) + U' nu;  U g - u_bar].
class AugmentedLagrangian {
public:
    explicit AugmentedLagrangian(const DesignProblem& problem);

    [[nodiscard]] std::size_t N() const noexcept { return N_; }
    [[nodiscard]] std::size_t M() const noexcept { return M_; }
    [[nodiscard]] std::size_t L() const noexcept { return L_; }
    [[nodiscard]] std::size_t size() const noexcept { return N_ + M_ + L_; }
    [[nodiscard]] std::size_t constraint_count() const noexcept { return M_ + L_; }
    // Adds w ||Yp_hat g - y_ini||^2 to the objective.
    void set_residual_weight(double w) noexcept { residual_weight_ = w; }

    [[nodiscard]] Eigen::VectorXd constraints(const Eigen::VectorXd& x) const;
    // Jacobian of constraints(x), (M + L) x size().
    [[nodiscard]] Eigen::MatrixXd constraint_jacobian(const Eigen::VectorXd& x) const;
    double value_and_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& lambda, double mu,
                              Eigen::VectorXd& grad) const;

    // Data matrices at input u (a length-N vector).
    [[nodiscard]] Eigen::MatrixXd input_matrix(const Eigen::VectorXd& u) const;
    [[nodiscard]] Eigen::MatrixXd predicted_past(const Eigen::VectorXd& u) const;

private:
    [[nodiscard]] std::size_t column_start(std::size_t j) const noexcept {
        return kind_ == MatrixKind::Hankel ? j : j * L_;
    }

    std::size_t N_, M_, L_, L0_;
    MatrixKind kind_;
    double reg_;  // L sigma2
    double residual_weight_ = 0.0;
    std::vector<double> h_;
    Eigen::VectorXd y_ini_;
    Eigen::VectorXd u_bar_;
};

}  // namespace design_detail

}  // namespace ddsim
