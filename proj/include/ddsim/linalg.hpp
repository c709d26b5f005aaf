#pragma once

#include <Eigen/Dense>
#include <optional>

namespace ddsim::linalg {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Singular-value threshold used for every rank decision. When `threshold` is
// unset the default max(rows, cols) * eps * sigma_max applies.
struct RankOptions {
    std::optional<double> threshold;
};

[[nodiscard]] double rank_threshold(const VectorXd& singular_values, Index rows, Index cols,
                                    const RankOptions& opts = {});

[[nodiscard]] Index numerical_rank(const MatrixXd& m, const RankOptions& opts = {});

[[nodiscard]] MatrixXd pseudo_inverse(const MatrixXd& m, const RankOptions& opts = {});

// Minimum-norm least-squares solution of m x = rhs.
[[nodiscard]] VectorXd min_norm_solve(const MatrixXd& m, const VectorXd& rhs,
                                      const RankOptions& opts = {});

// True when rhs lies in the column span of m to within `tol` (absolute residual).
[[nodiscard]] bool in_column_span(const MatrixXd& m, const VectorXd& rhs, double tol,
                                  const RankOptions& opts = {});

// log det of a symmetric positive-definite matrix via Cholesky; nullopt if not PD.
[[nodiscard]] std::optional<double> logdet_spd(const MatrixXd& m);

[[nodiscard]] MatrixXd symmetrize(const MatrixXd& m);

// Solution of   min 1/2 x'Hx - c'x   s.t.  A x = b
// reported in the saddle-point convention
//   [H A'; A 0] [x; nu] = [c; b].
// Rank-deficient A is handled through its numerical null space, so a
// consistent but singular saddle-point matrix still yields a solution.
struct EqualityQpSolution {
    VectorXd x;
    VectorXd multipliers;
    Index constraint_rank = 0;
    double constraint_residual = 0.0;   // ||A x - b||
    double stationarity_residual = 0.0; // ||H x + A' nu - c||
    double kkt_residual = 0.0;          // norm of the full saddle-point residual
    double rhs_norm = 0.0;              // ||[c; b]||
};

[[nodiscard]] EqualityQpSolution solve_equality_qp(const MatrixXd& H, const VectorXd& c,
                                                   const MatrixXd& A, const VectorXd& b,
                                                   const RankOptions& opts = {});

}  // namespace ddsim::linalg
