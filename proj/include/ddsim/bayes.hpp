#pragma once

#include <Eigen/Dense>
#include <cstddef>

#include "ddsim/trajectory.hpp"

namespace ddsim {

enum class PriorKind { ScaledIdentity, DiagonalDecay, Custom };

// Zero-mean Gaussian prior N(0, sigma_K) on the simulated output.
struct KernelPrior {
    Eigen::MatrixXd sigma_K;
    PriorKind kind = PriorKind::Custom;

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(sigma_K.rows()); }
};

[[nodiscard]] KernelPrior scaled_identity_prior(double scale, std::size_t Ls);
// diag(c, c rho, c rho^2, ...), 0 < rho < 1.
[[nodiscard]] KernelPrior diagonal_decay_prior(double c, double rho, std::size_t Ls);
// Symmetric positive-definite matrix; anything else is rejected.
[[nodiscard]] KernelPrior custom_prior(const Eigen::MatrixXd& sigma_K);

struct PosteriorSummary {
    Trajectory mean;              // K y_s_hat
    Eigen::MatrixXd sigma_post;   // sigma_K - sigma_K (sigma_K + sigma_yf)^{-1} sigma_K
    Eigen::MatrixXd kalman_gain;  // sigma_K (sigma_K + sigma_yf)^{-1}
    double mutual_information = 0.0;  // nats
    // ||sigma_post - (sigma_yf^{-1} + sigma_K^{-1})^{-1}||_F, or NaN if sigma_yf is singular.
    double information_form_gap = 0.0;
};

[[nodiscard]] PosteriorSummary posterior(const Trajectory& y_s_hat, const Eigen::MatrixXd& sigma_yf,
                                         const KernelPrior& prior);

// Gaussian mutual information between the simulated output and the data, two ways:
//   from_posterior = 1/2 (logdet sigma_K - logdet sigma_post)
//   from_data      = 1/2 logdet(I + sigma_K sigma_yf^{-1})
// Either is NaN when its matrices are singular.
struct MutualInformationForms {
    double from_posterior = 0.0;
    double from_data = 0.0;
};

[[nodiscard]] MutualInformationForms mutual_information_forms(const KernelPrior& prior,
                                                              const Eigen::MatrixXd& sigma_yf);

// Value from the data form when sigma_yf is positive definite, otherwise the
// posterior form; throws Degenerate when neither is available.
[[nodiscard]] double mutual_information(const KernelPrior& prior, const Eigen::MatrixXd& sigma_yf);

// f(z) = -Ls log z + sum_i log(1 + z lambda_i),  lambda_i = eig(sigma_K^{-1}).
// With sigma_yf = z I:  2 MI = f(z) + logdet sigma_K, and f is strictly
// decreasing in z for every positive-definite sigma_K.
[[nodiscard]] double information_term(double z, const KernelPrior& prior);

}  // namespace ddsim
