#include "ddsim/bayes.hpp"

#include <cmath>
#include <limits>

#include "ddsim/error.hpp"
#include "ddsim/linalg.hpp"

namespace ddsim {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

void check_spd(const MatrixXd& m, const char* what) {
    require(m.rows() == m.cols() && m.rows() >= 1, ErrorKind::InputContract,
            std::string(what) + " must be a nonempty square matrix");
    require(m.allFinite(), ErrorKind::InputContract, std::string(what) + " must be finite");
    const double asym = (m - m.transpose()).norm();
    require(asym <= 1e-12 * (1.0 + m.norm()), ErrorKind::InputContract,
            std::string(what) + " must be symmetric");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() > 0.0, ErrorKind::InputContract,
            std::string(what) + " must be positive definite");
}

}  // namespace

KernelPrior scaled_identity_prior(double scale, std::size_t Ls) {
    require(scale > 0.0, ErrorKind::InputContract, "prior scale must be positive");
    require(Ls >= 1, ErrorKind::InputContract, "prior size must be >= 1");
    const auto n = static_cast<Index>(Ls);
    return {scale * MatrixXd::Identity(n, n), PriorKind::ScaledIdentity};
}

KernelPrior diagonal_decay_prior(double c, double rho, std::size_t Ls) {
    require(c > 0.0, ErrorKind::InputContract, "decay prior scale must be positive");
    require(rho > 0.0 && rho < 1.0, ErrorKind::InputContract, "decay rate must lie in (0, 1)");
    require(Ls >= 1, ErrorKind::InputContract, "prior size must be >= 1");
    VectorXd d(static_cast<Index>(Ls));
    for (Index i = 0; i < d.size(); ++i) d(i) = c * std::pow(rho, static_cast<double>(i));
    return {d.asDiagonal(), PriorKind::DiagonalDecay};
}

KernelPrior custom_prior(const MatrixXd& sigma_K) {
    check_spd(sigma_K, "custom prior");
    return {sigma_K, PriorKind::Custom};
}

PosteriorSummary posterior(const Trajectory& y_s_hat, const MatrixXd& sigma_yf,
                           const KernelPrior& prior) {
    const auto n = static_cast<Index>(prior.size());
    require(sigma_yf.rows() == n && sigma_yf.cols() == n, ErrorKind::InputContract,
            "sigma_yf must match the prior size");
    require(y_s_hat.channels() == 1 && static_cast<Index>(y_s_hat.length()) == n,
            ErrorKind::InputContract, "y_s_hat length must match the prior size");
    const MatrixXd& SK = prior.sigma_K;
    const MatrixXd S = linalg::symmetrize(SK + sigma_yf);
    Eigen::LLT<MatrixXd> llt(S);
    require(llt.info() == Eigen::Success, ErrorKind::Degenerate,
            "sigma_K + sigma_yf is singular");

    PosteriorSummary out;
    // K = SK S^{-1} = (S^{-1} SK)' since both are symmetric.
    out.kalman_gain = llt.solve(SK).transpose();
    out.sigma_post = linalg::symmetrize(SK - out.kalman_gain * SK);
    out.mean = Trajectory::from_vector(1, out.kalman_gain * y_s_hat.stacked());

    Eigen::LLT<MatrixXd> yf(linalg::symmetrize(sigma_yf));
    if (yf.info() == Eigen::Success) {
        const MatrixXd I = MatrixXd::Identity(n, n);
        const MatrixXd info = yf.solve(I) + Eigen::LLT<MatrixXd>(SK).solve(I);
        out.information_form_gap = (out.sigma_post - info.inverse()).norm();
    } else {
        out.information_form_gap = std::numeric_limits<double>::quiet_NaN();
    }
    out.mutual_information = mutual_information(prior, sigma_yf);
    return out;
}

MutualInformationForms mutual_information_forms(const KernelPrior& prior, const MatrixXd& sigma_yf) {
    const auto n = static_cast<Index>(prior.size());
    require(sigma_yf.rows() == n && sigma_yf.cols() == n, ErrorKind::InputContract,
            "sigma_yf must match the prior size");
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    MutualInformationForms f{nan, nan};
    const auto ld_K = linalg::logdet_spd(prior.sigma_K);
    require(ld_K.has_value(), ErrorKind::InputContract, "prior covariance must be positive definite");

    // 1/2 logdet(I + SK Syf^{-1}) = 1/2 (logdet(SK + Syf) - logdet Syf)
    const auto ld_sum = linalg::logdet_spd(prior.sigma_K + sigma_yf);
    const auto ld_yf = linalg::logdet_spd(sigma_yf);
    if (ld_sum && ld_yf) f.from_data = 0.5 * (*ld_sum - *ld_yf);

    if (ld_sum) {
        Eigen::LLT<MatrixXd> llt(linalg::symmetrize(prior.sigma_K + sigma_yf));
        const MatrixXd post =
            linalg::symmetrize(prior.sigma_K - prior.sigma_K * llt.solve(prior.sigma_K));
        if (const auto ld_post = linalg::logdet_spd(post)) f.from_posterior = 0.5 * (*ld_K - *ld_post);
    }
    return f;
}

double mutual_information(const KernelPrior& prior, const MatrixXd& sigma_yf) {
    const auto f = mutual_information_forms(prior, sigma_yf);
    if (!std::isnan(f.from_data)) return f.from_data;
    if (!std::isnan(f.from_posterior)) return f.from_posterior;
    fail(ErrorKind::Degenerate, "mutual information undefined: sigma_yf and sigma_post are singular");
}

double information_term(double z, const KernelPrior& prior) {
    require(z > 0.0 && std::isfinite(z), ErrorKind::Domain, "information term needs z > 0");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(prior.sigma_K, Eigen::EigenvaluesOnly);
    const VectorXd& mu = es.eigenvalues();
    require(mu.minCoeff() > 0.0, ErrorKind::InputContract, "prior covariance must be positive definite");
    double f = -static_cast<double>(mu.size()) * std::log(z);
    for (Index i = 0; i < mu.size(); ++i) f += std::log1p(z / mu(i));
    return f;
}

}  // namespace ddsim
