#include "ddsim/smm.hpp"

#include <sstream>

#include "ddsim/error.hpp"
#include "ddsim/rng.hpp"

namespace ddsim {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

Trajectory noise_inject(const Trajectory& y, const NoiseModel& nm, std::uint64_t realization) {
    require(y.channels() == 1, ErrorKind::Unsupported, "noise injection supports scalar outputs only");
    require(nm.sigma2 >= 0.0, ErrorKind::Domain, "noise variance must be nonnegative");
    Trajectory out = y;
    if (nm.sigma2 == 0.0) return out;
    RandomStream rng(nm.seed, {streams::noise, realization});
    const double sd = std::sqrt(nm.sigma2);
    for (double& v : out.values()) v += sd * rng.normal();
    return out;
}

MatrixXd covariance(const VectorXd& g, double sigma2, std::size_t L, MatrixKind kind) {
    require(g.size() >= 1, ErrorKind::InputContract, "covariance needs a nonempty g");
    require(L >= 1, ErrorKind::InputContract, "covariance needs L >= 1");
    const auto n = static_cast<Index>(L);
    if (kind == MatrixKind::Page) return sigma2 * g.squaredNorm() * MatrixXd::Identity(n, n);
    const Index m = g.size();
    MatrixXd S = MatrixXd::Zero(n, n);
    for (Index lagk = 0; lagk < std::min(n, m); ++lagk) {
        const double v = sigma2 * g.head(m - lagk).dot(g.tail(m - lagk));
        for (Index i = 0; i + lagk < n; ++i) {
            S(i, i + lagk) = v;
            S(i + lagk, i) = v;
        }
    }
    return S;
}

double smm_objective(const VectorXd& g, const PartitionedData& part, const SimulationTask& task,
                     double sigma2, const SmmObjectiveOptions& opts) {
    require(task.ny() == 1, ErrorKind::Unsupported, "SMM objective supports scalar outputs only");
    require(g.size() == static_cast<Index>(part.cols()), ErrorKind::InputContract,
            "g length must equal the data matrix column count");
    require(task.L0() == part.L0 && task.Ls() == part.Ls, ErrorKind::InputContract,
            "task horizons do not match the data partition");
    if (opts.check_feasibility) {
        const VectorXd ubar = task.input_stack();
        const double res = (part.U() * g - ubar).norm();
        const double tol = opts.feasibility_tolerance * (1.0 + ubar.norm());
        if (res > tol) {
            std::ostringstream os;
            os << "g violates the input constraints (residual " << res << " > " << tol << ")";
            fail(ErrorKind::Precondition, os.str());
        }
    }
    const std::size_t L = part.L();
    MatrixXd S = covariance(g, sigma2, L, part.kind);
    VectorXd r = VectorXd::Zero(static_cast<Index>(L));
    r.head(static_cast<Index>(part.L0)) = part.Yp * g - task.y_ini.stacked();

    Eigen::LLT<MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) {
        S.diagonal().array() += 1e-12 * S.trace() / static_cast<double>(L);
        llt.compute(S);
    }
    const auto logdet = linalg::logdet_spd(S);
    if (llt.info() != Eigen::Success || !logdet)
        fail(ErrorKind::Degenerate, "Sigma_y is not positive definite after regularization");
    return *logdet + r.dot(llt.solve(r));
}

SmmSolution solve_smm_relaxed(const PartitionedData& part, const SimulationTask& task,
                              double sigma2, const SmmOptions& opts) {
    task.validate();
    require(task.ny() == 1, ErrorKind::Unsupported, "SMM estimator supports scalar outputs only");
    require(sigma2 >= 0.0, ErrorKind::Domain, "noise variance must be nonnegative");
    require(task.L0() == part.L0 && task.Ls() == part.Ls, ErrorKind::InputContract,
            "task horizons do not match the data partition");
    require(static_cast<Index>(task.L0() * task.nu()) == part.Up.rows(), ErrorKind::InputContract,
            "task input channels do not match the data");

    const std::size_t L = part.L();
    const auto M = static_cast<Index>(part.cols());
    const VectorXd y_ini = task.y_ini.stacked();
    const MatrixXd F = static_cast<double>(L) * sigma2 * MatrixXd::Identity(M, M) +
                       part.Yp.transpose() * part.Yp;
    const MatrixXd U = part.U();
    const VectorXd ubar = task.input_stack();

    const auto qp = linalg::solve_equality_qp(F, part.Yp.transpose() * y_ini, U, ubar, opts.rank);
    const double tol = opts.relative_tolerance * (1.0 + qp.rhs_norm);
    if (qp.kkt_residual > tol) {
        std::ostringstream os;
        os << "saddle-point system is singular and inconsistent: constraint rank "
           << qp.constraint_rank << " of " << U.rows() << " rows (defect "
           << U.rows() - qp.constraint_rank << "), residual " << qp.kkt_residual << " > " << tol;
        fail(ErrorKind::Degenerate, os.str());
    }

    SmmSolution sol;
    sol.g = qp.x;
    sol.nu = qp.multipliers;
    sol.kkt_residual = qp.kkt_residual;
    sol.constraint_rank = static_cast<std::size_t>(qp.constraint_rank);
    sol.y_s_hat = Trajectory::from_vector(1, part.Yf * sol.g);
    sol.sigma_y = covariance(sol.g, sigma2, L, part.kind);
    const auto Ls = static_cast<Index>(part.Ls);
    sol.sigma_yf = sol.sigma_y.bottomRightCorner(Ls, Ls);
    sol.objective = static_cast<double>(L) * sigma2 * sol.g.squaredNorm() +
                    (part.Yp * sol.g - y_ini).squaredNorm();
    return sol;
}

}  // namespace ddsim
