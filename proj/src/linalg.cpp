#include "ddsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ddsim/error.hpp"

namespace ddsim::linalg {

double rank_threshold(const VectorXd& singular_values, Index rows, Index cols,
                      const RankOptions& opts) {
    if (opts.threshold) return *opts.threshold;
    const double smax = singular_values.size() > 0 ? singular_values.maxCoeff() : 0.0;
    return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() *
           smax;
}

namespace {

Index count_above(const VectorXd& sv, double thr) {
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thr) ++r;
    return r;
}

}  // namespace

Index numerical_rank(const MatrixXd& m, const RankOptions& opts) {
    if (m.size() == 0) return 0;
    Eigen::BDCSVD<MatrixXd> svd(m);
    const VectorXd& sv = svd.singularValues();
    const double thr = rank_threshold(sv, m.rows(), m.cols(), opts);
    if (sv.size() == 0 || sv.maxCoeff() == 0.0) return 0;
    return count_above(sv, thr);
}

MatrixXd pseudo_inverse(const MatrixXd& m, const RankOptions& opts) {
    if (m.size() == 0) return MatrixXd::Zero(m.cols(), m.rows());
    Eigen::BDCSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd& sv = svd.singularValues();
    const double thr = rank_threshold(sv, m.rows(), m.cols(), opts);
    VectorXd inv = VectorXd::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thr && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

VectorXd min_norm_solve(const MatrixXd& m, const VectorXd& rhs, const RankOptions& opts) {
    require(m.rows() == rhs.size(), ErrorKind::InputContract, "min_norm_solve: row mismatch");
    if (m.size() == 0) return VectorXd::Zero(m.cols());
    Eigen::BDCSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd& sv = svd.singularValues();
    const double thr = rank_threshold(sv, m.rows(), m.cols(), opts);
    VectorXd coeff = svd.matrixU().transpose() * rhs;
    for (Index i = 0; i < sv.size(); ++i)
        coeff(i) = (sv(i) > thr && sv(i) > 0.0) ? coeff(i) / sv(i) : 0.0;
    return svd.matrixV() * coeff;
}

bool in_column_span(const MatrixXd& m, const VectorXd& rhs, double tol, const RankOptions& opts) {
    if (rhs.size() == 0) return true;
    if (m.cols() == 0) return rhs.norm() <= tol;
    const VectorXd x = min_norm_solve(m, rhs, opts);
    return (m * x - rhs).norm() <= tol;
}

std::optional<double> logdet_spd(const MatrixXd& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    if (m.rows() == 0) return 0.0;
    Eigen::LLT<MatrixXd> llt(symmetrize(m));
    if (llt.info() != Eigen::Success) return std::nullopt;
    const MatrixXd& lower = llt.matrixLLT();
    double acc = 0.0;
    for (Index i = 0; i < lower.rows(); ++i) {
        const double d = lower(i, i);
        if (!(d > 0.0)) return std::nullopt;
        acc += std::log(d);
    }
    return 2.0 * acc;
}

MatrixXd symmetrize(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

EqualityQpSolution solve_equality_qp(const MatrixXd& H, const VectorXd& c, const MatrixXd& A,
                                     const VectorXd& b, const RankOptions& opts) {
    const Index n = H.rows();
    require(H.cols() == n && c.size() == n, ErrorKind::InputContract,
            "solve_equality_qp: Hessian/gradient shape mismatch");
    require(A.cols() == n && A.rows() == b.size(), ErrorKind::InputContract,
            "solve_equality_qp: constraint shape mismatch");
    const Index m = A.rows();

    EqualityQpSolution out;
    out.rhs_norm = std::sqrt(c.squaredNorm() + b.squaredNorm());

    // A = U S V'; range(A') spanned by V_r, null space by the trailing columns of V.
    MatrixXd Ur, Vr, Z;
    VectorXd sr;
    if (m > 0 && n > 0) {
        Eigen::BDCSVD<MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const VectorXd& sv = svd.singularValues();
        const double thr = rank_threshold(sv, A.rows(), A.cols(), opts);
        const Index r = (sv.size() == 0 || sv.maxCoeff() == 0.0) ? 0 : count_above(sv, thr);
        out.constraint_rank = r;
        Ur = svd.matrixU().leftCols(r);
        Vr = svd.matrixV().leftCols(r);
        sr = sv.head(r);
        Z = svd.matrixV().rightCols(n - r);
    } else {
        Ur = MatrixXd::Zero(m, 0);
        Vr = MatrixXd::Zero(n, 0);
        sr = VectorXd::Zero(0);
        Z = MatrixXd::Identity(n, n);
    }

    VectorXd xp = VectorXd::Zero(n);
    if (sr.size() > 0) xp = Vr * ((Ur.transpose() * b).array() / sr.array()).matrix();

    VectorXd x = xp;
    if (Z.cols() > 0) {
        const MatrixXd reduced = symmetrize(Z.transpose() * H * Z);
        const VectorXd rrhs = Z.transpose() * (c - H * xp);
        Eigen::LDLT<MatrixXd> ldlt(reduced);
        VectorXd w;
        bool ok = false;
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
            const double dmax = ldlt.vectorD().cwiseAbs().maxCoeff();
            const double dmin = ldlt.vectorD().minCoeff();
            if (dmin > static_cast<double>(reduced.rows()) * 1e-14 * std::max(dmax, 1e-300)) {
                w = ldlt.solve(rrhs);
                ok = true;
            }
        }
        if (!ok) w = min_norm_solve(reduced, rrhs, opts);
        x += Z * w;
    }

    const VectorXd stat_rhs = c - H * x;
    VectorXd nu = VectorXd::Zero(m);
    if (sr.size() > 0) nu = Ur * ((Vr.transpose() * stat_rhs).array() / sr.array()).matrix();

    out.x = x;
    out.multipliers = nu;
    out.constraint_residual = (A * x - b).norm();
    out.stationarity_residual = (H * x + A.transpose() * nu - c).norm();
    out.kkt_residual = std::sqrt(out.constraint_residual * out.constraint_residual +
                                 out.stationarity_residual * out.stationarity_residual);
    return out;
}

}  // namespace ddsim::linalg
