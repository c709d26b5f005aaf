#include "ddsim/design.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "ddsim/error.hpp"
#include "ddsim/linalg.hpp"
#include "ddsim/parallel.hpp"
#include "ddsim/rng.hpp"

namespace ddsim {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Baseline model

BaselineModel estimate_baseline_fir(const Trajectory& u_prior, const Trajectory& y_prior,
                                    std::size_t n_h, const FirOptions& opts) {
    require(u_prior.channels() == 1 && y_prior.channels() == 1, ErrorKind::Unsupported,
            "FIR estimation supports scalar channels only");
    require(u_prior.length() == y_prior.length(), ErrorKind::InputContract,
            "prior input and output must have the same length");
    require(n_h >= 1, ErrorKind::InputContract, "FIR length must be >= 1");
    require(u_prior.length() >= n_h, ErrorKind::InsufficientData,
            "prior experiment shorter than the FIR length");
    const auto T = static_cast<Index>(u_prior.length());
    const auto n = static_cast<Index>(n_h);
    MatrixXd Phi = MatrixXd::Zero(T, n);
    for (Index t = 0; t < T; ++t)
        for (Index k = 0; k <= std::min(t, n - 1); ++k) Phi(t, k) = u_prior(static_cast<std::size_t>(t - k));

    const double lambda = opts.lambda.value_or(1e-6 * u_prior.squared_norm());
    require(lambda >= 0.0, ErrorKind::InputContract, "ridge weight must be nonnegative");
    MatrixXd A(T + n, n);
    A << Phi, std::sqrt(lambda) * MatrixXd::Identity(n, n);
    VectorXd b = VectorXd::Zero(T + n);
    b.head(T) = y_prior.stacked();
    if (linalg::numerical_rank(A) < n)
        fail(ErrorKind::Estimation, "FIR regressor is rank deficient after regularization");
    const VectorXd h = A.colPivHouseholderQr().solve(b);
    return {std::vector<double>(h.data(), h.data() + h.size())};
}

namespace {

VectorXd convolve(const std::vector<double>& h, const VectorXd& u) {
    const Index N = u.size();
    const auto nh = static_cast<Index>(h.size());
    VectorXd y = VectorXd::Zero(N);
    for (Index t = 0; t < N; ++t) {
        double acc = 0.0;
        for (Index k = 0; k <= std::min(t, nh - 1); ++k) acc += h[static_cast<std::size_t>(k)] * u(t - k);
        y(t) = acc;
    }
    return y;
}

}  // namespace

Trajectory predicted_output(const BaselineModel& baseline, const Trajectory& u_d) {
    require(u_d.channels() == 1, ErrorKind::Unsupported, "baseline prediction is scalar");
    require(baseline.n_h() >= 1, ErrorKind::InputContract, "baseline model is empty");
    return Trajectory::from_vector(1, convolve(baseline.h, u_d.stacked()));
}

MatrixXd predicted_Yp(const BaselineModel& baseline, const Trajectory& u_d, std::size_t L0,
                      std::size_t L, MatrixKind kind) {
    require(L0 >= 1 && L0 < L, ErrorKind::InputContract, "need 1 <= L0 < L");
    const SignalMatrix m = build_signal_matrix(kind, predicted_output(baseline, u_d), L);
    return m.block_rows(0, L0);
}

// ---------------------------------------------------------------------------
// Problem assembly

void DesignProblem::validate() const {
    task.validate();
    require(task.nu() == 1 && task.ny() == 1, ErrorKind::Unsupported,
            "input design supports scalar input and output only");
    require(baseline.n_h() >= 1, ErrorKind::InputContract, "baseline model is empty");
    for (double v : baseline.h)
        require(std::isfinite(v), ErrorKind::InputContract, "baseline coefficients must be finite");
    require(sigma2 >= 0.0, ErrorKind::Domain, "noise variance must be nonnegative");
    require(E0 > 0.0, ErrorKind::Domain, "energy budget E0 must be positive");
    if (N < task.L()) {
        std::ostringstream os;
        os << "experiment length " << N << " is shorter than L = " << task.L();
        fail(ErrorKind::InsufficientData, os.str());
    }
}

MatrixXd KktSystem::saddle_matrix() const {
    const Index M = F.rows();
    const Index m = U.rows();
    MatrixXd K = MatrixXd::Zero(M + m, M + m);
    K.topLeftCorner(M, M) = F;
    K.topRightCorner(M, m) = U.transpose();
    K.bottomLeftCorner(m, M) = U;
    return K;
}

KktSystem assemble_kkt(const DesignProblem& problem, const Trajectory& u_d) {
    problem.validate();
    require(u_d.channels() == 1 && u_d.length() == problem.N, ErrorKind::InputContract,
            "design input must be scalar with length N");
    const std::size_t L = problem.L();
    KktSystem k;
    k.U = build_signal_matrix(problem.kind, u_d, L).data;
    k.Yp = predicted_Yp(problem.baseline, u_d, problem.task.L0(), L, problem.kind);
    const Index M = k.U.cols();
    k.F = static_cast<double>(L) * problem.sigma2 * MatrixXd::Identity(M, M) + k.Yp.transpose() * k.Yp;
    k.rhs.resize(M + static_cast<Index>(L));
    k.rhs << k.Yp.transpose() * problem.task.y_ini.stacked(), problem.task.input_stack();
    return k;
}

namespace {

linalg::EqualityQpSolution solve_kkt(const KktSystem& k) {
    const Index M = k.F.rows();
    return linalg::solve_equality_qp(k.F, k.rhs.head(M), k.U, k.rhs.tail(k.U.rows()));
}

}  // namespace

double design_objective(const DesignProblem& problem, const Trajectory& u_d) {
    const KktSystem k = assemble_kkt(problem, u_d);
    const auto qp = solve_kkt(k);
    const double tol = 1e-6 * (1.0 + qp.rhs_norm);
    if (qp.kkt_residual > tol) {
        std::ostringstream os;
        os << "saddle-point system has no solution at this input (constraint rank "
           << qp.constraint_rank << " of " << k.U.rows() << ", residual " << qp.kkt_residual << ")";
        fail(ErrorKind::Degenerate, os.str());
    }
    return qp.x.squaredNorm();
}

// ---------------------------------------------------------------------------
// Full-space augmented Lagrangian

namespace design_detail {

AugmentedLagrangian::AugmentedLagrangian(const DesignProblem& problem)
    : N_(problem.N),
      M_(problem.M()),
      L_(problem.L()),
      L0_(problem.task.L0()),
      kind_(problem.kind),
      reg_(static_cast<double>(problem.L()) * problem.sigma2),
      h_(problem.baseline.h),
      y_ini_(problem.task.y_ini.stacked()),
      u_bar_(problem.task.input_stack()) {
    problem.validate();
}

MatrixXd AugmentedLagrangian::input_matrix(const VectorXd& u) const {
    MatrixXd U(static_cast<Index>(L_), static_cast<Index>(M_));
    for (std::size_t j = 0; j < M_; ++j)
        for (std::size_t i = 0; i < L_; ++i)
            U(static_cast<Index>(i), static_cast<Index>(j)) = u(static_cast<Index>(column_start(j) + i));
    return U;
}

MatrixXd AugmentedLagrangian::predicted_past(const VectorXd& u) const {
    const VectorXd yhat = convolve(h_, u);
    MatrixXd Y(static_cast<Index>(L0_), static_cast<Index>(M_));
    for (std::size_t j = 0; j < M_; ++j)
        for (std::size_t i = 0; i < L0_; ++i)
            Y(static_cast<Index>(i), static_cast<Index>(j)) = yhat(static_cast<Index>(column_start(j) + i));
    return Y;
}

VectorXd AugmentedLagrangian::constraints(const VectorXd& x) const {
    const auto N = static_cast<Index>(N_), M = static_cast<Index>(M_), L = static_cast<Index>(L_);
    const VectorXd u = x.head(N);
    const auto g = x.segment(N, M);
    const auto nu = x.tail(L);
    const MatrixXd U = input_matrix(u);
    const MatrixXd Y = predicted_past(u);
    VectorXd c(M + L);
    c.head(M) = reg_ * g + Y.transpose() * (Y * g - y_ini_) + U.transpose() * nu;
    c.tail(L) = U * g - u_bar_;
    return c;
}

MatrixXd AugmentedLagrangian::constraint_jacobian(const VectorXd& x) const {
    const auto N = static_cast<Index>(N_), M = static_cast<Index>(M_), L = static_cast<Index>(L_);
    const auto L0 = static_cast<Index>(L0_);
    const auto nh = static_cast<Index>(h_.size());
    const VectorXd u = x.head(N);
    const VectorXd g = x.segment(N, M);
    const VectorXd nu = x.tail(L);
    const MatrixXd U = input_matrix(u);
    const MatrixXd Y = predicted_past(u);
    const VectorXd r = Y * g - y_ini_;

    MatrixXd J = MatrixXd::Zero(M + L, static_cast<Index>(size()));
    MatrixXd dY(L0, M);
    for (Index k = 0; k < N; ++k) {
        // Perturbing u_k shifts h into yhat starting at sample k.
        for (Index j = 0; j < M; ++j) {
            const auto s = static_cast<Index>(column_start(static_cast<std::size_t>(j)));
            for (Index i = 0; i < L0; ++i) {
                const Index lagk = s + i - k;
                dY(i, j) = (lagk >= 0 && lagk < nh) ? h_[static_cast<std::size_t>(lagk)] : 0.0;
            }
        }
        VectorXd dc1 = Y.transpose() * (dY * g) + dY.transpose() * r;
        VectorXd dc2 = VectorXd::Zero(L);
        for (Index j = 0; j < M; ++j) {
            const Index i = k - static_cast<Index>(column_start(static_cast<std::size_t>(j)));
            if (i >= 0 && i < L) {
                dc1(j) += nu(i);
                dc2(i) += g(j);
            }
        }
        J.col(k).head(M) = dc1;
        J.col(k).tail(L) = dc2;
    }
    J.block(0, N, M, M) = reg_ * MatrixXd::Identity(M, M) + Y.transpose() * Y;
    J.block(M, N, L, M) = U;
    J.block(0, N + M, M, L) = U.transpose();
    return J;
}

double AugmentedLagrangian::value_and_gradient(const VectorXd& x, const VectorXd& lambda, double mu,
                                               VectorXd& grad) const {
    const auto N = static_cast<Index>(N_), M = static_cast<Index>(M_), L = static_cast<Index>(L_);
    const auto L0 = static_cast<Index>(L0_);
    const auto nh = static_cast<Index>(h_.size());
    const VectorXd u = x.head(N);
    const VectorXd g = x.segment(N, M);
    const VectorXd nu = x.tail(L);
    const MatrixXd U = input_matrix(u);
    const MatrixXd Y = predicted_past(u);
    const VectorXd r = Y * g - y_ini_;
    const VectorXd c1 = reg_ * g + Y.transpose() * r + U.transpose() * nu;
    const VectorXd c2 = U * g - u_bar_;
    const auto lam1 = lambda.head(M);
    const auto lam2 = lambda.tail(L);

    const double value = g.squaredNorm() + residual_weight_ * r.squaredNorm() + lam1.dot(c1) + lam2.dot(c2) +
                         0.5 * mu * (c1.squaredNorm() + c2.squaredNorm());
    const VectorXd a1 = lam1 + mu * c1;
    const VectorXd a2 = lam2 + mu * c2;
    const VectorXd Ya1 = Y * a1;

    grad.resize(x.size());
    grad.segment(N, M) = 2.0 * g + 2.0 * residual_weight_ * Y.transpose() * r + reg_ * a1 + Y.transpose() * Ya1 +
                         U.transpose() * a2;
    grad.tail(L) = U * a1;

    // dPhi/dY = r a1' + (Y a1 + 2 w r) g',  dPhi/dU = nu a1' + a2 g'
    VectorXd gu = VectorXd::Zero(N);
    VectorXd gy = VectorXd::Zero(N);
    for (Index j = 0; j < M; ++j) {
        const auto s = static_cast<Index>(column_start(static_cast<std::size_t>(j)));
        for (Index i = 0; i < L; ++i) gu(s + i) += nu(i) * a1(j) + a2(i) * g(j);
        for (Index i = 0; i < L0; ++i)
            gy(s + i) += r(i) * a1(j) + (Ya1(i) + 2.0 * residual_weight_ * r(i)) * g(j);
    }
    // Adjoint of the causal convolution.
    for (Index s = 0; s < N; ++s) {
        double acc = 0.0;
        for (Index k = 0; k < nh && s + k < N; ++k) acc += h_[static_cast<std::size_t>(k)] * gy(s + k);
        gu(s) += acc;
    }
    grad.head(N) = gu;
    return value;
}

}  // namespace design_detail

namespace {

using design_detail::AugmentedLagrangian;

struct BallProjection {
    Index n;         // leading entries constrained
    double radius;

    void operator()(VectorXd& x) const {
        const double nrm = x.head(n).norm();
        if (nrm > radius) x.head(n) *= radius / nrm;
    }
};

struct InnerResult {
    std::size_t iterations = 0;
    double projected_gradient = 0.0;
};

// Projected limited-memory BFGS on  min phi(x)  s.t.  ||x_head|| <= radius.
template <typename Phi>
InnerResult projected_lbfgs(Phi&& phi, const BallProjection& proj, VectorXd& x, double tol,
                            std::size_t max_iter, std::size_t memory) {
    InnerResult res;
    VectorXd grad;
    double f = phi(x, grad);
    std::deque<VectorXd> S, Yv;
    std::deque<double> rho;
    auto projected_gradient = [&](const VectorXd& xx, const VectorXd& gg) {
        VectorXd t = xx - gg;
        proj(t);
        return (t - xx).lpNorm<Eigen::Infinity>();
    };
    VectorXd xt, gt;
    for (; res.iterations < max_iter; ++res.iterations) {
        res.projected_gradient = projected_gradient(x, grad);
        if (res.projected_gradient <= tol) break;

        VectorXd d = -grad;
        if (!S.empty()) {
            std::vector<double> alpha(S.size());
            for (std::size_t i = S.size(); i-- > 0;) {
                alpha[i] = rho[i] * S[i].dot(d);
                d -= alpha[i] * Yv[i];
            }
            d *= S.back().dot(Yv.back()) / Yv.back().squaredNorm();
            for (std::size_t i = 0; i < S.size(); ++i) {
                const double beta = rho[i] * Yv[i].dot(d);
                d += (alpha[i] - beta) * S[i];
            }
        }
        bool accepted = false;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            if (attempt == 1) {
                // Fall back to a scaled projected-gradient step and drop curvature pairs.
                S.clear();
                Yv.clear();
                rho.clear();
                d = -grad / std::max(1.0, grad.norm());
            }
            double t = 1.0;
            if (S.empty() && attempt == 0) t = 1.0 / std::max(1.0, grad.norm());
            for (int ls = 0; ls < 50; ++ls, t *= 0.5) {
                xt = x + t * d;
                proj(xt);
                const double decrease = grad.dot(xt - x);
                if (decrease >= 0.0) continue;
                const double ft = phi(xt, gt);
                if (std::isfinite(ft) && ft <= f + 1e-4 * decrease) {
                    accepted = true;
                    break;
                }
            }
        }
        if (!accepted) break;
        VectorXd s = xt - x;
        VectorXd y = gt - grad;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (S.size() == memory) {
                S.pop_front();
                Yv.pop_front();
                rho.pop_front();
            }
            S.push_back(std::move(s));
            Yv.push_back(std::move(y));
            rho.push_back(1.0 / sy);
        }
        x = xt;
        grad = gt;
        f = phi(x, grad);
    }
    res.projected_gradient = projected_gradient(x, grad);
    return res;
}

double rhs_scale(const AugmentedLagrangian& al, const DesignProblem& problem, const VectorXd& u) {
    const MatrixXd Y = al.predicted_past(u);
    const VectorXd top = Y.transpose() * problem.task.y_ini.stacked();
    return std::sqrt(top.squaredNorm() + problem.task.input_stack().squaredNorm());
}

// Gauss-Newton steps with minimum-norm corrections onto c(x) = 0, keeping the
// energy on the boundary when it starts there.
std::size_t restore_feasibility(const AugmentedLagrangian& al, const DesignProblem& problem,
                                VectorXd& x) {
    const auto N = static_cast<Index>(al.N());
    const double budget = problem.energy_budget();
    const bool on_boundary = x.head(N).squaredNorm() >= budget * (1.0 - 1e-6);
    std::size_t steps = 0;
    double best = std::numeric_limits<double>::infinity();
    VectorXd best_x = x;
    for (; steps < 30; ++steps) {
        VectorXd c = al.constraints(x);
        MatrixXd J = al.constraint_jacobian(x);
        if (on_boundary) {
            c.conservativeResize(c.size() + 1);
            c(c.size() - 1) = x.head(N).squaredNorm() - budget;
            J.conservativeResize(J.rows() + 1, Eigen::NoChange);
            J.row(J.rows() - 1).setZero();
            J.row(J.rows() - 1).head(N) = 2.0 * x.head(N).transpose();
        }
        const double cn = c.norm();
        if (cn < best) {
            best = cn;
            best_x = x;
        }
        if (cn <= 1e-14 * (1.0 + rhs_scale(al, problem, x.head(N)))) break;
        x -= linalg::min_norm_solve(J, c);
    }
    if (al.constraints(x).norm() > best) x = best_x;
    return steps;
}

}  // namespace

Trajectory random_design_start(const DesignProblem& problem, std::uint64_t seed, std::size_t index) {
    RandomStream rng(seed, {streams::design_start, static_cast<std::uint64_t>(index)});
    std::vector<double> v = rng.normal_vector(problem.N);
    Eigen::Map<VectorXd> u(v.data(), static_cast<Index>(v.size()));
    const double nrm = u.norm();
    if (nrm > 0.0) u *= std::sqrt(problem.energy_budget()) / nrm;
    return Trajectory::scalar(std::move(v));
}

namespace {

struct PhaseResult {
    std::size_t iterations = 0;
    std::size_t outer_iterations = 0;
    bool converged = false;
};

PhaseResult run_augmented_lagrangian(const AugmentedLagrangian& al, const DesignProblem& problem,
                                     const BallProjection& proj, VectorXd& x, const DesignOptions& opts) {
    const auto N = static_cast<Index>(al.N());
    PhaseResult out;
    VectorXd lambda = VectorXd::Zero(static_cast<Index>(al.constraint_count()));
    double mu = 10.0;
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t outer = 0; outer < opts.max_outer_iterations; ++outer) {
        const double tol = std::max(1e-10, 1e-3 * std::pow(0.2, static_cast<double>(outer)));
        auto phi = [&](const VectorXd& xx, VectorXd& gg) { return al.value_and_gradient(xx, lambda, mu, gg); };
        const InnerResult inner = projected_lbfgs(phi, proj, x, tol, opts.max_inner_iterations, opts.lbfgs_memory);
        out.iterations += inner.iterations;
        out.outer_iterations = outer + 1;
        const VectorXd c = al.constraints(x);
        const double cn = c.norm();
        lambda += mu * c;
        if (cn <= opts.constraint_tolerance * (1.0 + rhs_scale(al, problem, x.head(N))) &&
            inner.projected_gradient <= opts.stationarity_tolerance) {
            out.converged = true;
            break;
        }
        if (cn > 0.25 * previous && cn > opts.constraint_tolerance) mu = std::min(mu * 10.0, 1e8);
        previous = cn;
    }
    return out;
}

double past_residual(const DesignProblem& problem, const DesignResult& r) {
    const MatrixXd Y = predicted_Yp(problem.baseline, r.u_d_opt, problem.task.L0(), problem.L(), problem.kind);
    return (Y * r.g_opt - problem.task.y_ini.stacked()).squaredNorm();
}

}  // namespace

DesignResult solve_design(const DesignProblem& problem, const Trajectory& init_u,
                          const DesignOptions& opts) {
    problem.validate();
    require(init_u.channels() == 1 && init_u.length() == problem.N, ErrorKind::InputContract,
            "initial design input must be scalar with length N");
    AugmentedLagrangian al(problem);
    const auto N = static_cast<Index>(al.N());
    const auto M = static_cast<Index>(al.M());
    const auto L = static_cast<Index>(al.L());
    const double radius = std::sqrt(problem.energy_budget());
    const BallProjection proj{N, radius};

    VectorXd x(static_cast<Index>(al.size()));
    x.head(N) = init_u.stacked();
    proj(x);
    {
        const KktSystem k = assemble_kkt(problem, Trajectory::from_vector(1, x.head(N)));
        const auto qp = solve_kkt(k);
        x.segment(N, M) = qp.x;
        x.tail(L) = qp.multipliers;
    }

    auto finish = [&](const VectorXd& xx, DesignResult& result) {
        VectorXd u = xx.head(N);
        if (u.norm() > radius) u *= radius / u.norm();
        result.u_d_opt = Trajectory::from_vector(1, u);
        const KktSystem k = assemble_kkt(problem, result.u_d_opt);
        const auto qp = solve_kkt(k);
        result.g_opt = qp.x;
        result.nu_opt = qp.multipliers;
        result.kkt_residual = qp.kkt_residual;
        result.rhs_norm = qp.rhs_norm;
        result.objective = qp.x.squaredNorm();
        result.energy_used = u.squaredNorm();
        return qp.kkt_residual <= opts.kkt_tolerance * (1.0 + qp.rhs_norm);
    };

    DesignResult result;
    const PhaseResult phase = run_augmented_lagrangian(al, problem, proj, x, opts);
    result.solver_report.iterations = phase.iterations;
    result.solver_report.outer_iterations = phase.outer_iterations;
    bool feasible = finish(x, result);
    if (!feasible || !phase.converged) {
        result.solver_report.restoration_steps = restore_feasibility(al, problem, x);
        feasible = finish(x, result);
    }
    bool converged = phase.converged && feasible;

    // Among inputs whose objective is within the tie tolerance, prefer the one
    // whose past-output residual under the baseline model is smallest.
    if (feasible && opts.tie_break_tolerance > 0.0) {
        double residual = past_residual(problem, result);
        for (double weight : {10.0, 1.0, 0.1}) {
            if (residual <= 1e-14) break;
            al.set_residual_weight(weight);
            VectorXd xr = x;
            const PhaseResult refine = run_augmented_lagrangian(al, problem, proj, xr, opts);
            result.solver_report.iterations += refine.iterations;
            result.solver_report.outer_iterations += refine.outer_iterations;
            if (!refine.converged) result.solver_report.restoration_steps += restore_feasibility(al, problem, xr);
            DesignResult candidate = result;
            if (!finish(xr, candidate)) continue;
            const double cand_residual = past_residual(problem, candidate);
            if (candidate.objective <= (1.0 + opts.tie_break_tolerance) * result.objective &&
                cand_residual < residual) {
                candidate.solver_report = result.solver_report;
                result = std::move(candidate);
                residual = cand_residual;
                x = xr;
                converged = converged || refine.converged;
                break;
            }
        }
        result.past_residual = residual;
    }

    result.solver_report.converged = converged;
    std::ostringstream msg;
    if (converged)
        msg << "converged";
    else if (!feasible)
        msg << "saddle-point residual " << result.kkt_residual << " above tolerance";
    else
        msg << "iteration budget exhausted before the constraint tolerance was met";
    result.solver_report.message = msg.str();
    return result;
}

DesignResult design_input(const DesignProblem& problem, const DesignOptions& opts) {
    problem.validate();
    const std::size_t starts = std::max<std::size_t>(1, opts.multistart);
    std::vector<DesignResult> runs(starts);
    std::vector<std::string> errors(starts);
    parallel_for(starts, opts.threads, [&](std::size_t i) {
        try {
            runs[i] = solve_design(problem, random_design_start(problem, opts.seed, i), opts);
            runs[i].start_index = i;
        } catch (const Error& e) {
            errors[i] = e.what();
            runs[i].objective = std::numeric_limits<double>::infinity();
        }
    });
    std::size_t best = starts;
    for (int pass = 0; pass < 2 && best == starts; ++pass) {
        for (std::size_t i = 0; i < starts; ++i) {
            if (!std::isfinite(runs[i].objective)) continue;
            const bool feasible =
                runs[i].kkt_residual <= opts.kkt_tolerance * (1.0 + runs[i].rhs_norm);
            if (pass == 0 && !feasible) continue;
            if (best == starts || runs[i].objective < runs[best].objective) best = i;
        }
    }
    if (best < starts && opts.tie_break_tolerance > 0.0) {
        const double limit = (1.0 + opts.tie_break_tolerance) * runs[best].objective;
        const bool need_feasible = runs[best].kkt_residual <= opts.kkt_tolerance * (1.0 + runs[best].rhs_norm);
        for (std::size_t i = 0; i < starts; ++i) {
            if (!std::isfinite(runs[i].objective) || runs[i].objective > limit) continue;
            if (need_feasible && runs[i].kkt_residual > opts.kkt_tolerance * (1.0 + runs[i].rhs_norm)) continue;
            if (runs[i].past_residual < runs[best].past_residual) best = i;
        }
    }
    if (best == starts) {
        std::string all;
        for (const auto& e : errors) all += (all.empty() ? "" : "; ") + e;
        fail(ErrorKind::SolverFailure, "every design start failed: " + all);
    }
    return runs[best];
}

}  // namespace ddsim
