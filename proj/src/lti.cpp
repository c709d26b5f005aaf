#include "ddsim/lti.hpp"

#include <sstream>
#include <vector>

#include "ddsim/error.hpp"

namespace ddsim {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

StateSpaceModel::StateSpaceModel(MatrixXd A, MatrixXd B, MatrixXd C, MatrixXd D)
    : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {
    require(A_.rows() == A_.cols(), ErrorKind::InputContract, "A must be square");
    require(A_.rows() >= 1, ErrorKind::InputContract, "state dimension must be positive");
    require(B_.rows() == A_.rows() && B_.cols() >= 1, ErrorKind::InputContract,
            "B must have nx rows and at least one column");
    require(C_.cols() == A_.rows() && C_.rows() >= 1, ErrorKind::InputContract,
            "C must have nx columns and at least one row");
    require(D_.rows() == C_.rows() && D_.cols() == B_.cols(), ErrorKind::InputContract,
            "D must be ny x nu");
    require(A_.allFinite() && B_.allFinite() && C_.allFinite() && D_.allFinite(),
            ErrorKind::InputContract, "model matrices must be finite");
}

bool StateSpaceModel::is_minimal(const linalg::RankOptions& opts) const {
    const auto n = static_cast<Index>(nx());
    return linalg::numerical_rank(observability(*this, nx()), opts) == n &&
           linalg::numerical_rank(controllability_rev(*this, nx()), opts) == n;
}

SimulationResult simulate(const StateSpaceModel& model, const VectorXd& x0, const Trajectory& u) {
    require(static_cast<std::size_t>(x0.size()) == model.nx(), ErrorKind::InputContract,
            "x0 must have nx entries");
    require(u.channels() == model.nu(), ErrorKind::InputContract,
            "input channel count must equal nu");
    const std::size_t T = u.length();
    SimulationResult out{Trajectory(model.ny(), T), Trajectory(model.nx(), T + 1)};
    VectorXd x = x0;
    for (std::size_t t = 0; t <= T; ++t) {
        for (std::size_t i = 0; i < model.nx(); ++i) out.x(t, i) = x(static_cast<Index>(i));
        if (t == T) break;
        const auto ut = Eigen::Map<const VectorXd>(u.sample(t).data(), static_cast<Index>(model.nu()));
        const VectorXd yt = model.C() * x + model.D() * ut;
        for (std::size_t i = 0; i < model.ny(); ++i) out.y(t, i) = yt(static_cast<Index>(i));
        x = model.A() * x + model.B() * ut;
    }
    return out;
}

MatrixXd toeplitz_matrix(const StateSpaceModel& model, std::size_t horizon) {
    require(horizon >= 1, ErrorKind::InputContract, "Toeplitz horizon must be >= 1");
    const auto ny = static_cast<Index>(model.ny());
    const auto nu = static_cast<Index>(model.nu());
    const auto h = static_cast<Index>(horizon);
    // markov[k] = D for k = 0, C A^{k-1} B otherwise.
    std::vector<MatrixXd> markov;
    markov.reserve(horizon);
    markov.push_back(model.D());
    MatrixXd AkB = model.B();
    for (Index k = 1; k < h; ++k) {
        markov.push_back(model.C() * AkB);
        AkB = model.A() * AkB;
    }
    MatrixXd T = MatrixXd::Zero(h * ny, h * nu);
    for (Index r = 0; r < h; ++r)
        for (Index c = 0; c <= r; ++c)
            T.block(r * ny, c * nu, ny, nu) = markov[static_cast<std::size_t>(r - c)];
    return T;
}

MatrixXd observability(const StateSpaceModel& model, std::size_t horizon) {
    require(horizon >= 1, ErrorKind::InputContract, "observability horizon must be >= 1");
    const auto ny = static_cast<Index>(model.ny());
    const auto nx = static_cast<Index>(model.nx());
    MatrixXd O(static_cast<Index>(horizon) * ny, nx);
    MatrixXd CAk = model.C();
    for (Index k = 0; k < static_cast<Index>(horizon); ++k) {
        O.middleRows(k * ny, ny) = CAk;
        CAk = CAk * model.A();
    }
    return O;
}

MatrixXd controllability_rev(const StateSpaceModel& model, std::size_t horizon) {
    require(horizon >= 1, ErrorKind::InputContract, "controllability horizon must be >= 1");
    const auto nu = static_cast<Index>(model.nu());
    const auto h = static_cast<Index>(horizon);
    MatrixXd Cr(static_cast<Index>(model.nx()), h * nu);
    MatrixXd AkB = model.B();
    for (Index k = 0; k < h; ++k) {
        Cr.middleCols((h - 1 - k) * nu, nu) = AkB;
        AkB = model.A() * AkB;
    }
    return Cr;
}

std::size_t lag(const StateSpaceModel& model, const linalg::RankOptions& opts) {
    const auto nx = static_cast<Index>(model.nx());
    for (std::size_t i = 1; i <= model.nx(); ++i)
        if (linalg::numerical_rank(observability(model, i), opts) == nx) return i;
    fail(ErrorKind::Unobservable, "model is unobservable: observability rank never reaches nx");
}

VectorXd estimate_x0(const StateSpaceModel& model, const Trajectory& u_ini, const Trajectory& y_ini,
                     const EstimateX0Options& opts) {
    require(u_ini.channels() == model.nu() && y_ini.channels() == model.ny(),
            ErrorKind::InputContract, "initial trajectory channel counts do not match the model");
    require(u_ini.length() == y_ini.length() && u_ini.length() >= 1, ErrorKind::InputContract,
            "u_ini and y_ini must have the same positive length");
    const std::size_t L0 = u_ini.length();
    const std::size_t l = lag(model, opts.rank);
    if (L0 < l) {
        std::ostringstream os;
        os << "initial trajectory length " << L0 << " is below the lag " << l;
        fail(ErrorKind::Precondition, os.str());
    }
    const MatrixXd O = observability(model, L0);
    const MatrixXd T = toeplitz_matrix(model, L0);
    const VectorXd y = y_ini.stacked();
    const VectorXd free = y - T * u_ini.stacked();
    const VectorXd xhat = linalg::pseudo_inverse(O, opts.rank) * free;
    const double residual = (O * xhat - free).norm();
    const double tol = opts.relative_tolerance * (1.0 + y.norm());
    if (residual > tol) {
        std::ostringstream os;
        os << "initial trajectory is not a trajectory of the model (residual " << residual
           << " > " << tol << ")";
        fail(ErrorKind::InconsistentTrajectory, os.str());
    }
    return xhat;
}

StateSpaceModel controllable_canonical(std::vector<double> num, std::vector<double> den) {
    require(!den.empty() && den.front() != 0.0, ErrorKind::InputContract,
            "denominator leading coefficient must be nonzero");
    require(den.size() >= 2, ErrorKind::InputContract, "denominator degree must be >= 1");
    require(num.size() <= den.size(), ErrorKind::InputContract, "transfer function must be proper");
    const double lead = den.front();
    for (double& a : den) a /= lead;
    for (double& b : num) b /= lead;
    const std::size_t n = den.size() - 1;
    // Left-pad the numerator to degree n.
    num.insert(num.begin(), den.size() - num.size(), 0.0);
    const double d = num.front();
    MatrixXd A = MatrixXd::Zero(static_cast<Index>(n), static_cast<Index>(n));
    MatrixXd B = MatrixXd::Zero(static_cast<Index>(n), 1);
    MatrixXd C(1, static_cast<Index>(n));
    MatrixXd D(1, 1);
    for (std::size_t j = 0; j < n; ++j) {
        A(0, static_cast<Index>(j)) = -den[j + 1];
        C(0, static_cast<Index>(j)) = num[j + 1] - d * den[j + 1];
    }
    for (std::size_t i = 1; i < n; ++i) A(static_cast<Index>(i), static_cast<Index>(i - 1)) = 1.0;
    B(0, 0) = 1.0;
    D(0, 0) = d;
    return {A, B, C, D};
}

StateSpaceModel benchmark_system() {
    return controllable_canonical({0.1159, 0.0, 0.1159 * 0.5, 0.0},
                                  {1.0, -2.2, 2.42, -1.87, 0.7225});
}

}  // namespace ddsim
