#include <doctest.h>

#include <random>

#include "ddsim/linalg.hpp"
#include "oracles.hpp"

using namespace ddsim;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_SUITE("linalg") {
    TEST_CASE("numerical rank of constructed low-rank matrices") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> n01;
        for (int r = 0; r <= 4; ++r) {
            MatrixXd a = MatrixXd::NullaryExpr(7, r, [&] { return n01(rng); });
            MatrixXd b = MatrixXd::NullaryExpr(r, 5, [&] { return n01(rng); });
            CHECK(linalg::numerical_rank(a * b) == r);
        }
        CHECK(linalg::numerical_rank(MatrixXd::Zero(3, 3)) == 0);
    }

    TEST_CASE("threshold override changes the decision") {
        MatrixXd m = MatrixXd::Identity(2, 2);
        m(1, 1) = 1e-6;
        CHECK(linalg::numerical_rank(m) == 2);
        CHECK(linalg::numerical_rank(m, {1e-3}) == 1);
    }

    TEST_CASE("minimum-norm solve matches the normal-equation formula") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> n01;
        MatrixXd m = MatrixXd::NullaryExpr(3, 8, [&] { return n01(rng); });
        VectorXd b = VectorXd::NullaryExpr(3, [&] { return n01(rng); });
        VectorXd x = linalg::min_norm_solve(m, b);
        VectorXd ref = m.transpose() * (m * m.transpose()).ldlt().solve(b);
        CHECK((x - ref).norm() < 1e-12);
    }

    TEST_CASE("column span membership") {
        MatrixXd m(3, 1);
        m << 1, 2, 3;
        VectorXd in(3), out(3);
        in << 2, 4, 6;
        out << 1, 0, 0;
        CHECK(linalg::in_column_span(m, in, 1e-12));
        CHECK_FALSE(linalg::in_column_span(m, out, 1e-6));
    }

    TEST_CASE("logdet of SPD and rejection of indefinite") {
        MatrixXd s(2, 2);
        s << 4, 1, 1, 3;
        auto v = linalg::logdet_spd(s);
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(std::log(11.0)).epsilon(1e-14));
        MatrixXd bad(2, 2);
        bad << 1, 2, 2, 1;
        CHECK_FALSE(linalg::logdet_spd(bad).has_value());
    }

    TEST_CASE("equality QP agrees with a dense saddle solve") {
        std::mt19937_64 rng(11);
        std::normal_distribution<double> n01;
        for (int rep = 0; rep < 20; ++rep) {
            MatrixXd R = MatrixXd::NullaryExpr(9, 9, [&] { return n01(rng); });
            MatrixXd H = R.transpose() * R + 0.1 * MatrixXd::Identity(9, 9);
            VectorXd c = VectorXd::NullaryExpr(9, [&] { return n01(rng); });
            MatrixXd A = MatrixXd::NullaryExpr(4, 9, [&] { return n01(rng); });
            VectorXd b = VectorXd::NullaryExpr(4, [&] { return n01(rng); });
            auto sol = linalg::solve_equality_qp(H, c, A, b);
            VectorXd ref = oracle::saddle_solve(H, c, A, b);
            CHECK((sol.x - ref.head(9)).norm() < 1e-9);
            CHECK((sol.multipliers - ref.tail(4)).norm() < 1e-9);
            CHECK(sol.kkt_residual < 1e-10);
            CHECK(sol.constraint_rank == 4);
        }
    }

    TEST_CASE("equality QP tolerates consistent redundant constraints") {
        MatrixXd H = MatrixXd::Identity(3, 3);
        VectorXd c = VectorXd::Zero(3);
        MatrixXd A(2, 3);
        A << 1, 1, 0, 2, 2, 0;
        VectorXd b(2);
        b << 1, 2;
        auto sol = linalg::solve_equality_qp(H, c, A, b);
        CHECK(sol.constraint_rank == 1);
        CHECK(sol.x(0) == doctest::Approx(0.5));
        CHECK(sol.x(1) == doctest::Approx(0.5));
        CHECK(sol.kkt_residual < 1e-12);
        b(1) = 3;
        auto bad = linalg::solve_equality_qp(H, c, A, b);
        CHECK(bad.constraint_residual > 0.1);
    }
}
