#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "ddsim/error.hpp"
#include "ddsim/signal_matrix.hpp"

using namespace ddsim;
using Eigen::MatrixXd;

namespace {

Trajectory seq(int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1;
    return Trajectory::scalar(v);
}

Trajectory gaussian(std::size_t n, std::uint64_t seed, std::size_t channels = 1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    std::vector<double> v(n * channels);
    for (auto& x : v) x = n01(rng);
    return Trajectory(channels, v);
}

}  // namespace

TEST_SUITE("sigmat") {
    TEST_CASE("Hankel construction") {
        MatrixXd ref(2, 4);
        ref << 1, 2, 3, 4, 2, 3, 4, 5;
        CHECK(build_hankel(seq(5), 2).data == ref);
        auto one = build_hankel(seq(2), 2);
        CHECK(one.cols() == 1);
        CHECK(one.data(1, 0) == 2.0);
        // two channels, N = 3, L = 2
        Trajectory z(2, std::vector<double>{1, 10, 2, 20, 3, 30});
        MatrixXd r2(4, 2);
        r2 << 1, 2, 10, 20, 2, 3, 20, 30;
        CHECK(build_hankel(z, 2).data == r2);
        CHECK_THROWS_AS((void)build_hankel(seq(3), 4), Error);
    }

    TEST_CASE("Page construction") {
        MatrixXd ref(2, 3);
        ref << 1, 3, 5, 2, 4, 6;
        CHECK(build_page(seq(6), 2).data == ref);
        auto p7 = build_page(seq(7), 2);
        CHECK(p7.data == ref);
        CHECK(p7.dropped_samples() == 1);
        MatrixXd r3(3, 2);
        r3 << 1, 4, 2, 5, 3, 6;
        CHECK(build_page(seq(6), 3).data == r3);
        try {
            (void)build_page(seq(3), 4);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InsufficientData);
        }
    }

    TEST_CASE("structural invariants on random data") {
        for (std::size_t N : {14u, 20u, 37u, 84u})
            for (std::size_t L : {1u, 3u, 14u}) {
                auto z = gaussian(N, N * 31 + L);
                auto h = build_hankel(z, L);
                CHECK(h.cols() == N - L + 1);
                for (Eigen::Index i = 0; i + 1 < h.data.rows(); ++i)
                    for (Eigen::Index j = 0; j + 1 < h.data.cols(); ++j) CHECK(h.data(i + 1, j) == h.data(i, j + 1));
                auto p = build_page(z, L);
                CHECK(p.cols() == N / L);
                std::vector<double> entries(p.data.data(), p.data.data() + p.data.size());
                std::vector<double> first(z.values().begin(), z.values().begin() + L * (N / L));
                std::sort(entries.begin(), entries.end());
                std::sort(first.begin(), first.end());
                CHECK(entries == first);
                CHECK(column_gap(N, L) == h.cols() - p.cols());
                if (N > L && L > 1) CHECK(column_gap(N, L) > 0);
            }
    }

    TEST_CASE("partition") {
        auto u = build_hankel(gaussian(84, 1), 14);
        auto y = build_hankel(gaussian(84, 2), 14);
        auto part = partition(u, y, 4, 10);
        CHECK(part.Up.rows() == 4);
        CHECK(part.Up.cols() == 71);
        CHECK(part.Yf.rows() == 10);
        CHECK(part.Yf.cols() == 71);
        CHECK(part.U() == u.data);
        CHECK(part.Y() == y.data);
        auto small = partition(build_hankel(seq(5), 2), build_hankel(seq(5), 2), 1, 1);
        CHECK(small.Up == build_hankel(seq(5), 2).data.topRows(1));
        CHECK_THROWS_AS((void)partition(u, build_page(gaussian(84, 2), 14), 4, 10), Error);
        CHECK_THROWS_AS((void)partition(u, y, 4, 9), Error);
    }

    TEST_CASE("persistency of excitation") {
        CHECK(is_pe(Trajectory::scalar(std::vector<double>(10, 3.0)), 1));
        CHECK_FALSE(is_pe(Trajectory::scalar(std::vector<double>(10, 3.0)), 2));
        CHECK_FALSE(is_pe(Trajectory::zeros(1, 10), 3));
        auto z = gaussian(40, 9);
        CHECK(is_pe(z, 18));
        for (std::size_t L = 18; L >= 1; --L) CHECK(is_pe(z, L));
        CHECK_THROWS_AS((void)is_pe(z, 41), Error);
    }

    TEST_CASE("Page excitation") {
        CHECK(is_page_exciting(Trajectory::scalar({1, 2, 3}), 1, 1));
        CHECK_FALSE(is_page_exciting(Trajectory::zeros(1, 12), 2, 2));
        auto z = gaussian(12, 4);
        CHECK(is_page_exciting(z, 2, 2));
        // explicit stack of P_2(z[0..9]) and P_2(z[2..11])
        MatrixXd s(4, 5);
        s << build_page(z.slice(0, 10), 2).data, build_page(z.slice(2, 10), 2).data;
        CHECK(linalg::numerical_rank(s) == 4);
        CHECK_THROWS_AS((void)is_page_exciting(gaussian(4, 1), 2, 3), Error);
    }

    TEST_CASE("length bounds") {
        CHECK(min_data_length(MatrixKind::Hankel, 14, 4, 1) == 35);
        CHECK(min_data_length(MatrixKind::Page, 14, 4, 1) == 1036);
        CHECK(min_data_length(MatrixKind::Hankel, 1, 0, 1) == 1);
        CHECK(column_gap(84, 14) == 65);
        CHECK(14 * 65 == 84 * 13 - 14 * 14 + 14);
        CHECK(column_gap(14, 14) == 0);
        CHECK(column_gap(28, 14) == 13);
    }

    TEST_CASE("kind parsing and CSV export") {
        CHECK(parse_matrix_kind("page") == MatrixKind::Page);
        CHECK(parse_matrix_kind("Hankel") == MatrixKind::Hankel);
        CHECK_THROWS_AS((void)parse_matrix_kind("mosaic"), Error);
        std::ostringstream os;
        write_csv(os, build_page(seq(4), 2));
        CHECK(os.str() == "1,3\n2,4\n");
    }
}
