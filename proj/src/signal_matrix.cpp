#include "ddsim/signal_matrix.hpp"

#include <ostream>
#include <sstream>
#include <string>

#include "ddsim/error.hpp"

namespace ddsim {

using Eigen::Index;
using Eigen::MatrixXd;

std::string_view to_string(MatrixKind kind) {
    return kind == MatrixKind::Hankel ? "hankel" : "page";
}

MatrixKind parse_matrix_kind(std::string_view text) {
    if (text == "hankel" || text == "Hankel" || text == "H") return MatrixKind::Hankel;
    if (text == "page" || text == "Page" || text == "P") return MatrixKind::Page;
    fail(ErrorKind::InputContract, "unknown matrix kind '" + std::string(text) + "'");
}

std::size_t column_count(MatrixKind kind, std::size_t N, std::size_t L) {
    if (L == 0 || N < L) return 0;
    return kind == MatrixKind::Hankel ? N - L + 1 : N / L;
}

std::size_t SignalMatrix::dropped_samples() const noexcept {
    if (kind == MatrixKind::Hankel || L == 0) return 0;
    return source_length % L;
}

MatrixXd SignalMatrix::block_rows(std::size_t first, std::size_t count) const {
    require(first + count <= L, ErrorKind::InputContract, "block row range out of bounds");
    const auto b = static_cast<Index>(block_size);
    return data.middleRows(static_cast<Index>(first) * b, static_cast<Index>(count) * b);
}

namespace {

void check_buildable(const Trajectory& z, std::size_t L) {
    require(L >= 1, ErrorKind::InputContract, "block row count must be >= 1");
    if (z.length() < L) {
        std::ostringstream os;
        os << "data length " << z.length() << " is shorter than L = " << L;
        fail(ErrorKind::InsufficientData, os.str());
    }
}

// Column j starts at sample start(j); block i of that column is sample start(j) + i.
template <typename Start>
SignalMatrix fill(MatrixKind kind, const Trajectory& z, std::size_t L, std::size_t cols, Start start) {
    const std::size_t nz = z.channels();
    SignalMatrix m{kind, L, nz, z.length(),
                   MatrixXd(static_cast<Index>(L * nz), static_cast<Index>(cols))};
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t c = 0; c < nz; ++c)
                m.data(static_cast<Index>(i * nz + c), static_cast<Index>(j)) = z(start(j) + i, c);
    return m;
}

}  // namespace

SignalMatrix build_hankel(const Trajectory& z, std::size_t L) {
    check_buildable(z, L);
    return fill(MatrixKind::Hankel, z, L, z.length() - L + 1, [](std::size_t j) { return j; });
}

SignalMatrix build_page(const Trajectory& z, std::size_t L) {
    check_buildable(z, L);
    return fill(MatrixKind::Page, z, L, z.length() / L, [L](std::size_t j) { return j * L; });
}

SignalMatrix build_signal_matrix(MatrixKind kind, const Trajectory& z, std::size_t L) {
    return kind == MatrixKind::Hankel ? build_hankel(z, L) : build_page(z, L);
}

void write_csv(std::ostream& os, const SignalMatrix& m) {
    std::ostringstream line;
    line.precision(17);
    for (Index r = 0; r < m.data.rows(); ++r) {
        line.str("");
        for (Index c = 0; c < m.data.cols(); ++c) {
            if (c) line << ',';
            line << m.data(r, c);
        }
        os << line.str() << '\n';
    }
}

MatrixXd PartitionedData::U() const {
    MatrixXd out(Up.rows() + Uf.rows(), Up.cols());
    out << Up, Uf;
    return out;
}

MatrixXd PartitionedData::Y() const {
    MatrixXd out(Yp.rows() + Yf.rows(), Yp.cols());
    out << Yp, Yf;
    return out;
}

PartitionedData partition(const SignalMatrix& u_mat, const SignalMatrix& y_mat, std::size_t L0,
                          std::size_t Ls) {
    require(u_mat.kind == y_mat.kind, ErrorKind::InputContract,
            "input and output matrices must share a kind");
    require(u_mat.cols() == y_mat.cols(), ErrorKind::InputContract,
            "input and output matrices must have the same column count");
    require(L0 >= 1 && Ls >= 1, ErrorKind::InputContract, "L0 and Ls must be >= 1");
    require(u_mat.L == L0 + Ls && y_mat.L == L0 + Ls, ErrorKind::InputContract,
            "block row count must equal L0 + Ls");
    PartitionedData p;
    p.L0 = L0;
    p.Ls = Ls;
    p.kind = u_mat.kind;
    p.Up = u_mat.block_rows(0, L0);
    p.Uf = u_mat.block_rows(L0, Ls);
    p.Yp = y_mat.block_rows(0, L0);
    p.Yf = y_mat.block_rows(L0, Ls);
    return p;
}

bool is_pe(const Trajectory& z, std::size_t L, const linalg::RankOptions& opts) {
    const SignalMatrix h = build_hankel(z, L);
    return linalg::numerical_rank(h.data, opts) == static_cast<Index>(L * z.channels());
}

bool is_page_exciting(const Trajectory& z, std::size_t L, std::size_t M,
                      const linalg::RankOptions& opts) {
    require(L >= 1 && M >= 1, ErrorKind::InputContract, "L and M must be >= 1");
    const std::size_t cp = z.length() / L;
    if (cp < M) {
        std::ostringstream os;
        os << "floor(N/L) = " << cp << " is below the excitation order M = " << M;
        fail(ErrorKind::InsufficientData, os.str());
    }
    const std::size_t nz = z.channels();
    const std::size_t segment = (cp - M + 1) * L;  // samples per shifted Page matrix
    const auto block_rows = static_cast<Index>(L * nz);
    MatrixXd stack(static_cast<Index>(M) * block_rows, static_cast<Index>(cp - M + 1));
    for (std::size_t k = 0; k < M; ++k) {
        const SignalMatrix pk = build_page(z.slice(k * L, segment), L);
        stack.middleRows(static_cast<Index>(k) * block_rows, block_rows) = pk.data;
    }
    return linalg::numerical_rank(stack, opts) == stack.rows();
}

std::size_t min_data_length(MatrixKind kind, std::size_t L, std::size_t nx, std::size_t nu) {
    if (kind == MatrixKind::Hankel) return (L + nx) * (nu + 1) - 1;
    return L * ((nu * L + 1) * (nx + 1) - 1);
}

std::size_t column_gap(std::size_t N, std::size_t L) {
    require(L >= 1 && N >= L, ErrorKind::InputContract, "column_gap requires N >= L >= 1");
    return (N - L + 1) - N / L;
}

}  // namespace ddsim
