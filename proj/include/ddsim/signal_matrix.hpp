#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <string_view>

#include "ddsim/linalg.hpp"
#include "ddsim/trajectory.hpp"

namespace ddsim {

enum class MatrixKind { Hankel, Page };

[[nodiscard]] std::string_view to_string(MatrixKind kind);
[[nodiscard]] MatrixKind parse_matrix_kind(std::string_view text);

// Column count of an L-block-row data matrix built from N samples.
[[nodiscard]] std::size_t column_count(MatrixKind kind, std::size_t N, std::size_t L);

struct SignalMatrix {
    MatrixKind kind = MatrixKind::Hankel;
    std::size_t L = 0;           // block rows
    std::size_t block_size = 1;  // channels per block
    std::size_t source_length = 0;
    Eigen::MatrixXd data;        // L*block_size x cols

    [[nodiscard]] std::size_t cols() const noexcept { return static_cast<std::size_t>(data.cols()); }
    // Trailing samples a Page matrix leaves out (always 0 for Hankel).
    [[nodiscard]] std::size_t dropped_samples() const noexcept;
    // Rows of block rows [first, first + count).
    [[nodiscard]] Eigen::MatrixXd block_rows(std::size_t first, std::size_t count) const;
};

[[nodiscard]] SignalMatrix build_hankel(const Trajectory& z, std::size_t L);
[[nodiscard]] SignalMatrix build_page(const Trajectory& z, std::size_t L);
[[nodiscard]] SignalMatrix build_signal_matrix(MatrixKind kind, const Trajectory& z, std::size_t L);

// Dense CSV dump, one matrix row per line, no header.
void write_csv(std::ostream& os, const SignalMatrix& m);

struct PartitionedData {
    Eigen::MatrixXd Up, Uf, Yp, Yf;
    std::size_t L0 = 0;
    std::size_t Ls = 0;
    MatrixKind kind = MatrixKind::Hankel;

    [[nodiscard]] std::size_t L() const noexcept { return L0 + Ls; }
    [[nodiscard]] std::size_t cols() const noexcept { return static_cast<std::size_t>(Up.cols()); }
    [[nodiscard]] Eigen::MatrixXd U() const;  // [Up; Uf]
    [[nodiscard]] Eigen::MatrixXd Y() const;  // [Yp; Yf]
};

[[nodiscard]] PartitionedData partition(const SignalMatrix& u_mat, const SignalMatrix& y_mat,
                                        std::size_t L0, std::size_t Ls);

// Hankel matrix of order L has full row rank L * channels.
[[nodiscard]] bool is_pe(const Trajectory& z, std::size_t L, const linalg::RankOptions& opts = {});

// Stack of the M shifted Page matrices
//   P_L(z_[kL, floor(N/L)L - 1 - (M-1-k)L]),  k = 0..M-1,
// has full row rank M * L * channels. Requires floor(N/L) >= M.
[[nodiscard]] bool is_page_exciting(const Trajectory& z, std::size_t L, std::size_t M,
                                    const linalg::RankOptions& opts = {});

// Data length that guarantees the classical excitation conditions:
//   Hankel: (L + nx)(nu + 1) - 1,   Page: L((nu L + 1)(nx + 1) - 1).
[[nodiscard]] std::size_t min_data_length(MatrixKind kind, std::size_t L, std::size_t nx,
                                          std::size_t nu);

// c_H(N) - c_P(N) = (N - L + 1) - floor(N / L).
[[nodiscard]] std::size_t column_gap(std::size_t N, std::size_t L);

}  // namespace ddsim
