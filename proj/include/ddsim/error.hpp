#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ddsim {

// Failure categories. The C API and CLI map these onto status/exit codes.
enum class ErrorKind {
    InputContract,        // shape or argument mismatch
    InsufficientData,     // N < L and friends
    Domain,               // argument outside the mathematical domain
    Unsupported,          // configuration outside the supported subset
    Unobservable,         // lag undefined
    Precondition,         // documented precondition violated
    InconsistentTrajectory,
    NoSolution,           // linear system for g has no exact solution
    Degenerate,           // singular KKT / covariance
    InfeasibleDimension,
    Estimation,
    UndefinedFit,
    SolverFailure,
    Io,
};

std::string_view to_string(ErrorKind kind);

// True for errors caused by bad user input rather than numerical failure.
bool is_input_error(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Raised by solve_g when the stacked system is inconsistent.
class NoSolutionError : public Error {
public:
    NoSolutionError(double residual, double tolerance);

    [[nodiscard]] double residual() const noexcept { return residual_; }
    [[nodiscard]] double tolerance() const noexcept { return tolerance_; }

private:
    double residual_;
    double tolerance_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

}  // namespace ddsim
