#include "ddsim/error.hpp"

#include <sstream>

namespace ddsim {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InputContract: return "input-contract";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Unsupported: return "unsupported-configuration";
        case ErrorKind::Unobservable: return "no-lag";
        case ErrorKind::Precondition: return "precondition";
        case ErrorKind::InconsistentTrajectory: return "inconsistent-trajectory";
        case ErrorKind::NoSolution: return "no-solution";
        case ErrorKind::Degenerate: return "degenerate-problem";
        case ErrorKind::InfeasibleDimension: return "infeasible-dimension";
        case ErrorKind::Estimation: return "estimation";
        case ErrorKind::UndefinedFit: return "undefined-fit";
        case ErrorKind::SolverFailure: return "solver-failure";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

bool is_input_error(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InputContract:
        case ErrorKind::InsufficientData:
        case ErrorKind::Domain:
        case ErrorKind::Unsupported:
        case ErrorKind::Unobservable:
        case ErrorKind::Precondition:
        case ErrorKind::InconsistentTrajectory:
        case ErrorKind::InfeasibleDimension:
        case ErrorKind::UndefinedFit:
        case ErrorKind::Io:
            return true;
        default:
            return false;
    }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

static std::string no_solution_message(double residual, double tolerance) {
    std::ostringstream os;
    os << "stacked system inconsistent (residual " << residual << " > tolerance " << tolerance
       << "); excitation or range conditions fail";
    return os.str();
}

NoSolutionError::NoSolutionError(double residual, double tolerance)
    : Error(ErrorKind::NoSolution, no_solution_message(residual, tolerance)),
      residual_(residual),
      tolerance_(tolerance) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace ddsim
