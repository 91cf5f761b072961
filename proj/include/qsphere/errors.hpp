#pragma once

#include <stdexcept>
#include <string>

namespace qsphere {

// Error families map one-to-one onto CLI exit codes.
enum class ErrorFamily { config = 2, numerical = 3, inconsistency = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorFamily fam, const std::string& msg)
        : std::runtime_error(msg), family_(fam) {}
    ErrorFamily family() const { return family_; }
    int exit_code() const { return static_cast<int>(family_); }

private:
    ErrorFamily family_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(ErrorFamily::config, msg) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& msg) : Error(ErrorFamily::numerical, msg) {}
};

// degenerate gradient: |grad phi| below the floor, constraint direction undefined
struct DegenerateGradientError : NumericalError {
    explicit DegenerateGradientError(const std::string& msg) : NumericalError(msg) {}
};

// Newton projection onto the surface failed to converge
struct NoConvergenceError : NumericalError {
    explicit NoConvergenceError(const std::string& msg) : NumericalError(msg) {}
};

struct StepUnderflowError : NumericalError {
    explicit StepUnderflowError(const std::string& msg) : NumericalError(msg) {}
};

struct ZeroMomentumError : NumericalError {
    explicit ZeroMomentumError(const std::string& msg) : NumericalError(msg) {}
};

struct NotAFixedPointError : NumericalError {
    explicit NotAFixedPointError(const std::string& msg) : NumericalError(msg) {}
};

struct FrameSingularityError : NumericalError {
    explicit FrameSingularityError(const std::string& msg) : NumericalError(msg) {}
};

struct TrajectoryTooShortError : NumericalError {
    explicit TrajectoryTooShortError(const std::string& msg) : NumericalError(msg) {}
};

// separatrix tracing produced a dangling edge (timeout before capture)
struct DanglingEdgeError : NumericalError {
    explicit DanglingEdgeError(const std::string& msg) : NumericalError(msg) {}
};

// eigenvalue classification contradicts the inequality classification,
// or graph type contradicts the parameter-space type: implementation bug
struct InconsistencyError : Error {
    explicit InconsistencyError(const std::string& msg) : Error(ErrorFamily::inconsistency, msg) {}
};

} // namespace qsphere
