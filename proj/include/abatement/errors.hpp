#pragma once

#include <stdexcept>
#include <string>

namespace abatement {

/// Argument outside the domain of a model function (negative time, M below
/// the power-law seed stock, non-positive scale, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Two-point damage calibration has no solution for the given points.
class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The initial-value integration broke down: the abatement rate reached zero
/// (where the Euler-Lagrange equation is singular) or diverged.
class TrajectoryError : public std::runtime_error {
public:
    TrajectoryError(const std::string& what, double failure_time)
        : std::runtime_error(what), failure_time_(failure_time) {}

    double failure_time() const noexcept { return failure_time_; }

private:
    double failure_time_;
};

/// No initial abatement rate in the (expanded) bracket reaches the target.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shooting failed: non-monotone response, or no convergence within budget.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent scenario / sweep configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace abatement
