#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hcdgeo {

// Base class for failures inside the numerical layer.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input lies outside the mathematical domain of the operation.
struct DomainError : SolverError {
    using SolverError::SolverError;
};

// Iteration cap reached before the residual tolerance was met.
struct NonConvergence : SolverError {
    std::size_t iterations = 0;
    double last_residual = 0.0;
    NonConvergence(const std::string& what, std::size_t iters, double resid)
        : SolverError(what + " (iterations=" + std::to_string(iters) +
                      ", last residual=" + std::to_string(resid) + ")"),
          iterations(iters),
          last_residual(resid) {}
};

// Bracket expansion hit its cap without finding a sign change.
struct BracketFailure : SolverError {
    using SolverError::SolverError;
};

// Closed-form denominator too close to zero to evaluate reliably.
struct DegenerateDenominator : SolverError {
    using SolverError::SolverError;
};

// Linear system has no usable pivot.
struct SingularSystem : SolverError {
    using SolverError::SolverError;
};

// Run configuration could not be parsed or failed validation (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hcdgeo
