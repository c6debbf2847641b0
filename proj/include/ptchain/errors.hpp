#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ptchain {

/// Invalid input: out-of-range sites, wrong parity, malformed grids.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A well-posed request with no answer in the searched domain
/// (e.g. no transition below the search cap).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Base for numerical failures (non-convergence, unresolvable grids).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root iteration hit its cap. Carries the best residual reached for
/// every approximation so callers can inspect how close it got.
class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals)
        : NumericalError(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

/// The quasimomentum scan could not certify its root count.
class GridTooCoarseError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace ptchain
