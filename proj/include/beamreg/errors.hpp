#pragma once

#include <stdexcept>
#include <string>

namespace beamreg {

/// Factorization hit an exact zero pivot.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A hypothesis of the existence theory is violated by the supplied data
/// (non-positive stiffness bound, non-log-type axial impulse, ...).
class HypothesisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Time integration failed (singular step matrix, non-finite state).
class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& what, std::size_t step)
        : std::runtime_error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

}  // namespace beamreg
