#pragma once

#include <stdexcept>

namespace nakasec {

/// An argument lies outside the operation's domain (bad range, non-finite
/// value, malformed request).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The fault tolerance condition p = rho * exp(-lambda * delta) > 1/2 does
/// not hold; no security bound exists for these parameters at any depth.
class FaultToleranceExceeded : public DomainError {
public:
    using DomainError::DomainError;
};

/// A Monte Carlo run was requested with zero trials.
class TrialBudgetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An internal consistency check failed. Signals an implementation bug,
/// never bad user input.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace nakasec
