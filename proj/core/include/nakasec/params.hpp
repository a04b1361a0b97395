#pragma once

namespace nakasec {

/// Confirmation depth: a block is committed once it is k deep in a longest
/// chain (the block itself plus k-1 on top).
class ConfirmationDepth {
public:
    /// Throws DomainError unless k >= 1.
    explicit ConfirmationDepth(int k);

    int value() const noexcept { return k_; }

private:
    int k_;
};

/// Validated mining environment: total mining rate lambda (blocks/second),
/// honest fraction rho, and propagation delay bound delta (seconds), together
/// with the derived quantities every bound and sampler reads:
///
///   g = exp(-lambda * delta)   probability a block is a lagger
///   p = rho * g                honest fraction in the reduced block sequence
///   q = 1 - p
///
/// Construction succeeds for any in-range field values; bounds_valid()
/// records whether the fault tolerance condition p > 1/2 holds.
class ProtocolParams {
public:
    static ProtocolParams validate(double lambda, double rho, double delta);

    double lambda() const noexcept { return lambda_; }
    double rho() const noexcept { return rho_; }
    double delta() const noexcept { return delta_; }
    double g() const noexcept { return g_; }
    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    bool bounds_valid() const noexcept { return p_ > 0.5; }

    /// Throws FaultToleranceExceeded with a diagnostic naming p when
    /// bounds_valid() is false.
    void require_bounds_valid() const;

private:
    ProtocolParams(double lambda, double rho, double delta);

    double lambda_;
    double rho_;
    double delta_;
    double g_;
    double p_;
    double q_;
};

} // namespace nakasec
