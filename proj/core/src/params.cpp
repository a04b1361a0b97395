#include "nakasec/params.hpp"

#include <cmath>
#include <sstream>

#include "nakasec/errors.hpp"

namespace nakasec {

ConfirmationDepth::ConfirmationDepth(int k) : k_(k) {
    if (k < 1) {
        std::ostringstream msg;
        msg << "confirmation depth must be >= 1, got " << k;
        throw DomainError(msg.str());
    }
}

ProtocolParams::ProtocolParams(double lambda, double rho, double delta)
    : lambda_(lambda),
      rho_(rho),
      delta_(delta),
      g_(std::exp(-lambda * delta)),
      p_(rho * g_),
      q_(1.0 - p_) {}

ProtocolParams ProtocolParams::validate(double lambda, double rho, double delta) {
    std::ostringstream msg;
    if (!std::isfinite(lambda) || lambda <= 0.0) {
        msg << "lambda must be a positive finite mining rate, got " << lambda;
        throw DomainError(msg.str());
    }
    if (!std::isfinite(rho) || rho <= 0.0 || rho > 1.0) {
        msg << "rho must lie in (0, 1], got " << rho;
        throw DomainError(msg.str());
    }
    if (!std::isfinite(delta) || delta < 0.0) {
        msg << "delta must be a non-negative finite delay bound, got " << delta;
        throw DomainError(msg.str());
    }
    return ProtocolParams(lambda, rho, delta);
}

void ProtocolParams::require_bounds_valid() const {
    if (!bounds_valid()) {
        std::ostringstream msg;
        msg << "p = " << p_ << " <= 1/2: fault tolerance exceeded"
            << " (bounds require p = rho*exp(-lambda*delta) > 1/2)";
        throw FaultToleranceExceeded(msg.str());
    }
}

} // namespace nakasec
