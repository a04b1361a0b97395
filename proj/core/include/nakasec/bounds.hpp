#pragma once

#include <optional>
#include <vector>

#include "nakasec/params.hpp"

namespace nakasec {

/// Exponential upper bound (2 + 2*sqrt(p/(1-p))) * (4p(1-p))^k on the safety
/// violation probability. The power term is evaluated in log space. Throws
/// FaultToleranceExceeded when p <= 1/2 and DomainError when p = 1 (the
/// prefactor is undefined at q = 0).
double thm1_upper(ConfirmationDepth k, const ProtocolParams& params);

/// Exponential lower bound (4*rho*(1-rho))^k / sqrt(k): an attack achieving
/// this exists. Depends only on the honest fraction rho in (1/2, 1].
double thm1_lower(ConfirmationDepth k, double rho);

/// (4p(1-p))^k - exp(-2k * d(1/2 || p)) with d the Bernoulli relative
/// entropy. Identically zero in exact arithmetic; exposed as a floating
/// point self check. Requires p in (1/2, 1), both endpoints excluded.
double entropy_identity_residual(ConfirmationDepth k, double p);

/// Series upper bound: the tail probability Pr(2L + 2B + M >= 2k - 1) under
/// the stationary-lead / binomial / maximum-reach decomposition at honest
/// fraction p = rho * exp(-lambda * delta).
double thm2_upper(ConfirmationDepth k, const ProtocolParams& params);

/// Series lower bound: the exact success probability of the private-mining
/// attack at delta = 0, Pr(2L + 2B + M >= 2k) at honest fraction rho in
/// (1/2, 1].
double thm2_lower(ConfirmationDepth k, double rho);

/// All four bounds for one (k, params). Raw values can exceed 1 (the
/// exponential upper bound does at small k); clamped views cap at 1.
struct BoundsReport {
    int k;
    double lambda;
    double rho;
    double delta;
    double p;

    double thm1_lower_raw;
    double thm2_lower_raw;
    double thm2_upper_raw;
    double thm1_upper_raw;

    double thm1_lower_clamped() const noexcept;
    double thm2_lower_clamped() const noexcept;
    double thm2_upper_clamped() const noexcept;
    double thm1_upper_clamped() const noexcept;
};

/// Evaluates all four bounds and verifies the two orderings that hold for
/// every depth, thm2_lower <= thm2_upper <= thm1_upper, before returning
/// (InvariantViolation on failure; it signals an evaluation bug). At p = 1
/// every bound is reported as its well-defined limit 0, including the
/// exponential upper bound whose standalone form rejects p = 1.
///
/// Caveat: thm1_lower's sqrt(k) prefactor constant is loose at very small
/// depths. At k = 1 (and k = 2 for honest fractions near 0.9 and above) the
/// raw exponential lower bound exceeds the exact series lower bound, so
/// thm1_lower <= thm2_lower only holds from k = 3 on.
BoundsReport bounds_report(ConfirmationDepth k, const ProtocolParams& params);

enum class BoundSelector { Thm1Upper, Thm1Lower, Thm2Upper, Thm2Lower };

struct DepthSolution {
    int k;
    double bound_value;
};

/// Smallest k >= 1 whose selected bound is <= target, found by ascending
/// scan (every bound is non-increasing in k). Returns nullopt when no
/// k <= k_max qualifies; beyond the default k_max the double-precision
/// bounds have underflowed to 0 and any positive target is trivially met.
/// target must lie in (0, 1).
std::optional<DepthSolution> min_depth_for_risk(const ProtocolParams& params,
                                                double target,
                                                BoundSelector selector,
                                                int k_max = 10000);

/// Bound reports for every depth in [k_min, k_max], ready for CSV/JSON.
struct SweepTable {
    std::vector<BoundsReport> rows;
};

SweepTable sweep(const ProtocolParams& params, int k_min, int k_max);

} // namespace nakasec
