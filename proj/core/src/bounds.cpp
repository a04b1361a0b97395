#include "nakasec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nakasec/distributions.hpp"
#include "nakasec/errors.hpp"

namespace nakasec {

namespace {

void require_rho_above_half(double rho) {
    if (!(rho > 0.5) || !(rho <= 1.0)) {
        std::ostringstream msg;
        msg << "honest fraction must lie in (1/2, 1], got rho = " << rho;
        throw DomainError(msg.str());
    }
}

// Pr(2L + 2B + M >= threshold), where L and M are geometric on {0, 1, ...}
// with ratio q/p and B given L = l is Binomial(2k - l, q). Conditioning on L
// splits the event into the L >= k mass (certain), the overshoot tail
// B >= k - l (certain regardless of M), and the catch-up tail on M.
// Thresholds 2k-1 and 2k select the two series bounds; both keep the inner
// tail argument above the saturation region.
//
// Terms are added ascending with compensation. The loop stops early once
// the entire remaining lead mass cannot move the sum at 1e-18 relative.
double lead_race_tail(int kappa, double p, int threshold) {
    const double q = 1.0 - p;
    KahanSum sum;
    sum.add(geom_ccdf(kappa, p));
    for (int l = 0; l < kappa; ++l) {
        const double lead_mass = geom_pmf(l + 1, p); // Pr(L = l)
        if (lead_mass == 0.0) break;
        const int n = 2 * kappa - l;
        KahanSum bracket;
        bracket.add(binom_ccdf(kappa - l - 1, n, q)); // Pr(B >= kappa - l)
        for (int j = 0; j <= kappa - l - 1; ++j) {
            bracket.add(binom_pmf(j, n, q) * geom_ccdf(threshold - 2 * l - 2 * j, p));
        }
        sum.add(lead_mass * bracket.value());
        if (geom_ccdf(l + 1, p) < sum.value() * 1e-18) break;
    }
    return std::min(sum.value(), 1.0);
}

} // namespace

double thm1_upper(ConfirmationDepth k, const ProtocolParams& params) {
    params.require_bounds_valid();
    const double p = params.p();
    if (p == 1.0) {
        throw DomainError("thm1_upper is undefined at p = 1: the prefactor sqrt(p/(1-p)) diverges");
    }
    const double q = 1.0 - p;
    const double prefactor = 2.0 + 2.0 * std::sqrt(p / q);
    return prefactor * std::exp(k.value() * std::log(4.0 * p * q));
}

double thm1_lower(ConfirmationDepth k, double rho) {
    require_rho_above_half(rho);
    if (rho == 1.0) return 0.0;
    return std::exp(k.value() * std::log(4.0 * rho * (1.0 - rho))) / std::sqrt(static_cast<double>(k.value()));
}

double entropy_identity_residual(ConfirmationDepth k, double p) {
    if (!(p > 0.5) || !(p < 1.0)) {
        std::ostringstream msg;
        msg << "entropy identity requires p in (1/2, 1), got p = " << p;
        throw DomainError(msg.str());
    }
    const double q = 1.0 - p;
    const double direct = std::exp(k.value() * std::log(4.0 * p * q));
    // d(1/2 || p) for the Bernoulli pair
    const double divergence = 0.5 * std::log(0.5 / p) + 0.5 * std::log(0.5 / q);
    const double exponential_form = std::exp(-2.0 * k.value() * divergence);
    return direct - exponential_form;
}

double thm2_upper(ConfirmationDepth k, const ProtocolParams& params) {
    params.require_bounds_valid();
    return lead_race_tail(k.value(), params.p(), 2 * k.value() - 1);
}

double thm2_lower(ConfirmationDepth k, double rho) {
    require_rho_above_half(rho);
    return lead_race_tail(k.value(), rho, 2 * k.value());
}

double BoundsReport::thm1_lower_clamped() const noexcept { return std::min(thm1_lower_raw, 1.0); }
double BoundsReport::thm2_lower_clamped() const noexcept { return std::min(thm2_lower_raw, 1.0); }
double BoundsReport::thm2_upper_clamped() const noexcept { return std::min(thm2_upper_raw, 1.0); }
double BoundsReport::thm1_upper_clamped() const noexcept { return std::min(thm1_upper_raw, 1.0); }

BoundsReport bounds_report(ConfirmationDepth k, const ProtocolParams& params) {
    params.require_bounds_valid();
    BoundsReport report{};
    report.k = k.value();
    report.lambda = params.lambda();
    report.rho = params.rho();
    report.delta = params.delta();
    report.p = params.p();

    if (params.p() == 1.0) {
        // q = 0: nothing is ever mined against the honest chain. All four
        // bounds take their k >= 1 limit 0, including the exponential upper
        // bound whose standalone form rejects p = 1.
        return report;
    }

    report.thm1_upper_raw = thm1_upper(k, params);
    report.thm1_lower_raw = thm1_lower(k, params.rho());
    report.thm2_upper_raw = thm2_upper(k, params);
    report.thm2_lower_raw = thm2_lower(k, params.rho());

    // The series bounds nest (the lower-bound event is contained in the
    // upper-bound event) and the exponential upper bound dominates the tail
    // it Chernoff-bounds, so these two orderings hold for every k and any
    // violation is an evaluation bug. thm1_lower is NOT checked against
    // thm2_lower: its sqrt-prefactor constant is loose at depth 1..2, where
    // the raw exponential lower bound genuinely exceeds the exact series
    // value (see bounds.hpp).
    const auto ordered = [](double lo, double hi) {
        return lo <= hi + 1e-12 * std::max(lo, hi) + 1e-300;
    };
    if (!ordered(report.thm2_lower_raw, report.thm2_upper_raw) ||
        !ordered(report.thm2_upper_raw, report.thm1_upper_raw)) {
        std::ostringstream msg;
        msg << "bound tightness ordering violated at k = " << k.value()
            << ": thm2_lower = " << report.thm2_lower_raw
            << ", thm2_upper = " << report.thm2_upper_raw
            << ", thm1_upper = " << report.thm1_upper_raw;
        throw InvariantViolation(msg.str());
    }
    return report;
}

namespace {

double eval_bound(BoundSelector selector, ConfirmationDepth k, const ProtocolParams& params) {
    switch (selector) {
        case BoundSelector::Thm1Upper: return thm1_upper(k, params);
        case BoundSelector::Thm1Lower: return thm1_lower(k, params.rho());
        case BoundSelector::Thm2Upper: return thm2_upper(k, params);
        case BoundSelector::Thm2Lower: return thm2_lower(k, params.rho());
    }
    throw InvariantViolation("unhandled bound selector");
}

} // namespace

std::optional<DepthSolution> min_depth_for_risk(const ProtocolParams& params, double target,
                                                BoundSelector selector, int k_max) {
    params.require_bounds_valid();
    if (!(target > 0.0) || !(target < 1.0)) {
        std::ostringstream msg;
        msg << "risk target must lie in (0, 1), got " << target;
        throw DomainError(msg.str());
    }
    if (k_max < 1) {
        std::ostringstream msg;
        msg << "k_max must be >= 1, got " << k_max;
        throw DomainError(msg.str());
    }

    const bool series = selector == BoundSelector::Thm2Upper || selector == BoundSelector::Thm2Lower;
    const double tail_p = selector == BoundSelector::Thm2Upper ? params.p() : params.rho();
    for (int k = 1; k <= k_max; ++k) {
        const ConfirmationDepth depth(k);
        if (series) {
            // Skip the O(k^2) series when a cheap lower bound already rules
            // this k out: each series bound dominates its own first term and
            // the exponential lower bound.
            double floor_value = geom_ccdf(k, tail_p);
            if (params.rho() < 1.0) floor_value = std::max(floor_value, thm1_lower(depth, params.rho()));
            if (floor_value > target) continue;
        }
        const double value = eval_bound(selector, depth, params);
        if (value <= target) return DepthSolution{k, value};
    }
    return std::nullopt;
}

SweepTable sweep(const ProtocolParams& params, int k_min, int k_max) {
    params.require_bounds_valid();
    if (k_min < 1 || k_max < k_min) {
        std::ostringstream msg;
        msg << "depth range requires 1 <= k_min <= k_max, got [" << k_min << ", " << k_max << "]";
        throw DomainError(msg.str());
    }
    SweepTable table;
    table.rows.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    for (int k = k_min; k <= k_max; ++k) {
        table.rows.push_back(bounds_report(ConfirmationDepth(k), params));
    }
    return table;
}

} // namespace nakasec
