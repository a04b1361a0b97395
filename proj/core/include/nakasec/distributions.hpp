#pragma once

namespace nakasec {

// Distribution primitives shared by the closed-form bounds and the samplers.
//
// The geometric variant has ratio r = q/p and support {1, 2, ...}:
//   pmf(i)  = r^(i-1) * (1 - r)
//   tail(i) = r^i
// Its tail extends to all integers by saturation (1 below the support),
// which is the measure-theoretic tail probability and spares callers from
// clamping threshold arguments.

/// Geometric pmf for i >= 1. Requires p in (1/2, 1]; p = 1 is the point
/// mass at 1. Throws DomainError for p <= 1/2 or i < 1.
double geom_pmf(int i, double p);

/// Geometric tail (q/p)^i for i >= 0; 1 for i < 0. Throws DomainError for
/// p <= 1/2.
double geom_ccdf(int i, double p);

/// Binomial pmf C(n,j) q^j (1-q)^(n-j), evaluated through log-gamma in log
/// space so deep tails survive (terms below double's normal range appear in
/// the series bounds from depth ~200 up). Returns 0 outside 0 <= j <= n.
/// Throws DomainError for q outside [0,1] or n < 0.
double binom_pmf(int j, int n, double q);

/// Binomial upper tail: sum of binom_pmf(l, n, q) over l in (j, n].
/// Saturates to 1 for j < 0 and 0 for j >= n.
double binom_ccdf(int j, int n, double q);

/// Kahan compensated accumulator; the bound series add thousands of
/// positive terms spanning many orders of magnitude.
class KahanSum {
public:
    void add(double x) noexcept {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const noexcept { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

} // namespace nakasec
