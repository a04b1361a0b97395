#include "nakasec/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "nakasec/errors.hpp"

namespace nakasec {

namespace {

void require_geometric_p(double p) {
    if (!(p > 0.5) || !(p <= 1.0)) {
        std::ostringstream msg;
        msg << "geometric primitives require p in (1/2, 1], got p = " << p;
        throw DomainError(msg.str());
    }
}

// The bound series hammer binom_pmf with integer arguments, so log-gamma
// values at integers are served from a table (64 KiB, built once).
long double log_factorial(int n) {
    constexpr int kCacheSize = 4096;
    static const auto cache = [] {
        std::array<long double, kCacheSize> table{};
        for (int i = 0; i < kCacheSize; ++i) table[i] = lgammal(static_cast<long double>(i) + 1.0L);
        return table;
    }();
    if (n < kCacheSize) return cache[static_cast<std::size_t>(n)];
    return lgammal(static_cast<long double>(n) + 1.0L);
}

void require_binomial_args(int n, double q) {
    if (n < 0) {
        std::ostringstream msg;
        msg << "binomial trial count must be >= 0, got " << n;
        throw DomainError(msg.str());
    }
    if (!(q >= 0.0) || !(q <= 1.0)) {
        std::ostringstream msg;
        msg << "binomial success probability must lie in [0, 1], got " << q;
        throw DomainError(msg.str());
    }
}

} // namespace

double geom_pmf(int i, double p) {
    require_geometric_p(p);
    if (i < 1) {
        std::ostringstream msg;
        msg << "geom_pmf support starts at 1, got i = " << i;
        throw DomainError(msg.str());
    }
    // q = 0 makes the general r^(i-1) form hit 0^0; branch explicitly.
    if (p == 1.0) return i == 1 ? 1.0 : 0.0;
    const double r = (1.0 - p) / p;
    return std::pow(r, i - 1) * (1.0 - r);
}

double geom_ccdf(int i, double p) {
    require_geometric_p(p);
    if (i <= 0) return 1.0; // saturates at 1 below the support
    if (p == 1.0) return 0.0;
    const double r = (1.0 - p) / p;
    return std::pow(r, i);
}

double binom_pmf(int j, int n, double q) {
    require_binomial_args(n, q);
    if (j < 0 || j > n) return 0.0;
    if (q == 0.0) return j == 0 ? 1.0 : 0.0;
    if (q == 1.0) return j == n ? 1.0 : 0.0;
    // 80-bit log-gamma: the double-precision route loses ~4e-12 on the
    // normalization at n = 10^4, which is over the 1e-12 budget.
    const long double log_choose = log_factorial(n) - log_factorial(j) - log_factorial(n - j);
    const long double log_pmf = log_choose +
                                static_cast<long double>(j) * logl(static_cast<long double>(q)) +
                                static_cast<long double>(n - j) * log1pl(static_cast<long double>(-q));
    return static_cast<double>(expl(log_pmf));
}

double binom_ccdf(int j, int n, double q) {
    require_binomial_args(n, q);
    if (j < 0) return 1.0;
    if (j >= n) return 0.0;
    KahanSum acc;
    for (int l = j + 1; l <= n; ++l) acc.add(binom_pmf(l, n, q));
    return std::min(acc.value(), 1.0);
}

} // namespace nakasec
