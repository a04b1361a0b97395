#include "nakasec/rng.hpp"

namespace nakasec {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& lo) noexcept {
    __extension__ using uint128 = unsigned __int128;
    const uint128 product = static_cast<uint128>(a) * b;
    lo = static_cast<std::uint64_t>(product);
    return static_cast<std::uint64_t>(product >> 64);
}

} // namespace

void PhiloxRng::refill() noexcept {
    // the block counter advances before each block (counter word 0 runs
    // 1, 2, ...; words 1-3 stay 0)
    std::uint64_t c0 = ++block_;
    std::uint64_t c1 = 0;
    std::uint64_t c2 = 0;
    std::uint64_t c3 = 0;
    std::uint64_t k0 = key0_;
    std::uint64_t k1 = key1_;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t lo0;
        std::uint64_t lo1;
        const std::uint64_t hi0 = mulhilo(kMult0, c0, lo0);
        const std::uint64_t hi1 = mulhilo(kMult1, c2, lo1);
        c0 = hi1 ^ c1 ^ k0;
        c1 = lo1;
        c2 = hi0 ^ c3 ^ k1;
        c3 = lo0;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    buf_[0] = c0;
    buf_[1] = c1;
    buf_[2] = c2;
    buf_[3] = c3;
    have_ = 4;
}

std::int64_t sample_geometric_tail(PhiloxRng& rng, double ratio) noexcept {
    if (ratio <= 0.0) return 0;
    // u uniform on (0, 1]: Pr(result >= i) = Pr(u <= ratio^i) = ratio^i
    const double u = 1.0 - rng.uniform01();
    return static_cast<std::int64_t>(std::log(u) / std::log(ratio));
}

std::int64_t sample_binomial(PhiloxRng& rng, std::int64_t n, double q) noexcept {
    if (n <= 0 || q <= 0.0) return 0;
    if (q >= 1.0) return n;
    const double miss = 1.0 - q;
    double pmf = std::pow(miss, static_cast<double>(n));
    if (pmf == 0.0) {
        // pmf(0) underflowed (n in the hundreds of thousands); fall back to
        // exact Bernoulli counting
        std::int64_t hits = 0;
        for (std::int64_t i = 0; i < n; ++i) hits += rng.bernoulli(q);
        return hits;
    }
    const double u = rng.uniform01();
    const double odds = q / miss;
    double cdf = pmf;
    std::int64_t j = 0;
    while (u >= cdf && j < n) {
        pmf *= odds * static_cast<double>(n - j) / static_cast<double>(j + 1);
        ++j;
        cdf += pmf;
    }
    return j;
}

} // namespace nakasec
