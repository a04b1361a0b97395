#pragma once

#include <cmath>
#include <cstdint>

namespace nakasec {

/// Philox4x64-10 counter-based generator.
///
/// Each (key, counter) pair maps to a block of four 64-bit words through a
/// fixed bijection, so a substream is just a distinct key: trial i of a run
/// seeded with s draws from PhiloxRng(s, i) and never overlaps any other
/// trial, regardless of how trials are scheduled across threads.
class PhiloxRng {
public:
    explicit PhiloxRng(std::uint64_t key0, std::uint64_t key1 = 0) noexcept
        : key0_(key0), key1_(key1) {}

    /// The substream for one trial of a seeded run.
    static PhiloxRng substream(std::uint64_t master_seed, std::uint64_t trial) noexcept {
        return PhiloxRng(master_seed, trial);
    }

    std::uint64_t next_u64() noexcept {
        if (have_ == 0) refill();
        return buf_[4 - have_--];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Exponential with the given rate (inverse CDF of 1 - uniform).
    double exponential(double rate) noexcept {
        return -std::log1p(-uniform01()) / rate;
    }

    bool bernoulli(double prob) noexcept { return uniform01() < prob; }

private:
    void refill() noexcept;

    std::uint64_t key0_;
    std::uint64_t key1_;
    std::uint64_t block_ = 0;
    std::uint64_t buf_[4] = {0, 0, 0, 0};
    int have_ = 0;
};

/// Sample X on {0, 1, ...} with Pr(X >= i) = ratio^i by inverting the tail.
/// ratio must lie in [0, 1); ratio = 0 returns 0.
std::int64_t sample_geometric_tail(PhiloxRng& rng, double ratio) noexcept;

/// Binomial(n, q) by CDF inversion with the multiplicative pmf recurrence.
/// One uniform per sample; exact integer arithmetic aside from the pmf
/// recurrence, so results are reproducible across runs and thread counts.
std::int64_t sample_binomial(PhiloxRng& rng, std::int64_t n, double q) noexcept;

} // namespace nakasec
