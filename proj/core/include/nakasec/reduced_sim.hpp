#pragma once

#include <cstdint>

#include "nakasec/params.hpp"
#include "nakasec/rng.hpp"

namespace nakasec {

/// One sampled (L, B, M) triple and the two race events it decides:
///   L  stationary lead when the target transaction appears
///   B  adversarial count among the first max(2k - L, 0) blocks after that
///   M  maximum reach of the subsequent downward-drift random walk
struct ReducedTrial {
    std::int64_t lead;
    std::int64_t adversarial;
    std::int64_t max_reach;
    bool rigged_event; // 2L + 2B + M >= 2k - 1
    bool exact_event;  // 2L + 2B + M >= 2k
};

/// Stationary lead of the pre-race birth-death process: geometric on
/// {0, 1, ...} with ratio q/p. Requires p > 1/2.
std::int64_t sample_stationary_lead(double p, PhiloxRng& rng);

/// Maximum reach of the +1 (prob q) / -1 (prob p) walk started at 0; same
/// geometric law as the stationary lead. Requires p > 1/2.
std::int64_t sample_max_reach(double p, PhiloxRng& rng);

/// Draws L, then B ~ Binomial(max(2k - L, 0), 1 - p) given L, then M
/// independently, and fills both event flags.
ReducedTrial sample_reduced_trial(ConfirmationDepth k, double p, PhiloxRng& rng);

/// Which event the Monte Carlo mean estimates.
///   RiggedUpper  honest fraction p = rho * exp(-lambda*delta), threshold 2k-1
///   Delta0Exact  honest fraction rho, threshold 2k
enum class EstimateMode { RiggedUpper, Delta0Exact };

struct Estimate {
    std::uint64_t trials;
    std::uint64_t successes;
    double point;                // successes / trials
    double ci_halfwidth_3sigma;  // 3 * sqrt(point * (1 - point) / trials)
};

Estimate make_estimate(std::uint64_t trials, std::uint64_t successes);

/// Runs sample_reduced_trial over per-trial substreams of master_seed. The
/// result is bit-identical for a given (master_seed, trials) no matter how
/// many threads execute it (threads = 0 picks the hardware count).
Estimate estimate(EstimateMode mode, ConfirmationDepth k, const ProtocolParams& params,
                  std::uint64_t trials, std::uint64_t master_seed, unsigned threads = 0);

} // namespace nakasec
