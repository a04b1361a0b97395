#include "nakasec/reduced_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nakasec/errors.hpp"
#include "parallel.hpp"

namespace nakasec {

namespace {

void require_walk_p(double p) {
    if (!(p > 0.5) || !(p <= 1.0)) {
        std::ostringstream msg;
        msg << "lead-race sampling requires honest fraction in (1/2, 1], got p = " << p;
        throw DomainError(msg.str());
    }
}

} // namespace

std::int64_t sample_stationary_lead(double p, PhiloxRng& rng) {
    require_walk_p(p);
    return sample_geometric_tail(rng, (1.0 - p) / p);
}

std::int64_t sample_max_reach(double p, PhiloxRng& rng) {
    // same geometric law as the stationary lead
    require_walk_p(p);
    return sample_geometric_tail(rng, (1.0 - p) / p);
}

ReducedTrial sample_reduced_trial(ConfirmationDepth k, double p, PhiloxRng& rng) {
    require_walk_p(p);
    const std::int64_t kappa = k.value();
    const double ratio = (1.0 - p) / p;

    ReducedTrial trial{};
    trial.lead = sample_geometric_tail(rng, ratio);
    trial.adversarial = sample_binomial(rng, std::max<std::int64_t>(2 * kappa - trial.lead, 0), 1.0 - p);
    trial.max_reach = sample_geometric_tail(rng, ratio);

    const std::int64_t score = 2 * trial.lead + 2 * trial.adversarial + trial.max_reach;
    trial.rigged_event = score >= 2 * kappa - 1;
    trial.exact_event = score >= 2 * kappa;
    return trial;
}

Estimate make_estimate(std::uint64_t trials, std::uint64_t successes) {
    Estimate est{trials, successes, 0.0, 0.0};
    est.point = static_cast<double>(successes) / static_cast<double>(trials);
    est.ci_halfwidth_3sigma =
        3.0 * std::sqrt(est.point * (1.0 - est.point) / static_cast<double>(trials));
    return est;
}

Estimate estimate(EstimateMode mode, ConfirmationDepth k, const ProtocolParams& params,
                  std::uint64_t trials, std::uint64_t master_seed, unsigned threads) {
    if (trials == 0) throw TrialBudgetError("estimate requires a positive trial count");
    params.require_bounds_valid();
    const double walk_p = mode == EstimateMode::RiggedUpper ? params.p() : params.rho();

    struct Acc {
        std::uint64_t successes = 0;
        Acc& operator+=(const Acc& other) {
            successes += other.successes;
            return *this;
        }
    };

    const Acc total = detail::run_partitioned<Acc>(
        trials, threads, [&](std::uint64_t begin, std::uint64_t end) {
            Acc acc;
            for (std::uint64_t trial = begin; trial < end; ++trial) {
                PhiloxRng rng = PhiloxRng::substream(master_seed, trial);
                const ReducedTrial sample = sample_reduced_trial(k, walk_p, rng);
                acc.successes += mode == EstimateMode::RiggedUpper ? sample.rigged_event
                                                                   : sample.exact_event;
            }
            return acc;
        });

    return make_estimate(trials, total.successes);
}

} // namespace nakasec
