#include "nakasec/path_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "nakasec/errors.hpp"
#include "parallel.hpp"

namespace nakasec {

namespace {

// Regenerates path.blocks over (0, duration]; reuses the vector's capacity.
void fill_path(SamplePath& path, double duration, PhiloxRng& rng) {
    const ProtocolParams& params = path.params;
    path.duration = duration;
    path.blocks.clear();
    path.blocks.push_back(Block{}); // Genesis: index 0, time 0, height 0

    double t = 0.0;
    std::uint32_t index = 0;
    while (true) {
        const double gap = rng.exponential(params.lambda());
        t += gap;
        if (t > duration) break;
        Block b;
        b.index = ++index;
        b.mine_time = t;
        b.miner = rng.bernoulli(params.rho()) ? Miner::Honest : Miner::Adversarial;
        // Lagger iff no other block was mined in (t - delta, t]. The previous
        // block is the only candidate: at delta = 0 the window is empty, so
        // every block is a lagger.
        b.arrival_gap_attr = gap >= params.delta() ? GapAttr::Lagger : GapAttr::Tailgater;
        b.rigged_role = (b.miner == Miner::Honest && b.arrival_gap_attr == GapAttr::Lagger)
                            ? Miner::Honest
                            : Miner::Adversarial;
        path.blocks.push_back(b);
    }
}

// Deficit at which (q/p)^D drops below epsilon.
std::int64_t deficit_threshold(double p, double epsilon_halt) {
    if (p >= 1.0) return 1;
    const double log_ratio = std::log((1.0 - p) / p);
    const std::int64_t d = static_cast<std::int64_t>(std::ceil(std::log(epsilon_halt) / log_ratio));
    return std::max<std::int64_t>(d, 1);
}

} // namespace

SamplePath generate_sample_path(const ProtocolParams& params, double duration, PhiloxRng& rng) {
    if (!std::isfinite(duration) || duration <= 0.0) {
        std::ostringstream msg;
        msg << "path duration must be positive and finite, got " << duration;
        throw DomainError(msg.str());
    }
    SamplePath path{params, duration, {}};
    fill_path(path, duration, rng);
    return path;
}

AttackOutcome run_private_mining_attack(SamplePath& path, ConfirmationDepth k, double tau,
                                        double epsilon_halt) {
    path.params.require_bounds_valid();
    if (!std::isfinite(tau) || tau < 0.0 || tau > path.duration) {
        std::ostringstream msg;
        msg << "tau must lie within the path duration [0, " << path.duration << "], got " << tau;
        throw DomainError(msg.str());
    }
    if (!(epsilon_halt > 0.0) || !(epsilon_halt < 1.0)) {
        std::ostringstream msg;
        msg << "epsilon_halt must lie in (0, 1), got " << epsilon_halt;
        throw DomainError(msg.str());
    }
    if (path.blocks.empty() || path.blocks.front().index != 0 || path.blocks.front().mine_time != 0.0) {
        throw DomainError("path must start with the Genesis block");
    }

    const double delta = path.params.delta();
    const std::int64_t kappa = k.value();
    const std::int64_t halt_deficit = deficit_threshold(path.params.p(), epsilon_halt);
    const std::size_t block_count = path.blocks.size();

    // Stage 1 (t <= tau): the lead is a reflected-at-zero walk, +1 per
    // adversarial block, -1 per honest block unless already 0.
    std::int64_t lead = 0;
    std::int64_t honest_height = 0; // height of the highest honest block
    std::uint32_t honest_tip = 0;
    std::uint32_t private_tip = 0;
    std::size_t pos = 1;
    for (; pos < block_count && path.blocks[pos].mine_time <= tau; ++pos) {
        Block& b = path.blocks[pos];
        const std::int64_t lead_before = lead;
        if (b.rigged_role == Miner::Adversarial) {
            const std::uint32_t parent = lead == 0 ? honest_tip : private_tip;
            b.parent_index = parent;
            b.height = path.blocks[parent].height + 1;
            private_tip = b.index;
            ++lead;
        } else {
            if (static_cast<std::int64_t>(path.blocks[honest_tip].height) != honest_height) {
                throw InvariantViolation("honest tip bookkeeping diverged from honest height");
            }
            b.parent_index = honest_tip;
            b.height = static_cast<std::uint32_t>(honest_height + 1);
            honest_tip = b.index;
            ++honest_height;
            if (lead > 0) --lead;
        }
        if (lead < 0 || std::llabs(lead - lead_before) > 1) {
            throw InvariantViolation("lead walk left the +-1 reflected regime");
        }
    }

    AttackOutcome outcome{};
    outcome.lead_at_tau = lead;

    // Stage 2 (t > tau): the first honest block carries the target
    // transaction at height honest_height + 1; the adversary extends its
    // private chain past it and publishes once it can override the commit.
    const std::int64_t h_tau = honest_height;
    if (lead == 0) private_tip = honest_tip;

    std::int64_t honest_post = 0;
    std::int64_t adv_post = 0;

    // Under maximal delay an honest block becomes public delta after it is
    // mined. pub_scan sweeps the block list once; published_height counts
    // honest blocks with mine_time <= now - delta.
    std::size_t pub_scan = 1;
    std::int64_t published_height = 0;
    const auto advance_published = [&](double now) {
        const double cutoff = now - delta;
        while (pub_scan < block_count && path.blocks[pub_scan].mine_time <= cutoff) {
            if (path.blocks[pub_scan].rigged_role == Miner::Honest) ++published_height;
            ++pub_scan;
        }
    };

    std::int64_t last_honest_height = h_tau;
    for (; pos < block_count; ++pos) {
        Block& b = path.blocks[pos];
        if (b.rigged_role == Miner::Adversarial) {
            b.parent_index = private_tip;
            b.height = path.blocks[private_tip].height + 1;
            private_tip = b.index;
            ++adv_post;
        } else {
            b.parent_index = honest_tip;
            b.height = static_cast<std::uint32_t>(h_tau + honest_post + 1);
            // Condition 1: honest blocks occupy strictly increasing heights
            if (static_cast<std::int64_t>(b.height) <= last_honest_height) {
                throw InvariantViolation("honest block height failed to increase");
            }
            last_honest_height = b.height;
            honest_tip = b.index;
            ++honest_post;
        }

        advance_published(b.mine_time);
        const std::int64_t private_height = h_tau + lead + adv_post;

        const bool committed = honest_post >= kappa;
        const bool private_deep = lead + adv_post >= kappa;
        const bool credible = private_height >= published_height;
        if (committed && private_deep && credible) {
            outcome.success = true;
            outcome.halt_reason = HaltReason::Success;
            outcome.blocks_consumed = pos;
            return outcome;
        }

        // Residual catch-up probability (q/p)^deficit has dropped below
        // epsilon_halt: abandon the race.
        if (published_height - private_height >= halt_deficit) {
            outcome.halt_reason = HaltReason::DeficitThreshold;
            outcome.blocks_consumed = pos;
            return outcome;
        }
    }

    outcome.halt_reason = HaltReason::Horizon;
    outcome.blocks_consumed = block_count - 1;
    return outcome;
}

double default_burn_in(double p) {
    const double drift = 2.0 * p - 1.0;
    return std::max(200.0, 40.0 / (drift * drift));
}

FullSimResult full_sim_estimate(const ProtocolParams& params, ConfirmationDepth k,
                                std::uint64_t trials, double tau_burn_in, double epsilon_halt,
                                std::uint64_t master_seed, unsigned threads) {
    if (trials == 0) throw TrialBudgetError("full_sim_estimate requires a positive trial count");
    params.require_bounds_valid();
    if (!(epsilon_halt > 0.0) || !(epsilon_halt < 1.0)) {
        std::ostringstream msg;
        msg << "epsilon_halt must lie in (0, 1), got " << epsilon_halt;
        throw DomainError(msg.str());
    }
    const double p = params.p();
    if (tau_burn_in <= 0.0) tau_burn_in = default_burn_in(p);

    // Size the horizon so that unresolved races are vanishingly rare: the
    // post-tau walk drifts down at 2p-1 per block and stops once it is
    // halt_deficit behind, so allow ten times that expectation plus slack.
    const double drift = 2.0 * p - 1.0;
    const double halt_def = static_cast<double>(deficit_threshold(p, epsilon_halt));
    const double race_blocks = 10.0 * (2.0 * k.value() + halt_def + 10.0) / drift + 200.0;
    const double expected_blocks = tau_burn_in + race_blocks;
    const double horizon_blocks = expected_blocks + 6.0 * std::sqrt(expected_blocks) + 64.0;
    const double tau = tau_burn_in / params.lambda();
    const double duration = horizon_blocks / params.lambda();

    struct Acc {
        std::uint64_t successes = 0;
        std::uint64_t horizon = 0;
        Acc& operator+=(const Acc& other) {
            successes += other.successes;
            horizon += other.horizon;
            return *this;
        }
    };

    const Acc total = detail::run_partitioned<Acc>(
        trials, threads, [&](std::uint64_t begin, std::uint64_t end) {
            Acc acc;
            SamplePath path{params, duration, {}};
            for (std::uint64_t trial = begin; trial < end; ++trial) {
                PhiloxRng rng = PhiloxRng::substream(master_seed, trial);
                fill_path(path, duration, rng);
                const AttackOutcome outcome = run_private_mining_attack(path, k, tau, epsilon_halt);
                acc.successes += outcome.success;
                acc.horizon += outcome.halt_reason == HaltReason::Horizon;
            }
            return acc;
        });

    FullSimResult result{};
    result.estimate = make_estimate(trials, total.successes);
    result.horizon_halts = total.horizon;
    result.horizon_fraction = static_cast<double>(total.horizon) / static_cast<double>(trials);
    return result;
}

} // namespace nakasec
