#pragma once

#include <cstdint>
#include <vector>

#include "nakasec/params.hpp"
#include "nakasec/reduced_sim.hpp"
#include "nakasec/rng.hpp"

namespace nakasec {

enum class Miner : std::uint8_t { Honest, Adversarial };
enum class GapAttr : std::uint8_t { Lagger, Tailgater };

/// One mined block. Attributes up to rigged_role are fixed at generation
/// time; height and parent_index are assigned while the attack executes.
struct Block {
    std::uint32_t index = 0;      // mining order; 0 is Genesis
    double mine_time = 0.0;
    Miner miner = Miner::Honest;
    GapAttr arrival_gap_attr = GapAttr::Lagger;
    Miner rigged_role = Miner::Honest; // honest only for laggers mined by honest nodes
    std::uint32_t height = 0;
    std::uint32_t parent_index = 0;
};

/// An ordered block sequence over [0, duration] with the parameters that
/// produced it. blocks[0] is Genesis at time 0, height 0.
struct SamplePath {
    ProtocolParams params;
    double duration;
    std::vector<Block> blocks;
};

/// Poisson(lambda) arrivals over (0, duration]; each block honest with
/// probability rho; a block is a lagger iff no other block was mined within
/// delta before it; laggers mined by honest nodes keep the honest role in
/// the reduced sequence, every other block plays adversarial.
SamplePath generate_sample_path(const ProtocolParams& params, double duration, PhiloxRng& rng);

enum class HaltReason : std::uint8_t { Success, DeficitThreshold, Horizon };

struct AttackOutcome {
    bool success = false;
    std::int64_t lead_at_tau = 0;
    std::uint64_t blocks_consumed = 0; // non-Genesis blocks processed
    HaltReason halt_reason = HaltReason::Horizon;
};

/// Executes the private-mining attack on a generated path. Before tau the
/// adversary builds its lead (reflected-at-zero walk over the reduced
/// honest/adversarial roles); after tau the first honest block carries the
/// target transaction and the race runs until the attack can violate its
/// safety, until the residual catch-up probability (q/p)^deficit drops
/// below epsilon_halt, or until the path is exhausted (Horizon).
/// Heights and parents are assigned on the path's blocks as a side effect.
AttackOutcome run_private_mining_attack(SamplePath& path, ConfirmationDepth k,
                                        double tau, double epsilon_halt);

/// Pre-race mixing allowance in expected block arrivals:
/// max(200, 40 / (2p - 1)^2).
double default_burn_in(double p);

struct FullSimResult {
    Estimate estimate;
    std::uint64_t horizon_halts = 0;
    double horizon_fraction = 0.0;
};

/// Per-trial path generation plus attack execution under the same substream
/// determinism contract as the reduced estimator. tau_burn_in <= 0 selects
/// default_burn_in(p); the fraction of horizon-halted trials is reported as
/// a quality diagnostic.
FullSimResult full_sim_estimate(const ProtocolParams& params, ConfirmationDepth k,
                                std::uint64_t trials, double tau_burn_in,
                                double epsilon_halt, std::uint64_t master_seed,
                                unsigned threads = 0);

} // namespace nakasec
