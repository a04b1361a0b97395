#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nakasec/bounds.hpp"
#include "nakasec/errors.hpp"
#include "support/oracles.hpp"

using namespace nakasec;

namespace {

const ProtocolParams kBtc90 = ProtocolParams::validate(1.0 / 600.0, 0.9, 10.0);
const ProtocolParams kBtc75 = ProtocolParams::validate(1.0 / 600.0, 0.75, 10.0);
const ProtocolParams kBtc60 = ProtocolParams::validate(1.0 / 600.0, 0.6, 10.0);
const ProtocolParams kEth90 = ProtocolParams::validate(1.0 / 13.0, 0.9, 2.0);
const ProtocolParams kNoAdversary = ProtocolParams::validate(1.0, 1.0, 0.0);

ProtocolParams pure(double rho) { return ProtocolParams::validate(1.0, rho, 0.0); }

} // namespace

TEST_CASE("thm1_upper matches the closed form and rejects p = 1") {
    CHECK(thm1_upper(ConfirmationDepth(6), kBtc90) ==
          doctest::Approx(0.034181670940228118).epsilon(1e-12));
    CHECK_THROWS_AS(thm1_upper(ConfirmationDepth(3), kNoAdversary), DomainError);
    CHECK_THROWS_AS(thm1_upper(ConfirmationDepth(3), ProtocolParams::validate(1.0, 0.4, 0.0)),
                    FaultToleranceExceeded);
}

TEST_CASE("thm1_lower matches the closed form") {
    for (int k : {1, 3, 9}) CHECK(thm1_lower(ConfirmationDepth(k), 1.0) == 0.0);
    CHECK(thm1_lower(ConfirmationDepth(6), 0.9) ==
          doctest::Approx(8.8866766738393426e-4).epsilon(1e-12));
    CHECK(thm1_lower(ConfirmationDepth(1), 0.75) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK_THROWS_AS(thm1_lower(ConfirmationDepth(3), 0.5), DomainError);
    CHECK_THROWS_AS(thm1_lower(ConfirmationDepth(3), 1.1), DomainError);
}

TEST_CASE("entropy identity holds to near machine precision") {
    CHECK(std::abs(entropy_identity_residual(ConfirmationDepth(1), 0.75)) <= 1e-15);

    const double p = 0.885124;
    const double scale = std::exp(50 * std::log(4.0 * p * (1.0 - p)));
    CHECK(std::abs(entropy_identity_residual(ConfirmationDepth(50), p)) <= 1e-12 * scale);

    // near the fault tolerance boundary both forms approach 1
    const double near_half = 0.5 + 1e-9;
    CHECK(std::abs(entropy_identity_residual(ConfirmationDepth(6), near_half)) <= 1e-15);
    const double direct = std::exp(6 * std::log(4.0 * near_half * (1.0 - near_half)));
    CHECK(direct == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(entropy_identity_residual(ConfirmationDepth(3), 0.5), DomainError);
    CHECK_THROWS_AS(entropy_identity_residual(ConfirmationDepth(3), 1.0), DomainError);
}

TEST_CASE("thm2_upper reproduces the reported headline levels") {
    const double at6 = thm2_upper(ConfirmationDepth(6), kBtc90);
    CHECK(at6 == doctest::Approx(0.0035256342371160303).epsilon(1e-12));
    CHECK(oracle::round_sig(at6, 2) == doctest::Approx(0.0035).epsilon(1e-12));

    const double at14 = thm2_upper(ConfirmationDepth(14), kBtc90);
    CHECK(at14 == doctest::Approx(2.0174256900480133e-6).epsilon(1e-12));
    CHECK(oracle::round_sig(at14, 1) == doctest::Approx(2e-6).epsilon(1e-12));

    CHECK(thm2_upper(ConfirmationDepth(1), kBtc90) ==
          doctest::Approx(0.40671706819612384).epsilon(1e-12));
    CHECK(thm2_upper(ConfirmationDepth(6), kBtc75) ==
          doctest::Approx(0.18476770940722567).epsilon(1e-12));

    // shrinking the delay can only shrink the bound
    const ProtocolParams no_delay = ProtocolParams::validate(1.0 / 600.0, 0.9, 0.0);
    CHECK(thm2_upper(ConfirmationDepth(6), no_delay) < at6);

    CHECK_THROWS_AS(thm2_upper(ConfirmationDepth(6), ProtocolParams::validate(1.0, 0.45, 0.0)),
                    FaultToleranceExceeded);
}

TEST_CASE("thm2_lower reproduces the reported headline levels") {
    const double at6 = thm2_lower(ConfirmationDepth(6), 0.9);
    CHECK(at6 == doctest::Approx(0.0010693256533333333).epsilon(1e-12));
    CHECK(oracle::round_sig(at6, 2) == doctest::Approx(0.0011).epsilon(1e-12));

    const double at14 = thm2_lower(ConfirmationDepth(14), 0.9);
    CHECK(at14 == doctest::Approx(2.1451659611273229e-7).epsilon(1e-12));
    CHECK(oracle::round_sig(at14, 1) == doctest::Approx(2e-7).epsilon(1e-12));

    CHECK(thm2_lower(ConfirmationDepth(3), 0.9) ==
          doctest::Approx(0.028906666666666667).epsilon(1e-13));
    CHECK(thm2_lower(ConfirmationDepth(2), 0.75) == doctest::Approx(11.0 / 24.0).epsilon(1e-13));
    for (int k : {1, 2, 5}) CHECK(thm2_lower(ConfirmationDepth(k), 1.0) == 0.0);
    CHECK_THROWS_AS(thm2_lower(ConfirmationDepth(3), 0.5), DomainError);
}

TEST_CASE("series bounds agree with the statement-form transcription") {
    for (double p : {0.55, 0.6, 0.75, 0.9, 0.885124, 0.99}) {
        const ProtocolParams params = pure(p);
        for (int k : {1, 2, 3, 5, 8, 13, 25}) {
            const double upper = thm2_upper(ConfirmationDepth(k), params);
            CHECK(upper == doctest::Approx(oracle::series_statement_form(k, p, 1)).epsilon(1e-12));
            const double lower = thm2_lower(ConfirmationDepth(k), p);
            CHECK(lower == doctest::Approx(oracle::series_statement_form(k, p, 2)).epsilon(1e-12));
        }
    }
}

TEST_CASE("series bounds agree with direct event enumeration") {
    for (double rho : {0.55, 0.6, 0.75, 0.9, 0.99}) {
        for (int k : {1, 2, 3, 4, 6, 9, 12, 20, 40}) {
            const double lower = thm2_lower(ConfirmationDepth(k), rho);
            CHECK(lower == doctest::Approx(oracle::lbm_enumeration(k, rho, 2 * k)).epsilon(1e-12));
        }
    }
    for (int k : {1, 2, 3, 6, 14, 30}) {
        const double upper = thm2_upper(ConfirmationDepth(k), kBtc90);
        CHECK(upper ==
              doctest::Approx(oracle::lbm_enumeration(k, kBtc90.p(), 2 * k - 1)).epsilon(1e-12));
    }
}

TEST_CASE("bounds_report bundles the four bounds with clamped views") {
    const BoundsReport rep = bounds_report(ConfirmationDepth(6), kBtc90);
    CHECK(rep.thm2_lower_raw == doctest::Approx(0.0010693256533333333).epsilon(1e-12));
    CHECK(rep.thm2_upper_raw == doctest::Approx(0.0035256342371160303).epsilon(1e-12));
    CHECK(rep.thm1_upper_raw == doctest::Approx(0.034181670940228118).epsilon(1e-12));
    CHECK(rep.thm1_lower_raw == doctest::Approx(8.8866766738393426e-4).epsilon(1e-12));

    // raw values above 1 survive with a clamped companion
    const BoundsReport small_k = bounds_report(ConfirmationDepth(1), kBtc90);
    CHECK(small_k.thm1_upper_raw > 1.0);
    CHECK(small_k.thm1_upper_clamped() == 1.0);
    CHECK(small_k.thm2_upper_clamped() == small_k.thm2_upper_raw);

    const BoundsReport no_attack = bounds_report(ConfirmationDepth(5), kNoAdversary);
    CHECK(no_attack.thm1_lower_raw == 0.0);
    CHECK(no_attack.thm2_lower_raw == 0.0);
    CHECK(no_attack.thm2_upper_raw == 0.0);
    CHECK(no_attack.thm1_upper_raw == 0.0);

    // a 20-block rule at 25% adversarial sits near the 6-block 10% level
    const BoundsReport twenty = bounds_report(ConfirmationDepth(20), kBtc75);
    const double headline = thm2_upper(ConfirmationDepth(6), kBtc90);
    CHECK(twenty.thm2_upper_raw / headline > 0.5);
    CHECK(twenty.thm2_upper_raw / headline < 1.5);

    CHECK_THROWS_AS(bounds_report(ConfirmationDepth(6), ProtocolParams::validate(1.0, 0.4, 0.0)),
                    FaultToleranceExceeded);
}

TEST_CASE("tightness ordering holds across a parameter grid") {
    for (double rho : {0.55, 0.65, 0.75, 0.85, 0.95}) {
        for (double delta : {0.0, 2.0, 10.0, 30.0}) {
            for (double lambda : {1.0 / 600.0, 1.0 / 13.0}) {
                const ProtocolParams params = ProtocolParams::validate(lambda, rho, delta);
                if (!params.bounds_valid()) continue;
                for (int k : {1, 2, 3, 5, 12, 30}) {
                    const BoundsReport rep = bounds_report(ConfirmationDepth(k), params);
                    CHECK(rep.thm2_lower_raw <= rep.thm2_upper_raw * (1 + 1e-12) + 1e-300);
                    CHECK(rep.thm2_upper_raw <= rep.thm1_upper_raw * (1 + 1e-12) + 1e-300);
                    // the exponential lower bound's constant is loose below
                    // depth 3, where it can exceed the exact series value
                    if (k >= 3) {
                        CHECK(rep.thm1_lower_raw <= rep.thm2_lower_raw * (1 + 1e-12) + 1e-300);
                    }
                }
            }
        }
    }
}

TEST_CASE("the exponential lower bound overshoots the exact law at depth 1") {
    // 0.75 > 11/24-level value: the sqrt(k) prefactor is too generous here,
    // so the k >= 3 restriction above is load-bearing, not cosmetic
    CHECK(thm1_lower(ConfirmationDepth(1), 0.75) > thm2_lower(ConfirmationDepth(1), 0.75));
    CHECK(thm1_lower(ConfirmationDepth(1), 0.9) > thm2_lower(ConfirmationDepth(1), 0.9));
}

TEST_CASE("bounds are monotone in depth, delay, and honest fraction") {
    // non-increasing in k
    BoundsReport previous = bounds_report(ConfirmationDepth(1), kEth90);
    for (int k = 2; k <= 40; ++k) {
        const BoundsReport rep = bounds_report(ConfirmationDepth(k), kEth90);
        CHECK(rep.thm1_lower_raw <= previous.thm1_lower_raw * (1 + 1e-12));
        CHECK(rep.thm2_lower_raw <= previous.thm2_lower_raw * (1 + 1e-12));
        CHECK(rep.thm2_upper_raw <= previous.thm2_upper_raw * (1 + 1e-12));
        CHECK(rep.thm1_upper_raw <= previous.thm1_upper_raw * (1 + 1e-12));
        previous = rep;
    }

    // upper bounds grow with delay and shrink with honest fraction
    double last_upper = 0.0;
    for (double delta : {0.0, 2.0, 10.0, 30.0}) {
        const ProtocolParams params = ProtocolParams::validate(1.0 / 600.0, 0.9, delta);
        const double upper = thm2_upper(ConfirmationDepth(6), params);
        CHECK(upper >= last_upper);
        CHECK(thm1_upper(ConfirmationDepth(6), params) >= upper);
        last_upper = upper;
    }
    double previous_upper = 1.0;
    for (double rho : {0.6, 0.75, 0.9}) {
        const ProtocolParams params = ProtocolParams::validate(1.0 / 600.0, rho, 10.0);
        const double upper = thm2_upper(ConfirmationDepth(6), params);
        CHECK(upper <= previous_upper);
        previous_upper = upper;
    }

    // lower bounds depend only on rho: identical under different rates/delays
    const BoundsReport slow = bounds_report(ConfirmationDepth(6), kBtc90);
    const BoundsReport fast = bounds_report(ConfirmationDepth(6), kEth90);
    CHECK(slow.thm2_lower_raw == fast.thm2_lower_raw);
    CHECK(slow.thm1_lower_raw == fast.thm1_lower_raw);
}

TEST_CASE("series upper bound approaches the exponential slope") {
    for (const ProtocolParams& params : {kBtc90, pure(0.75)}) {
        const double slope = 4.0 * params.p() * (1.0 - params.p());
        const double at200 = thm2_upper(ConfirmationDepth(200), params);
        const double at201 = thm2_upper(ConfirmationDepth(201), params);
        CHECK(at201 / at200 == doctest::Approx(slope).epsilon(0.01));
    }
}

TEST_CASE("min_depth_for_risk finds the smallest qualifying depth") {
    const double headline6 = thm2_upper(ConfirmationDepth(6), kBtc90);
    const auto depth6 = min_depth_for_risk(kBtc75, headline6, BoundSelector::Thm2Upper);
    REQUIRE(depth6.has_value());
    CHECK(depth6->k >= 19);
    CHECK(depth6->k <= 23);
    CHECK(depth6->bound_value <= headline6);
    CHECK(thm2_upper(ConfirmationDepth(depth6->k - 1), kBtc75) > headline6);

    const double headline14 = thm2_upper(ConfirmationDepth(14), kBtc90);
    const auto depth14 = min_depth_for_risk(kBtc75, headline14, BoundSelector::Thm2Upper);
    REQUIRE(depth14.has_value());
    CHECK(depth14->k >= 47);
    CHECK(depth14->k <= 53);

    const auto trivial = min_depth_for_risk(kBtc60, 1.0 - 1e-9, BoundSelector::Thm2Upper);
    REQUIRE(trivial.has_value());
    CHECK(trivial->k == 1);

    const auto unreachable = min_depth_for_risk(kBtc60, 1e-9, BoundSelector::Thm2Upper, 10);
    CHECK_FALSE(unreachable.has_value());

    CHECK_THROWS_AS(min_depth_for_risk(kBtc90, 0.0, BoundSelector::Thm2Upper), DomainError);
    CHECK_THROWS_AS(min_depth_for_risk(kBtc90, 1.0, BoundSelector::Thm2Upper), DomainError);
    CHECK_THROWS_AS(min_depth_for_risk(kBtc90, 0.5, BoundSelector::Thm2Upper, 0), DomainError);
    CHECK_THROWS_AS(
        min_depth_for_risk(ProtocolParams::validate(1.0, 0.3, 0.0), 0.5, BoundSelector::Thm2Upper),
        FaultToleranceExceeded);
}

TEST_CASE("min_depth_for_risk serves every selector") {
    const double target = 1e-4;
    for (BoundSelector sel : {BoundSelector::Thm1Upper, BoundSelector::Thm1Lower,
                              BoundSelector::Thm2Upper, BoundSelector::Thm2Lower}) {
        const auto solution = min_depth_for_risk(kBtc90, target, sel);
        REQUIRE(solution.has_value());
        CHECK(solution->bound_value <= target);
        CHECK(solution->k >= 1);
    }
}

TEST_CASE("sweep emits one ordered row per depth") {
    const SweepTable table = sweep(kBtc75, 1, 30);
    REQUIRE(table.rows.size() == 30);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CHECK(table.rows[i].k == static_cast<int>(i) + 1);
        if (i > 0) {
            CHECK(table.rows[i].thm2_upper_raw <= table.rows[i - 1].thm2_upper_raw * (1 + 1e-12));
            CHECK(table.rows[i].thm2_lower_raw <= table.rows[i - 1].thm2_lower_raw * (1 + 1e-12));
        }
    }

    const SweepTable single = sweep(kEth90, 1, 1);
    CHECK(single.rows.size() == 1);
    CHECK(single.rows[0].k == 1);

    CHECK_THROWS_AS(sweep(kBtc90, 0, 5), DomainError);
    CHECK_THROWS_AS(sweep(kBtc90, 5, 3), DomainError);
}
