#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "generators.hpp"
#include "gridp2p/case_study.hpp"
#include "gridp2p/errors.hpp"
#include "gridp2p/leader.hpp"
#include "gridp2p/prosumer.hpp"
#include "oracles.hpp"

namespace gridp2p {
namespace {

TEST(CpsCost, Examples) {
    EXPECT_DOUBLE_EQ(cps_cost(1, 2, 10, 12, 28), -280.0);
    EXPECT_DOUBLE_EQ(cps_cost(1, 2, 10, 8, 3), -22.0);
    EXPECT_DOUBLE_EQ(cps_cost(5, 7, 6, 6, 4), -24.0);
}

TEST(CpsCost, ZeroDeliveredDemandCostsNothing) {
    EXPECT_EQ(cps_cost(68.6, 274.4, 0, 8, 548.8), 0.0);
    EXPECT_EQ(cps_excess_cost(68.6, 274.4, 0, 8), 0.0);
}

TEST(CpsCost, NegativeInputIsADomainError) {
    EXPECT_THROW(cps_cost(1, 2, -1, 3, 28), DomainError);
    EXPECT_THROW(cps_excess_cost(1, 2, 1, -3), DomainError);
}

TEST(CpsCost, MatchesReferenceOnRandomInputs) {
    testing::Rng rng(5);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.real(0.1, 100, 0.1);
        const double b = rng.real(0.1, 400, 0.1);
        const double e_d = rng.real(0, 60, 0.001);
        const double e_t = rng.real(0, 60, 0.001);
        const double p = rng.real(0, 600, 0.01);
        EXPECT_NEAR(cps_cost(a, b, e_d, e_t, p), testing::cps_cost_reference(a, b, e_d, e_t, p), 1e-9);
    }
}

TEST(PeakPrice, Examples) {
    EXPECT_DOUBLE_EQ(peak_price(1, 100, 10, 8), 104.0);
    EXPECT_NEAR(peak_price(68.6, 274.4, 10, 8), 548.8, 1e-9);
    EXPECT_NEAR(peak_price(68.6, 274.4, 10, 8) / 28.0, 19.6, 1e-9);
    EXPECT_NEAR(peak_price(1e-12, 50, 10, 8), 50.0, 1e-9);
}

TEST(PeakPrice, RequiresDemandAboveThreshold) {
    EXPECT_THROW(peak_price(1, 2, 8, 8), PreconditionError);
    EXPECT_THROW(peak_price(1, 2, 7, 8), PreconditionError);
}

TEST(PeakPrice, StrictlyIncreasingInDemandAndSlope) {
    testing::Rng rng(8);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.real(0.1, 100, 0.1);
        const double b = rng.real(1, 400, 0.1);
        const double e_t = rng.real(0, 50, 0.01);
        const double e_d = e_t + rng.real(0.01, 10, 0.01);
        EXPECT_LT(peak_price(a, b, e_d, e_t), peak_price(a, b, e_d + 0.01, e_t));
        EXPECT_LT(peak_price(a, b, e_d, e_t), peak_price(a, b + 0.1, e_d, e_t));
    }
}

TEST(PeakPrice, MinimizesTheLeaderCostOverDemand) {
    // At p = peak_price(x0), J(e_d) is minimized at e_d = e_t + x0.
    testing::Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        const double a = rng.real(1, 100, 0.1);
        const double b = rng.real(1, 400, 0.1);
        const double e_t = rng.real(1, 50, 0.01);
        const double x0 = rng.real(0.1, 10, 0.01);
        const double p = peak_price(a, b, e_t + x0, e_t);
        const double at = testing::cps_cost_reference(a, b, e_t + x0, e_t, p);
        for (double h : {1e-3, 1e-2, 0.1}) {
            EXPECT_LT(at, testing::cps_cost_reference(a, b, e_t + x0 + h, e_t, p));
            EXPECT_LT(at, testing::cps_cost_reference(a, b, e_t + x0 - h, e_t, p));
        }
    }
}

TEST(MinB, Examples) {
    EXPECT_NEAR(min_b(1, 2, 10, 8), (2 - 4 * std::numbers::ln2) / std::numbers::ln2, 1e-12);
    EXPECT_NEAR(min_b(1, 2, 10, 8), -1.114610, 1e-6);
    EXPECT_NEAR(min_b(1e-12, 3, 10, 8), 3 / std::numbers::ln2, 1e-9);
    EXPECT_NEAR(min_b(1e-12, std::numbers::ln2, 10, 8), 1.0, 1e-9);
}

TEST(MinB, BoundImpliesPeakPriceAboveEveryWillingness) {
    testing::Rng rng(10);
    for (int i = 0; i < 2000; ++i) {
        const double a = rng.real(0.1, 50, 0.1);
        const double alpha_max = rng.real(0.5, 40, 0.1);
        const double e_t = rng.real(0, 30, 0.01);
        const double e_d = e_t + rng.real(0.01, 5, 0.01);
        const double b = min_b(a, alpha_max, e_d, e_t) + rng.real(0.01, 50, 0.01);
        if (b <= 0) {
            continue;
        }
        const double p = peak_price(a, b, e_d, e_t);
        for (double alpha = 0.5; alpha <= alpha_max; alpha += 0.5) {
            EXPECT_GT(p, max_willingness_price(alpha));
            EXPECT_EQ(optimal_grid_purchase(alpha, p), 0.0);
        }
    }
}

TEST(DecideSlotPrice, OffPeakUsesTheStandardTariff) {
    Scenario s = testing::single_slot({{"s", 3, 12}, {"b", -5, 14}}, -3.0);  // E_D 5, E_T 8
    const PriceSignal sig = decide_slot_price(s, 0);
    EXPECT_FALSE(sig.peak_flag);
    EXPECT_EQ(sig.selling_price, cents_per_kwh(28));
    EXPECT_EQ(sig.buying_price, s.grid.fit_price);
    EXPECT_EQ(sig.demand, kwh(5));
    EXPECT_EQ(sig.threshold, kwh(8));
}

TEST(DecideSlotPrice, PeakUsesTheLeaderStrategy) {
    const PriceSignal sig = decide_slot_price(testing::worked_slot_scenario(), 0);
    EXPECT_TRUE(sig.peak_flag);
    EXPECT_EQ(sig.selling_price, cents_per_kwh(548.8));
    EXPECT_EQ(sig.buying_price, cents_per_kwh(10));
}

TEST(DecideSlotPrice, BoundaryIsOffPeak) {
    Scenario s = testing::single_slot({{"b", -5, 14}}, 0.0);
    EXPECT_FALSE(decide_slot_price(s, 0).peak_flag);
}

TEST(DecideSlotPrice, SlopeBelowBoundIsAConfigurationError) {
    // a tiny and b below alpha/ln2: the peak price would not deter grid purchases.
    Scenario s = testing::single_slot({{"b", -5, 14}}, 0.1, 0.01, 20.0);
    s.prosumers[0].alpha = {40.0};
    try {
        decide_slot_price(s, 0);
        FAIL() << "expected ConfigurationError";
    } catch (const ConfigurationError& e) {
        EXPECT_NE(std::string(e.what()).find("slot 0"), std::string::npos) << e.what();
    }
}

TEST(DecideSlotPrice, PeakBelowOffPeakTariffIsAConfigurationError) {
    Scenario s = testing::single_slot({{"b", -5, 14}}, 0.1, 0.01, 25.0);
    s.prosumers[0].alpha = {1.0};
    EXPECT_THROW(decide_slot_price(s, 0), ConfigurationError);
}

TEST(DecideSlotPrice, PeakSignalsSatisfyTheDeterrenceBound) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Scenario s = make_case_study_scenario(seed);
        for (std::size_t t = 0; t < s.slots; ++t) {
            const PriceSignal sig = decide_slot_price(s, t);
            EXPECT_GE(sig.selling_price, s.grid.offpeak_price);
            if (sig.peak_flag) {
                for (const ProsumerProfile& p : s.prosumers) {
                    EXPECT_GT(sig.selling_price.to_double(), max_willingness_price(p.alpha_at(t)));
                }
            }
        }
    }
}

}  // namespace
}  // namespace gridp2p
