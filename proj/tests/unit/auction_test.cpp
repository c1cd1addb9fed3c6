#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "generators.hpp"
#include "gridp2p/auction.hpp"
#include "gridp2p/errors.hpp"
#include "oracles.hpp"

namespace gridp2p {
namespace {

Order ask(std::string id, double price, double qty) { return {std::move(id), cents_per_kwh(price), kwh(qty), Side::Ask}; }
Order bid(std::string id, double price, double qty) { return {std::move(id), cents_per_kwh(price), kwh(qty), Side::Bid}; }

std::vector<double> prices(const std::vector<Order>& side) {
    std::vector<double> out;
    for (const Order& o : side) {
        out.push_back(o.price.to_double());
    }
    return out;
}

std::vector<std::string> ids(const std::vector<Fill>& fills) {
    std::vector<std::string> out;
    for (const Fill& f : fills) {
        out.push_back(f.prosumer_id);
    }
    return out;
}

std::vector<Energy> energies(std::initializer_list<double> values) {
    std::vector<Energy> out;
    for (double v : values) {
        out.push_back(kwh(v));
    }
    return out;
}

TEST(OrderBooks, SortsAsksUpAndBidsDown) {
    const OrderBook sorted = order_books(OrderBook{{ask("a", 12, 1), ask("b", 11, 1), ask("c", 14, 1)},
                                                   {bid("x", 12, 1), bid("y", 15, 1), bid("z", 13, 1)}});
    EXPECT_EQ(prices(sorted.asks), (std::vector<double>{11, 12, 14}));
    EXPECT_EQ(prices(sorted.bids), (std::vector<double>{15, 13, 12}));
}

TEST(OrderBooks, TiesByQuantityThenId) {
    const OrderBook sorted = order_books(OrderBook{{ask("a", 11, 2), ask("b", 11, 5), ask("c", 11, 5)}, {}});
    EXPECT_EQ(sorted.asks[0].prosumer_id, "b");
    EXPECT_EQ(sorted.asks[1].prosumer_id, "c");
    EXPECT_EQ(sorted.asks[2].prosumer_id, "a");
}

TEST(Clear, ThreeByThreeBook) {
    const AuctionOutcome o = clear(OrderBook{{ask("s1", 11, 2), ask("s2", 12, 3), ask("s3", 14, 4)},
                                             {bid("b1", 15, 3), bid("b2", 13, 3), bid("b3", 12, 2)}});
    EXPECT_EQ(ids(o.sellers), (std::vector<std::string>{"s1", "s2"}));
    EXPECT_EQ(ids(o.buyers), (std::vector<std::string>{"b1", "b2"}));
    EXPECT_EQ(o.auction_price, cents_per_kwh(12));
    EXPECT_EQ(o.sellers[0].cleared, kwh(2));
    EXPECT_EQ(o.sellers[1].cleared, kwh(3));
    // Supply 5 against demand 6, split in proportion to the 3/3 bids.
    EXPECT_EQ(o.buyers[0].cleared, kwh(2.5));
    EXPECT_EQ(o.buyers[1].cleared, kwh(2.5));
    EXPECT_EQ(o.excluded, (std::vector<std::string>{"s3", "b3"}));
}

TEST(Clear, NoIntersectionIsEmpty) {
    const AuctionOutcome o = clear(OrderBook{{ask("s1", 14, 2), ask("s2", 15, 1)}, {bid("b1", 13, 3)}});
    EXPECT_TRUE(o.empty());
    EXPECT_EQ(o.excluded.size(), 3u);
}

TEST(Clear, EmptySideIsEmpty) {
    EXPECT_TRUE(clear(OrderBook{{ask("s1", 11, 2)}, {}}).empty());
    EXPECT_TRUE(clear(OrderBook{{}, {bid("b1", 11, 2)}}).empty());
    EXPECT_TRUE(clear(OrderBook{}).empty());
}

TEST(Clear, SinglePair) {
    const AuctionOutcome o = clear(OrderBook{{ask("s", 11, 2)}, {bid("b", 15, 3)}});
    EXPECT_EQ(o.auction_price, cents_per_kwh(11));
    EXPECT_EQ(o.seller_total(), kwh(2));
    EXPECT_EQ(o.buyer_total(), kwh(2));
}

TEST(Clear, VickreyUsesTheSecondHighestTradingAsk) {
    const OrderBook book{{ask("s1", 11, 2), ask("s2", 12, 3), ask("s3", 14, 4)},
                         {bid("b1", 15, 3), bid("b2", 13, 3)}};
    EXPECT_EQ(clear(book, AuctionPriceRule::Vickrey).auction_price, cents_per_kwh(11));
    EXPECT_EQ(clear(OrderBook{{ask("s", 11, 2)}, {bid("b", 15, 3)}}, AuctionPriceRule::Vickrey).auction_price,
              cents_per_kwh(11));
}

TEST(Clear, RejectsMalformedBooks) {
    EXPECT_THROW(clear(OrderBook{{ask("s", 11, 0)}, {bid("b", 15, 3)}}), DomainError);
    EXPECT_THROW(clear(OrderBook{{ask("s", 11, 1)}, {bid("s", 15, 3)}}), DomainError);
    EXPECT_THROW(clear(OrderBook{{bid("s", 11, 1)}, {}}), DomainError);
    EXPECT_THROW(clear(OrderBook{{ask("s", -1, 1)}, {}}), DomainError);
}

TEST(Clear, IndependentOfInputOrder) {
    testing::Rng rng(21);
    for (int i = 0; i < 500; ++i) {
        OrderBook book = testing::random_book(rng);
        const AuctionOutcome before = clear(book);
        std::shuffle(book.asks.begin(), book.asks.end(), rng.engine());
        std::shuffle(book.bids.begin(), book.bids.end(), rng.engine());
        const AuctionOutcome after = clear(book);
        EXPECT_EQ(before.sellers, after.sellers);
        EXPECT_EQ(before.buyers, after.buyers);
        EXPECT_EQ(before.auction_price, after.auction_price);
    }
}

TEST(Clear, MatchesTheUnitExpansionOracle) {
    testing::Rng rng(22);
    for (int i = 0; i < 3000; ++i) {
        const OrderBook book = testing::random_book(rng, 6);
        const AuctionOutcome o = clear(book);
        const testing::OracleClearing ref = testing::brute_force_clear(book.asks, book.bids, kwh(0.25));
        const auto sellers = ids(o.sellers);
        const auto buyers = ids(o.buyers);
        EXPECT_EQ(std::set<std::string>(sellers.begin(), sellers.end()), ref.sellers);
        EXPECT_EQ(std::set<std::string>(buyers.begin(), buyers.end()), ref.buyers);
        if (!o.sellers.empty()) {
            EXPECT_EQ(o.auction_price.raw(), *ref.highest_ask_raw);
            EXPECT_EQ(clear(book, AuctionPriceRule::Vickrey).auction_price.raw(), *ref.second_ask_raw);
        }
    }
}

TEST(Clear, PriceSitsBetweenTradingAsksAndBids) {
    testing::Rng rng(23);
    for (int i = 0; i < 2000; ++i) {
        const OrderBook book = testing::random_book(rng);
        for (AuctionPriceRule rule : {AuctionPriceRule::HighestReservation, AuctionPriceRule::Vickrey}) {
            const AuctionOutcome o = clear(book, rule);
            if (o.empty()) {
                continue;
            }
            for (const Fill& s : o.sellers) {
                if (rule == AuctionPriceRule::HighestReservation) {
                    EXPECT_LE(s.order_price, o.auction_price);
                }
            }
            for (const Fill& b : o.buyers) {
                EXPECT_GE(b.order_price, o.auction_price);
            }
            EXPECT_LE(clear(book, AuctionPriceRule::Vickrey).auction_price, clear(book).auction_price);
        }
    }
}

TEST(Clear, ConservesEnergy) {
    testing::Rng rng(24);
    for (int i = 0; i < 2000; ++i) {
        const AuctionOutcome o = clear(testing::random_book(rng));
        EXPECT_EQ(o.seller_total(), o.buyer_total());
        for (const Fill& s : o.sellers) {
            EXPECT_EQ(s.cleared + s.burden, s.offered);
        }
        for (const Fill& b : o.buyers) {
            EXPECT_LE(b.cleared, b.offered);
            EXPECT_GE(b.cleared, Energy{});
        }
    }
}

TEST(Allocate, EqualBurden) {
    const Allocation a = allocate(energies({5, 3}), energies({6}));
    EXPECT_EQ(a.seller_cleared, energies({4, 2}));
    EXPECT_EQ(a.seller_burden, energies({1, 1}));
    EXPECT_EQ(a.buyer_cleared, energies({6}));
}

TEST(Allocate, ShortSupplyClearsSellersFully) {
    const Allocation a = allocate(energies({2, 3}), energies({4, 2}));
    EXPECT_EQ(a.seller_cleared, energies({2, 3}));
    EXPECT_EQ(a.seller_burden, energies({0, 0}));
    EXPECT_EQ(sum(a.buyer_cleared), kwh(5));
}

TEST(Allocate, RedistributesClippedBurden) {
    const Allocation a = allocate(energies({5, 1}), energies({2}));
    EXPECT_EQ(a.seller_cleared, energies({2, 0}));
    EXPECT_EQ(a.seller_burden, energies({3, 1}));
}

TEST(Allocate, EmptySideClearsNothing) {
    const Allocation a = allocate(energies({5}), {});
    EXPECT_EQ(a.seller_cleared, energies({0}));
    EXPECT_THROW(allocate(energies({0}), energies({1})), DomainError);
    EXPECT_THROW(allocate(energies({1}), energies({-1})), DomainError);
}

TEST(Allocate, MatchesTheWaterLevelOracle) {
    testing::Rng rng(25);
    for (int i = 0; i < 3000; ++i) {
        const auto supplies = testing::random_quantities(rng, static_cast<std::size_t>(rng.integer(1, 8)), 1, 9'000'000'000);
        const auto demands = testing::random_quantities(rng, static_cast<std::size_t>(rng.integer(1, 8)), 1, 9'000'000'000);
        const Allocation a = allocate(supplies, demands);
        const Energy supply = sum(supplies);
        const Energy demand = sum(demands);
        EXPECT_EQ(sum(a.seller_cleared), min(supply, demand));
        EXPECT_EQ(sum(a.buyer_cleared), min(supply, demand));
        if (supply <= demand) {
            continue;
        }
        std::vector<std::int64_t> raw;
        for (Energy e : supplies) {
            raw.push_back(e.raw());
        }
        const testing::WaterLevel level = testing::equal_burden_level(raw, (supply - demand).raw());
        for (std::size_t n = 0; n < supplies.size(); ++n) {
            if (level.clips(supplies[n].raw())) {
                EXPECT_EQ(a.seller_burden[n], supplies[n]);
            } else {
                // Unclipped burdens equal the level up to one unit of remainder.
                const __int128 scaled = static_cast<__int128>(a.seller_burden[n].raw()) * level.den;
                EXPECT_LE(scaled - level.num, level.den);
                EXPECT_GE(scaled - level.num, -static_cast<__int128>(level.den));
            }
        }
    }
}

AuctionOutcome sample_outcome() {
    return clear(OrderBook{{ask("s1", 11, 5), ask("s2", 12, 3)}, {bid("b1", 15, 6)}});
}

TEST(VerifyTruthfulDelivery, TruthfulPasses) {
    const AuctionOutcome o = sample_outcome();
    const DeliveryReport r = verify_truthful_delivery(o, energies({4, 2}), energies({6}));
    EXPECT_TRUE(r.truthful());
    EXPECT_EQ(r.inconsistency, Energy{});
    EXPECT_EQ(r.burden_shift, 0.0);
}

TEST(VerifyTruthfulDelivery, OverDeliveryIsFlagged) {
    const DeliveryReport r = verify_truthful_delivery(sample_outcome(), energies({5, 2}));
    EXPECT_EQ(r.deviators, (std::vector<std::string>{"s1"}));
    EXPECT_EQ(r.inconsistency, kwh(1));
    EXPECT_DOUBLE_EQ(r.burden_shift, -0.5);
}

TEST(VerifyTruthfulDelivery, NothingDeliveredFlagsEverySeller) {
    const DeliveryReport r = verify_truthful_delivery(sample_outcome(), energies({0, 0}));
    EXPECT_EQ(r.deviators, (std::vector<std::string>{"s1", "s2"}));
    EXPECT_EQ(r.inconsistency, kwh(6));
}

TEST(VerifyTruthfulDelivery, BuyerShortfallIsFlagged) {
    const DeliveryReport r = verify_truthful_delivery(sample_outcome(), energies({4, 2}), energies({5}));
    EXPECT_EQ(r.deviators, (std::vector<std::string>{"b1"}));
}

TEST(VerifyTruthfulDelivery, DimensionMismatchIsADomainError) {
    EXPECT_THROW(verify_truthful_delivery(sample_outcome(), energies({4})), DomainError);
    EXPECT_THROW(verify_truthful_delivery(sample_outcome(), energies({4, 2}), energies({})), DomainError);
}

}  // namespace
}  // namespace gridp2p
