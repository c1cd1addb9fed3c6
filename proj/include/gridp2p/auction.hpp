#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gridp2p/market_core.hpp"

namespace gridp2p {

struct OrderBook {
    std::vector<Order> asks;
    std::vector<Order> bids;
    std::size_t slot = 0;
};

/// A participant that trades at the auction price.
struct Fill {
    std::string prosumer_id;
    Price order_price;
    Energy offered;   ///< submitted quantity
    Energy cleared;   ///< quantity actually traded
    Energy burden;    ///< unsold share (sellers only)

    bool operator==(const Fill&) const = default;
};

struct AuctionOutcome {
    Price auction_price;
    std::vector<Fill> sellers;  ///< trading sellers, in book order
    std::vector<Fill> buyers;   ///< trading buyers, in book order
    std::vector<std::string> excluded;

    bool empty() const { return sellers.empty() || buyers.empty(); }
    Energy seller_total() const;
    Energy buyer_total() const;
};

/// Asks ascending, bids descending; ties by quantity descending, then id.
OrderBook order_books(OrderBook book);

/** Clears the book at the intersection of the aggregated supply and demand step curves.
 *
 * Walking both sorted books, the breakeven point is the largest cumulative quantity
 * Q* up to which the marginal ask does not exceed the marginal bid. Every order whose
 * segment starts below Q* trades. With the HighestReservation rule the price is the
 * highest ask among trading sellers; with Vickrey it is the second highest (the only
 * ask when a single seller trades). Quantities are then set by `allocate`.
 * The book is sorted internally; it must satisfy the OrderBook invariants (positive
 * quantities, an id on at most one side) or DomainError is thrown.
 */
AuctionOutcome clear(const OrderBook& book, AuctionPriceRule rule = AuctionPriceRule::HighestReservation);

struct Allocation {
    std::vector<Energy> seller_cleared;
    std::vector<Energy> seller_burden;
    std::vector<Energy> buyer_cleared;
};

/** Splits traded energy between trading sellers and buyers.
 *
 * Supply short of demand: sellers clear fully and buyers are filled pro rata.
 * Supply in excess: each seller carries an equal burden of the excess; burden a
 * seller cannot absorb is spread equally over sellers that still have energy, until
 * the seller total equals demand. Remainders at the 1e-9 kWh resolution go to the
 * earliest sellers in book order.
 */
Allocation allocate(std::span<const Energy> supplies, std::span<const Energy> demands);

struct DeliveryReport {
    std::vector<std::string> deviators;
    Energy inconsistency;  ///< sum of |delivered - cleared| over all participants
    double burden_shift = 0.0;  ///< change of the recomputed equal burden, kWh per seller

    bool truthful() const { return deviators.empty(); }
};

/// Compares delivered seller quantities against the cleared ones.
DeliveryReport verify_truthful_delivery(const AuctionOutcome& outcome, std::span<const Energy> delivered);

/// Same check including the buyers' received quantities.
DeliveryReport verify_truthful_delivery(const AuctionOutcome& outcome, std::span<const Energy> seller_delivered,
                                        std::span<const Energy> buyer_received);

}  // namespace gridp2p
