#include "gridp2p/auction.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "gridp2p/errors.hpp"

namespace gridp2p {

namespace {

bool tie_break(const Order& l, const Order& r) {
    if (l.quantity != r.quantity) {
        return l.quantity > r.quantity;
    }
    return l.prosumer_id < r.prosumer_id;
}

void check_book(const OrderBook& book) {
    std::set<std::string> ids;
    auto check = [&](const std::vector<Order>& side, Side expected) {
        for (const Order& o : side) {
            if (o.side != expected) {
                throw DomainError("order for " + o.prosumer_id + " is on the wrong side of the book");
            }
            if (!(o.quantity > Energy{})) {
                throw DomainError("order for " + o.prosumer_id + " has non-positive quantity");
            }
            if (o.price < Price{}) {
                throw DomainError("order for " + o.prosumer_id + " has a negative price");
            }
            if (!ids.insert(o.prosumer_id).second) {
                throw DomainError("prosumer " + o.prosumer_id + " appears more than once in the book");
            }
        }
    };
    check(book.asks, Side::Ask);
    check(book.bids, Side::Bid);
}

std::vector<Energy> quantities(const std::vector<Fill>& fills, Energy Fill::*field) {
    std::vector<Energy> out;
    out.reserve(fills.size());
    for (const Fill& f : fills) {
        out.push_back(f.*field);
    }
    return out;
}

}  // namespace

Energy AuctionOutcome::seller_total() const {
    Energy total{};
    for (const Fill& f : sellers) {
        total += f.cleared;
    }
    return total;
}

Energy AuctionOutcome::buyer_total() const {
    Energy total{};
    for (const Fill& f : buyers) {
        total += f.cleared;
    }
    return total;
}

OrderBook order_books(OrderBook book) {
    std::sort(book.asks.begin(), book.asks.end(), [](const Order& l, const Order& r) {
        return l.price != r.price ? l.price < r.price : tie_break(l, r);
    });
    std::sort(book.bids.begin(), book.bids.end(), [](const Order& l, const Order& r) {
        return l.price != r.price ? l.price > r.price : tie_break(l, r);
    });
    return book;
}

AuctionOutcome clear(const OrderBook& unsorted, AuctionPriceRule rule) {
    check_book(unsorted);
    const OrderBook book = order_books(unsorted);
    const auto& asks = book.asks;
    const auto& bids = book.bids;

    // Walk the step curves while the marginal ask is within the marginal bid.
    std::size_t i = 0;
    std::size_t j = 0;
    Energy ask_end = asks.empty() ? Energy{} : asks[0].quantity;
    Energy bid_end = bids.empty() ? Energy{} : bids[0].quantity;
    Energy breakeven{};
    while (i < asks.size() && j < bids.size() && asks[i].price <= bids[j].price) {
        breakeven = min(ask_end, bid_end);
        const bool ask_done = ask_end == breakeven;
        const bool bid_done = bid_end == breakeven;
        if (ask_done && ++i < asks.size()) {
            ask_end += asks[i].quantity;
        }
        if (bid_done && ++j < bids.size()) {
            bid_end += bids[j].quantity;
        }
    }

    AuctionOutcome out;
    auto take = [&](const std::vector<Order>& side, std::vector<Fill>& fills) {
        Energy start{};
        for (const Order& o : side) {
            if (start < breakeven) {
                fills.push_back(Fill{o.prosumer_id, o.price, o.quantity, Energy{}, Energy{}});
            } else {
                out.excluded.push_back(o.prosumer_id);
            }
            start += o.quantity;
        }
    };
    take(asks, out.sellers);
    take(bids, out.buyers);

    if (out.sellers.empty()) {
        return out;
    }
    const std::size_t k = out.sellers.size();
    out.auction_price = (rule == AuctionPriceRule::Vickrey && k >= 2) ? out.sellers[k - 2].order_price
                                                                       : out.sellers[k - 1].order_price;

    const Allocation alloc = allocate(quantities(out.sellers, &Fill::offered), quantities(out.buyers, &Fill::offered));
    for (std::size_t n = 0; n < out.sellers.size(); ++n) {
        out.sellers[n].cleared = alloc.seller_cleared[n];
        out.sellers[n].burden = alloc.seller_burden[n];
    }
    for (std::size_t m = 0; m < out.buyers.size(); ++m) {
        out.buyers[m].cleared = alloc.buyer_cleared[m];
    }
    return out;
}

Allocation allocate(std::span<const Energy> supplies, std::span<const Energy> demands) {
    Allocation out;
    out.seller_cleared.assign(supplies.size(), Energy{});
    out.seller_burden.assign(supplies.size(), Energy{});
    out.buyer_cleared.assign(demands.size(), Energy{});
    if (supplies.empty() || demands.empty()) {
        return out;
    }
    for (Energy e : supplies) {
        if (!(e > Energy{})) {
            throw DomainError("allocate: supplies must be positive");
        }
    }
    for (Energy e : demands) {
        if (!(e > Energy{})) {
            throw DomainError("allocate: demands must be positive");
        }
    }

    const Energy supply = sum(supplies);
    const Energy demand = sum(demands);
    if (supply <= demand) {
        out.seller_cleared.assign(supplies.begin(), supplies.end());
        out.buyer_cleared = split_pro_rata(supply, demands);
        return out;
    }

    // Equal burden with clipped sellers redistributing: the fixed point is a water level
    // L with sum(min(E_n, L)) = excess. Sellers with E_n <= L carry everything; the rest
    // carry floor(L), remainders to the earliest of them in book order.
    out.buyer_cleared.assign(demands.begin(), demands.end());
    const std::int64_t excess = (supply - demand).raw();
    std::vector<std::size_t> by_supply(supplies.size());
    std::iota(by_supply.begin(), by_supply.end(), std::size_t{0});
    std::stable_sort(by_supply.begin(), by_supply.end(),
                     [&](std::size_t l, std::size_t r) { return supplies[l] < supplies[r]; });
    std::vector<bool> clipped(supplies.size(), false);
    std::int64_t rest = excess;
    std::size_t k = 0;
    for (; k < by_supply.size(); ++k) {
        const auto sharing = static_cast<__int128>(by_supply.size() - k);
        const std::int64_t e = supplies[by_supply[k]].raw();
        if (static_cast<__int128>(e) * sharing >= rest) {
            break;
        }
        clipped[by_supply[k]] = true;
        rest -= e;
    }
    const auto sharing = static_cast<std::int64_t>(by_supply.size() - k);
    const std::int64_t share = rest / sharing;
    std::int64_t extra = rest % sharing;
    for (std::size_t n = 0; n < supplies.size(); ++n) {
        std::int64_t burden = supplies[n].raw();
        if (!clipped[n]) {
            burden = share + (extra > 0 ? 1 : 0);
            extra -= extra > 0 ? 1 : 0;
        }
        out.seller_burden[n] = Energy::from_raw(burden);
        out.seller_cleared[n] = supplies[n] - out.seller_burden[n];
    }
    return out;
}

DeliveryReport verify_truthful_delivery(const AuctionOutcome& outcome, std::span<const Energy> delivered) {
    if (delivered.size() != outcome.sellers.size()) {
        throw DomainError("verify_truthful_delivery: expected " + std::to_string(outcome.sellers.size()) +
                          " seller deliveries, got " + std::to_string(delivered.size()));
    }
    DeliveryReport report;
    Energy delivered_total{};
    for (std::size_t n = 0; n < delivered.size(); ++n) {
        const Fill& f = outcome.sellers[n];
        delivered_total += delivered[n];
        if (delivered[n] != f.cleared) {
            report.deviators.push_back(f.prosumer_id);
            report.inconsistency += abs(delivered[n] - f.cleared);
        }
    }
    if (!outcome.sellers.empty()) {
        // Equal burden recomputed from what was delivered moves by this much per seller.
        report.burden_shift = (outcome.seller_total() - delivered_total).to_double() /
                              static_cast<double>(outcome.sellers.size());
    }
    return report;
}

DeliveryReport verify_truthful_delivery(const AuctionOutcome& outcome, std::span<const Energy> seller_delivered,
                                        std::span<const Energy> buyer_received) {
    DeliveryReport report = verify_truthful_delivery(outcome, seller_delivered);
    if (buyer_received.size() != outcome.buyers.size()) {
        throw DomainError("verify_truthful_delivery: expected " + std::to_string(outcome.buyers.size()) +
                          " buyer receipts, got " + std::to_string(buyer_received.size()));
    }
    for (std::size_t m = 0; m < buyer_received.size(); ++m) {
        const Fill& f = outcome.buyers[m];
        if (buyer_received[m] != f.cleared) {
            report.deviators.push_back(f.prosumer_id);
            report.inconsistency += abs(buyer_received[m] - f.cleared);
        }
    }
    return report;
}

}  // namespace gridp2p
