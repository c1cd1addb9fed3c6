#include "gridp2p/coalition.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "gridp2p/errors.hpp"
#include "gridp2p/prosumer.hpp"

namespace gridp2p {

const char* to_string(Venue venue) {
    switch (venue) {
        case Venue::Auction: return "auction";
        case Venue::MidMarket: return "midmarket";
        case Venue::Grid: return "grid";
        case Venue::ThirdParty: return "third_party";
    }
    return "unknown";
}

const char* to_string(DeviationKind kind) {
    switch (kind) {
        case DeviationKind::AloneGrid: return "alone_grid";
        case DeviationKind::AloneThirdParty: return "alone_third_party";
        case DeviationKind::Pair: return "pair";
    }
    return "unknown";
}

MidMarketPrices mid_market_prices(Price auction_price, Price fit_price, double beta) {
    if (auction_price < Price{} || fit_price < Price{} || !(beta >= 0.0)) {
        throw DomainError("mid_market_prices: prices and beta must be non-negative");
    }
    // Round half up on the 1e-6 grid; the sum of two raw values is exact.
    const std::int64_t twice = auction_price.raw() + fit_price.raw();
    const Price sell = Price::from_raw(twice / 2 + (twice % 2));
    const Price buy = Price::from_raw(sell.raw() + std::llround(beta * static_cast<double>(sell.raw())));
    return {sell, buy};
}

CoalitionStructure partition(std::span<const std::string> active, const AuctionOutcome& outcome, std::size_t slot) {
    std::set<std::string> trading;
    for (const Fill& f : outcome.sellers) {
        trading.insert(f.prosumer_id);
    }
    for (const Fill& f : outcome.buyers) {
        trading.insert(f.prosumer_id);
    }
    CoalitionStructure cs;
    cs.slot = slot;
    cs.auction = outcome;
    for (const std::string& id : active) {
        (trading.contains(id) ? cs.auction_coalition : cs.midmarket_coalition).push_back(id);
    }
    if (cs.auction_coalition.size() != trading.size()) {
        throw DomainError("partition: auction outcome names prosumers that are not active");
    }
    return cs;
}

std::vector<std::vector<Energy>> split_bilateral(std::span<const Energy> rows, std::span<const Energy> cols) {
    const Energy total = sum(rows);
    if (total != sum(cols)) {
        throw DomainError("split_bilateral: row and column totals differ");
    }
    std::vector<std::vector<Energy>> cells(rows.size(), std::vector<Energy>(cols.size()));
    if (total.is_zero()) {
        return cells;
    }

    std::vector<std::int64_t> row_left(rows.size());
    std::vector<std::int64_t> col_left(cols.size());
    std::vector<std::vector<__int128>> frac(rows.size(), std::vector<__int128>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        col_left[j] = cols[j].raw();
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        row_left[i] = rows[i].raw();
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const __int128 num = static_cast<__int128>(rows[i].raw()) * cols[j].raw();
            const auto whole = static_cast<std::int64_t>(num / total.raw());
            frac[i][j] = num % total.raw();
            cells[i][j] = Energy::from_raw(whole);
            row_left[i] -= whole;
            col_left[j] -= whole;
        }
    }

    // Round up the cells with the largest fractional parts first, then settle any
    // leftover wherever both the row and the column still have room.
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<std::size_t> order(cols.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t l, std::size_t r) { return frac[i][l] > frac[i][r]; });
        for (std::size_t j : order) {
            if (row_left[i] == 0) {
                break;
            }
            if (col_left[j] > 0 && frac[i][j] > 0) {
                cells[i][j] += Energy::from_raw(1);
                --row_left[i];
                --col_left[j];
            }
        }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size() && row_left[i] > 0; ++j) {
            const std::int64_t moved = std::min(row_left[i], col_left[j]);
            cells[i][j] += Energy::from_raw(moved);
            row_left[i] -= moved;
            col_left[j] -= moved;
        }
    }
    return cells;
}

std::vector<Trade> match_midmarket(std::span<const Participant> sellers, std::span<const Participant> buyers,
                                   const MidMarketPrices& prices, Price fit_price, Price third_party_price) {
    std::vector<Energy> supply;
    std::vector<Energy> demand;
    for (const Participant& p : sellers) {
        supply.push_back(p.quantity);
    }
    for (const Participant& p : buyers) {
        demand.push_back(p.quantity);
    }
    const Energy traded = min(sum(supply), sum(demand));
    const std::vector<Energy> sold = split_pro_rata(traded, supply);
    const std::vector<Energy> bought = split_pro_rata(traded, demand);
    const auto cells = split_bilateral(sold, bought);

    std::vector<Trade> trades;
    for (std::size_t i = 0; i < sellers.size(); ++i) {
        for (std::size_t j = 0; j < buyers.size(); ++j) {
            if (cells[i][j] > Energy{}) {
                trades.push_back(Trade{sellers[i].id, buyers[j].id, cells[i][j], prices.sell, prices.buy,
                                       Venue::MidMarket});
            }
        }
    }
    for (std::size_t i = 0; i < sellers.size(); ++i) {
        const Energy left = supply[i] - sold[i];
        if (left > Energy{}) {
            trades.push_back(Trade{sellers[i].id, kGridId, left, fit_price, fit_price, Venue::Grid});
        }
    }
    for (std::size_t j = 0; j < buyers.size(); ++j) {
        const Energy left = demand[j] - bought[j];
        if (left > Energy{}) {
            trades.push_back(Trade{kThirdPartyId, buyers[j].id, left, third_party_price, third_party_price,
                                   Venue::ThirdParty});
        }
    }
    return trades;
}

StabilityVerdict check_dhp_stability(const CoalitionStructure& structure, std::span<const Member> members,
                                     const StabilityContext& ctx) {
    auto find = [&](const std::string& id) -> const Member& {
        for (const Member& m : members) {
            if (m.id == id) {
                return m;
            }
        }
        throw DomainError("check_dhp_stability: no settled state for member " + id);
    };

    std::vector<std::vector<const Member*>> coalitions(2);
    for (const std::string& id : structure.auction_coalition) {
        coalitions[0].push_back(&find(id));
    }
    for (const std::string& id : structure.midmarket_coalition) {
        coalitions[1].push_back(&find(id));
    }

    StabilityVerdict verdict;
    auto improves = [](double after, double before) { return after > before + kStrictGain; };

    for (const auto& coalition : coalitions) {
        for (const Member* m : coalition) {
            const double via_grid =
                m->role == Role::Seller
                    ? settled_utility(m->alpha, m->quantity, cost_of(ctx.fit_price, m->quantity))
                    : settled_utility(m->alpha, m->quantity, -cost_of(ctx.grid_selling_price, m->quantity));
            ++verdict.deviations_checked;
            if (improves(via_grid, m->utility)) {
                verdict.stable = false;
                verdict.witness = Deviation{DeviationKind::AloneGrid, {m->id}, {m->utility}, {via_grid}};
                return verdict;
            }
            if (m->role == Role::Buyer) {
                const double via_third_party =
                    settled_utility(m->alpha, m->quantity, -cost_of(ctx.third_party_price, m->quantity));
                ++verdict.deviations_checked;
                if (improves(via_third_party, m->utility)) {
                    verdict.stable = false;
                    verdict.witness =
                        Deviation{DeviationKind::AloneThirdParty, {m->id}, {m->utility}, {via_third_party}};
                    return verdict;
                }
            }
        }
    }

    if (coalitions[0].size() + coalitions[1].size() > ctx.pair_limit) {
        return verdict;
    }
    for (std::size_t c = ctx.auction_pairs ? 0 : 1; c < coalitions.size(); ++c) {
        const auto& coalition = coalitions[c];
        for (const Member* s : coalition) {
            if (s->role != Role::Seller) {
                continue;
            }
            for (const Member* b : coalition) {
                if (b->role != Role::Buyer) {
                    continue;
                }
                const Energy shared = min(s->quantity, b->quantity);
                const Money seller_cash =
                    cost_of(ctx.mid.sell, shared) + cost_of(ctx.fit_price, s->quantity - shared);
                const Money buyer_cash =
                    -(cost_of(ctx.mid.buy, shared) + cost_of(ctx.third_party_price, b->quantity - shared));
                const double seller_after = settled_utility(s->alpha, s->quantity, seller_cash);
                const double buyer_after = settled_utility(b->alpha, b->quantity, buyer_cash);
                ++verdict.deviations_checked;
                if (improves(seller_after, s->utility) && improves(buyer_after, b->utility)) {
                    verdict.stable = false;
                    verdict.witness = Deviation{DeviationKind::Pair,
                                                {s->id, b->id},
                                                {s->utility, b->utility},
                                                {seller_after, buyer_after}};
                    return verdict;
                }
            }
        }
    }
    return verdict;
}

}  // namespace gridp2p
