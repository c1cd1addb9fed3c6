#include "gridp2p/engine.hpp"

#include <algorithm>
#include <future>
#include <map>

#include "gridp2p/auction.hpp"
#include "gridp2p/errors.hpp"
#include "gridp2p/prosumer.hpp"

namespace gridp2p {

namespace {

bool is_external(const std::string& id) { return id == kGridId || id == kThirdPartyId; }

void sell_to_grid(std::vector<Trade>& trades, const std::string& id, Energy q, Price fit) {
    if (q > Energy{}) {
        trades.push_back(Trade{id, kGridId, q, fit, fit, Venue::Grid});
    }
}

void buy_from(std::vector<Trade>& trades, const char* source, Venue venue, const std::string& id, Energy q,
              Price price) {
    if (q > Energy{}) {
        trades.push_back(Trade{source, id, q, price, price, venue});
    }
}

// Auction trades, burden to the grid, rationed deficit to the third party.
void settle_auction(const Scenario& s, const AuctionOutcome& outcome, std::vector<Trade>& trades) {
    std::vector<Energy> sold;
    std::vector<Energy> bought;
    for (const Fill& f : outcome.sellers) {
        sold.push_back(f.cleared);
    }
    for (const Fill& f : outcome.buyers) {
        bought.push_back(f.cleared);
    }
    const auto cells = split_bilateral(sold, bought);
    for (std::size_t i = 0; i < outcome.sellers.size(); ++i) {
        for (std::size_t j = 0; j < outcome.buyers.size(); ++j) {
            if (cells[i][j] > Energy{}) {
                trades.push_back(Trade{outcome.sellers[i].prosumer_id, outcome.buyers[j].prosumer_id, cells[i][j],
                                       outcome.auction_price, outcome.auction_price, Venue::Auction});
            }
        }
    }
    for (const Fill& f : outcome.sellers) {
        sell_to_grid(trades, f.prosumer_id, f.offered - f.cleared, s.grid.fit_price);
    }
    for (const Fill& f : outcome.buyers) {
        buy_from(trades, kThirdPartyId, Venue::ThirdParty, f.prosumer_id, f.offered - f.cleared,
                 s.market.third_party_price);
    }
}

Price midmarket_reference(const AuctionOutcome& outcome, const OrderBook& book, Price fit) {
    if (!outcome.empty()) {
        return outcome.auction_price;
    }
    // No intersection: anchor on the cheapest ask, where the supply curve starts.
    if (!book.asks.empty()) {
        return std::min_element(book.asks.begin(), book.asks.end(),
                                [](const Order& l, const Order& r) { return l.price < r.price; })
            ->price;
    }
    return fit;
}

}  // namespace

const char* to_string(RunMode mode) {
    switch (mode) {
        case RunMode::P2P: return "p2p";
        case RunMode::GridOnly: return "grid-only";
        case RunMode::ThirdParty: return "third-party";
    }
    return "unknown";
}

SlotResult run_slot(const Scenario& s, std::size_t t) { return run_slot(s, t, RunMode::P2P); }

SlotResult run_slot(const Scenario& s, std::size_t t, RunMode mode) {
    if (t >= s.slots) {
        throw PreconditionError("run_slot: slot " + std::to_string(t) + " out of range");
    }
    SlotResult r;
    r.slot = t;
    r.price_signal = decide_slot_price(s, t);
    const PriceSignal& signal = r.price_signal;
    const Price fit = s.grid.fit_price;

    std::vector<std::string> active;
    for (const ProsumerProfile& p : s.prosumers) {
        if (!p.net_energy[t].is_zero()) {
            active.push_back(p.id);
        }
    }

    std::map<std::string, std::string> venue;
    const bool grid_settlement = !signal.peak_flag || mode == RunMode::GridOnly;
    if (grid_settlement || mode == RunMode::ThirdParty) {
        for (const ProsumerProfile& p : s.prosumers) {
            const Energy q = abs(p.net_energy[t]);
            if (p.is_seller(t)) {
                sell_to_grid(r.trades, p.id, q, fit);
                venue[p.id] = "grid";
            } else if (p.is_buyer(t)) {
                if (grid_settlement) {
                    buy_from(r.trades, kGridId, Venue::Grid, p.id, q, signal.selling_price);
                    venue[p.id] = "grid";
                } else {
                    buy_from(r.trades, kThirdPartyId, Venue::ThirdParty, p.id, q, s.market.third_party_price);
                    venue[p.id] = "third_party";
                }
            }
        }
        r.cps_delivered = grid_settlement ? signal.demand : Energy{};
    } else {
        OrderBook book;
        book.slot = t;
        for (const ProsumerProfile& p : s.prosumers) {
            if (p.is_seller(t)) {
                book.asks.push_back(Order{p.id, p.reservation_price[t], p.net_energy[t], Side::Ask});
            } else if (p.is_buyer(t)) {
                book.bids.push_back(Order{p.id, p.bid_price[t], -p.net_energy[t], Side::Bid});
            }
        }
        const AuctionOutcome outcome = clear(book, s.market.auction_price_rule);
        r.structure = partition(active, outcome, t);
        settle_auction(s, outcome, r.trades);

        const MidMarketPrices mid =
            mid_market_prices(midmarket_reference(outcome, book, fit), fit, s.market.beta);
        r.mid_prices = mid;
        std::vector<Participant> sellers;
        std::vector<Participant> buyers;
        for (const ProsumerProfile& p : s.prosumers) {
            if (std::find(r.structure->midmarket_coalition.begin(), r.structure->midmarket_coalition.end(), p.id) ==
                r.structure->midmarket_coalition.end()) {
                continue;
            }
            (p.is_seller(t) ? sellers : buyers).push_back(Participant{p.id, abs(p.net_energy[t])});
        }
        const std::vector<Trade> mid_trades =
            match_midmarket(sellers, buyers, mid, fit, s.market.third_party_price);
        r.trades.insert(r.trades.end(), mid_trades.begin(), mid_trades.end());
        for (const std::string& id : r.structure->auction_coalition) {
            venue[id] = "auction";
        }
        for (const std::string& id : r.structure->midmarket_coalition) {
            venue[id] = "midmarket";
        }
        r.cps_delivered = Energy{};
    }

    const double e_t = signal.threshold.to_double();
    const double delivered = r.cps_delivered.to_double();
    r.cps_cost = cents(cps_cost(s.grid.a, s.grid.b, delivered, e_t, signal.selling_price.to_double()));
    r.cps_excess_cost = cents(cps_excess_cost(s.grid.a, s.grid.b, delivered, e_t));

    std::map<std::string, ProsumerSettlement> book_keeping;
    for (const Trade& tr : r.trades) {
        if (!is_external(tr.seller_id)) {
            ProsumerSettlement& ps = book_keeping[tr.seller_id];
            ps.revenue += tr.receipt();
            ps.traded += tr.quantity;
        }
        if (!is_external(tr.buyer_id)) {
            ProsumerSettlement& ps = book_keeping[tr.buyer_id];
            ps.cost += tr.payment();
            ps.traded += tr.quantity;
        }
    }
    for (const ProsumerProfile& p : s.prosumers) {
        ProsumerSettlement ps = book_keeping[p.id];
        ps.id = p.id;
        ps.quantity = abs(p.net_energy[t]);
        if (p.is_seller(t)) {
            ps.role = Role::Seller;
        } else if (p.is_buyer(t)) {
            ps.role = Role::Buyer;
        }
        ps.venue = venue.contains(p.id) ? venue[p.id] : "inactive";
        ps.utility = ps.role ? settled_utility(p.alpha_at(t), ps.traded, ps.revenue - ps.cost) : 0.0;
        r.per_prosumer.push_back(std::move(ps));
    }

    if (r.structure) {
        std::vector<Member> members;
        for (std::size_t n = 0; n < s.prosumers.size(); ++n) {
            const ProsumerSettlement& ps = r.per_prosumer[n];
            if (ps.role) {
                members.push_back(Member{ps.id, *ps.role, s.prosumers[n].alpha_at(t), ps.quantity, ps.utility});
            }
        }
        const StabilityContext ctx{signal.selling_price, fit, s.market.third_party_price, *r.mid_prices};
        r.stability = check_dhp_stability(*r.structure, members, ctx);
    }
    return r;
}

SimulationReport run_mode(const Scenario& s, RunMode mode, unsigned jobs) {
    validate(s);
    SimulationReport report;
    report.mode = mode;
    for (const ProsumerProfile& p : s.prosumers) {
        report.prosumer_ids.push_back(p.id);
    }
    report.slots.resize(s.slots);

    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, s.slots);
    if (workers == 1) {
        for (std::size_t t = 0; t < s.slots; ++t) {
            report.slots[t] = run_slot(s, t, mode);
        }
    } else {
        // Strided slot assignment; results land at their slot index.
        std::vector<std::future<void>> tasks;
        for (std::size_t w = 0; w < workers; ++w) {
            tasks.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t t = w; t < s.slots; t += workers) {
                    report.slots[t] = run_slot(s, t, mode);
                }
            }));
        }
        for (auto& task : tasks) {
            task.get();
        }
    }
    report.aggregates = aggregate(report.slots, s.prosumers.size());
    return report;
}

SimulationReport run_horizon(const Scenario& s, unsigned jobs) { return run_mode(s, RunMode::P2P, jobs); }

SimulationReport baseline_grid_only(const Scenario& s, unsigned jobs) {
    return run_mode(s, RunMode::GridOnly, jobs);
}

SimulationReport baseline_third_party(const Scenario& s, unsigned jobs) {
    return run_mode(s, RunMode::ThirdParty, jobs);
}

ReportAggregates aggregate(std::span<const SlotResult> slots, std::size_t prosumer_count) {
    ReportAggregates agg;
    for (const SlotResult& r : slots) {
        agg.cps_cost += r.cps_cost;
        agg.cps_excess_cost += r.cps_excess_cost;
        agg.cps_delivered += r.cps_delivered;
        if (r.price_signal.peak_flag) {
            ++agg.peak_slots;
        }
        if (r.stability && !r.stability->stable) {
            ++agg.unstable_slots;
        }
        for (const ProsumerSettlement& ps : r.per_prosumer) {
            agg.prosumer_cost += ps.cost;
            agg.prosumer_revenue += ps.revenue;
        }
        for (const Trade& tr : r.trades) {
            agg.network_fees += tr.fee();
        }
    }
    if (prosumer_count > 0) {
        const auto n = static_cast<std::int64_t>(prosumer_count);
        const std::int64_t raw = agg.prosumer_cost.raw();
        agg.avg_cost_per_prosumer = Money::from_raw((raw + n / 2) / n);
    }
    return agg;
}

SettlementAudit audit_settlement(const SlotResult& r) {
    SettlementAudit a;
    for (const ProsumerSettlement& ps : r.per_prosumer) {
        a.prosumer_payments += ps.cost;
        a.prosumer_receipts += ps.revenue;
    }
    std::map<std::string, Energy> traded;
    for (const Trade& tr : r.trades) {
        a.network_fees += tr.fee();
        if (is_external(tr.seller_id)) {
            a.external_net += tr.receipt();
        } else {
            traded[tr.seller_id] += tr.quantity;
        }
        if (is_external(tr.buyer_id)) {
            a.external_net -= tr.payment();
        } else {
            traded[tr.buyer_id] += tr.quantity;
        }
    }
    a.cash_balanced = a.prosumer_payments == a.prosumer_receipts + a.network_fees + a.external_net;

    a.positions_covered = true;
    for (const ProsumerSettlement& ps : r.per_prosumer) {
        const Energy got = traded.contains(ps.id) ? traded[ps.id] : Energy{};
        if (got != ps.quantity || got != ps.traded) {
            a.positions_covered = false;
        }
    }

    a.auction_balanced = true;
    if (r.structure) {
        const AuctionOutcome& o = r.structure->auction;
        Energy auction_traded{};
        for (const Trade& tr : r.trades) {
            if (tr.venue == Venue::Auction) {
                auction_traded += tr.quantity;
            }
        }
        a.auction_balanced = o.seller_total() == o.buyer_total() && auction_traded == o.seller_total();
    }
    return a;
}

}  // namespace gridp2p
