#include "gridp2p/metrics.hpp"

#include "gridp2p/errors.hpp"

namespace gridp2p {

namespace {

std::optional<double> ratio(Money num, Money den) {
    if (den.is_zero()) {
        return std::nullopt;
    }
    return num.to_double() / den.to_double();
}

std::optional<double> mean(const std::vector<ProsumerComparison>& rows,
                           std::optional<double> ProsumerComparison::*field) {
    double total = 0.0;
    std::size_t n = 0;
    for (const ProsumerComparison& row : rows) {
        if (row.*field) {
            total += *(row.*field);
            ++n;
        }
    }
    if (n == 0) {
        return std::nullopt;
    }
    return total / static_cast<double>(n);
}

Money per_head(Money total, std::size_t n) {
    if (n == 0) {
        return Money{};
    }
    const auto k = static_cast<std::int64_t>(n);
    const std::int64_t raw = total.raw();
    return Money::from_raw((raw >= 0 ? raw + k / 2 : raw - k / 2) / k);
}

void check_same_scenario(const SimulationReport& p2p, const SimulationReport& grid_only,
                         const SimulationReport& third_party) {
    if (p2p.mode != RunMode::P2P || grid_only.mode != RunMode::GridOnly ||
        third_party.mode != RunMode::ThirdParty) {
        throw DomainError("compare: reports must be p2p, grid-only and third-party, in that order");
    }
    for (const SimulationReport* other : {&grid_only, &third_party}) {
        if (other->prosumer_ids != p2p.prosumer_ids || other->slots.size() != p2p.slots.size()) {
            throw DomainError("compare: reports cover different prosumers or horizons");
        }
        for (std::size_t t = 0; t < p2p.slots.size(); ++t) {
            const SlotResult& l = p2p.slots[t];
            const SlotResult& r = other->slots[t];
            if (!(l.price_signal == r.price_signal) || l.per_prosumer.size() != r.per_prosumer.size()) {
                throw DomainError("compare: reports disagree at slot " + std::to_string(t));
            }
            for (std::size_t n = 0; n < l.per_prosumer.size(); ++n) {
                if (l.per_prosumer[n].quantity != r.per_prosumer[n].quantity ||
                    l.per_prosumer[n].role != r.per_prosumer[n].role) {
                    throw DomainError("compare: positions differ at slot " + std::to_string(t));
                }
            }
        }
    }
}

}  // namespace

MetricsTable compare(const SimulationReport& p2p, const SimulationReport& grid_only,
                     const SimulationReport& third_party) {
    check_same_scenario(p2p, grid_only, third_party);

    MetricsTable table;
    for (const std::string& id : p2p.prosumer_ids) {
        ProsumerComparison row;
        row.id = id;
        table.prosumers.push_back(std::move(row));
    }
    Money p2p_total;
    Money grid_total;
    Money tp_total;
    for (std::size_t t = 0; t < p2p.slots.size(); ++t) {
        if (!p2p.slots[t].price_signal.peak_flag) {
            continue;
        }
        ++table.peak_slots;
        for (std::size_t n = 0; n < table.prosumers.size(); ++n) {
            ProsumerComparison& row = table.prosumers[n];
            const ProsumerSettlement& a = p2p.slots[t].per_prosumer[n];
            const ProsumerSettlement& g = grid_only.slots[t].per_prosumer[n];
            const ProsumerSettlement& x = third_party.slots[t].per_prosumer[n];
            row.p2p_revenue += a.revenue;
            row.fit_revenue += g.revenue;
            row.p2p_cost += a.cost;
            row.grid_cost += g.cost;
            row.third_party_cost += x.cost;
            p2p_total += a.cost;
            grid_total += g.cost;
            tp_total += x.cost;
        }
    }
    for (ProsumerComparison& row : table.prosumers) {
        row.revenue_uplift = ratio(row.p2p_revenue - row.fit_revenue, row.fit_revenue);
        row.savings_vs_grid = ratio(row.grid_cost - row.p2p_cost, row.grid_cost);
        row.savings_vs_third_party = ratio(row.third_party_cost - row.p2p_cost, row.third_party_cost);
        row.third_party_premium = ratio(row.third_party_cost - row.p2p_cost, row.p2p_cost);
    }

    table.avg_revenue_uplift = mean(table.prosumers, &ProsumerComparison::revenue_uplift);
    table.avg_savings_vs_grid = mean(table.prosumers, &ProsumerComparison::savings_vs_grid);
    table.avg_savings_vs_third_party = mean(table.prosumers, &ProsumerComparison::savings_vs_third_party);
    table.avg_third_party_premium = mean(table.prosumers, &ProsumerComparison::third_party_premium);

    table.cps_cost_p2p = p2p.aggregates.cps_cost;
    table.cps_cost_grid_only = grid_only.aggregates.cps_cost;
    table.cps_cost_third_party = third_party.aggregates.cps_cost;
    table.cps_excess_cost_p2p = p2p.aggregates.cps_excess_cost;
    table.cps_excess_cost_grid_only = grid_only.aggregates.cps_excess_cost;

    const std::size_t n = p2p.prosumer_ids.size();
    table.avg_cost_p2p = per_head(p2p_total, n);
    table.avg_cost_grid_only = per_head(grid_total, n);
    table.avg_cost_third_party = per_head(tp_total, n);
    return table;
}

}  // namespace gridp2p
