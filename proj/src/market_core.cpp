#include "gridp2p/market_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gridp2p/errors.hpp"

namespace gridp2p {

namespace {

std::string indexed(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

template <typename T>
void require_length(const std::vector<T>& values, std::size_t slots, const std::string& path) {
    if (values.size() != slots) {
        throw ValidationError(path, "expected " + std::to_string(slots) + " entries, got " +
                                        std::to_string(values.size()));
    }
}

void require_non_negative(std::span<const Energy> values, const std::string& path) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < Energy{}) {
            throw ValidationError(indexed(path, i), "must be >= 0");
        }
    }
}

void require_non_negative(std::span<const Price> values, const std::string& path) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < Price{}) {
            throw ValidationError(indexed(path, i), "must be >= 0");
        }
    }
}

}  // namespace

void validate(const Scenario& s) {
    if (s.slots < 1) {
        throw ValidationError("slots", "must be >= 1");
    }
    if (s.slot_minutes <= 0) {
        throw ValidationError("slot_minutes", "must be > 0");
    }

    const GridPolicy& g = s.grid;
    if (!(g.a > 0.0) || !std::isfinite(g.a)) {
        throw ValidationError("grid.a", "must be > 0");
    }
    if (!(g.b > 0.0) || !std::isfinite(g.b)) {
        throw ValidationError("grid.b", "must be > 0");
    }
    require_length(g.threshold, s.slots, "grid.threshold");
    require_non_negative(g.threshold, "grid.threshold");
    require_length(g.other_demand, s.slots, "grid.other_demand");
    require_non_negative(g.other_demand, "grid.other_demand");
    if (g.supply_capacity) {
        require_length(*g.supply_capacity, s.slots, "grid.supply_capacity");
        require_non_negative(*g.supply_capacity, "grid.supply_capacity");
    }
    if (g.fit_price < Price{}) {
        throw ValidationError("grid.fit_price", "must be >= 0");
    }
    if (!(g.offpeak_price > g.fit_price)) {
        throw ValidationError("grid.offpeak_price", "must exceed grid.fit_price");
    }

    const MarketConfig& m = s.market;
    if (!(m.beta >= 0.0) || !std::isfinite(m.beta)) {
        throw ValidationError("market.beta", "must be >= 0");
    }
    if (!(m.third_party_price > Price{})) {
        throw ValidationError("market.third_party_price", "must be > 0");
    }

    if (s.prosumers.empty()) {
        throw ValidationError("prosumers", "at least one prosumer is required");
    }
    std::set<std::string> seen;
    for (std::size_t n = 0; n < s.prosumers.size(); ++n) {
        const ProsumerProfile& p = s.prosumers[n];
        const std::string base = indexed("prosumers", n);
        if (p.id.empty()) {
            throw ValidationError(base + ".id", "must be non-empty");
        }
        if (p.id == kGridId || p.id == kThirdPartyId) {
            throw ValidationError(base + ".id", "'" + p.id + "' is reserved for external counterparties");
        }
        if (!seen.insert(p.id).second) {
            throw ValidationError(base + ".id", "duplicate id '" + p.id + "'");
        }
        require_length(p.alpha, s.slots, base + ".alpha");
        for (std::size_t t = 0; t < p.alpha.size(); ++t) {
            if (!(p.alpha[t] > 0.0) || !std::isfinite(p.alpha[t])) {
                throw ValidationError(indexed(base + ".alpha", t), "must be > 0");
            }
        }
        require_length(p.net_energy, s.slots, base + ".net_energy");
        require_length(p.reservation_price, s.slots, base + ".reservation_price");
        require_non_negative(p.reservation_price, base + ".reservation_price");
        require_length(p.bid_price, s.slots, base + ".bid_price");
        require_non_negative(p.bid_price, base + ".bid_price");
    }
}

Energy total_system_demand(Energy contracted_demand, Energy other_demand) {
    if (contracted_demand < Energy{} || other_demand < Energy{}) {
        throw DomainError("total_system_demand: demands must be non-negative");
    }
    return contracted_demand + other_demand;
}

Energy sum(std::span<const Energy> values) {
    return std::accumulate(values.begin(), values.end(), Energy{});
}

std::vector<Energy> split_pro_rata(Energy total, std::span<const Energy> weights) {
    std::vector<Energy> parts(weights.size());
    const Energy weight_sum = sum(weights);
    if (weight_sum <= Energy{} || total.is_zero()) {
        return parts;
    }

    std::vector<__int128> remainders(weights.size());
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const __int128 num = static_cast<__int128>(total.raw()) * weights[i].raw();
        parts[i] = Energy::from_raw(static_cast<std::int64_t>(num / weight_sum.raw()));
        remainders[i] = num % weight_sum.raw();
        assigned += parts[i].raw();
    }

    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return remainders[l] > remainders[r]; });
    std::int64_t leftover = total.raw() - assigned;
    for (std::size_t k = 0; leftover > 0; k = (k + 1) % order.size()) {
        if (weights[order[k]] > Energy{}) {
            parts[order[k]] += Energy::from_raw(1);
            --leftover;
        }
    }
    return parts;
}

}  // namespace gridp2p
