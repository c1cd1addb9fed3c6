#include "gridp2p/leader.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gridp2p/errors.hpp"

namespace gridp2p {

double cps_excess_cost(double a, double b, double e_d, double e_t) {
    if (e_d < 0.0 || e_t < 0.0) {
        throw DomainError("cps cost: demand and threshold must be non-negative");
    }
    const double excess = std::max(e_d - e_t, 0.0);
    return a * excess * excess + b * excess;
}

double cps_cost(double a, double b, double e_d, double e_t, double price) {
    return cps_excess_cost(a, b, e_d, e_t) - price * e_d;
}

double peak_price(double a, double b, double e_d, double e_t) {
    if (!(e_d > e_t)) {
        throw PreconditionError("peak_price requires demand above threshold; use the off-peak tariff");
    }
    return 2.0 * a * (e_d - e_t) + b;
}

double min_b(double a, double alpha_max, double e_d, double e_t) {
    return (alpha_max - 2.0 * a * std::numbers::ln2 * (e_d - e_t)) / std::numbers::ln2;
}

Energy contracted_demand(std::span<const ProsumerProfile> prosumers, std::size_t slot) {
    Energy total{};
    for (const ProsumerProfile& p : prosumers) {
        if (p.is_buyer(slot)) {
            total -= p.net_energy[slot];
        }
    }
    return total;
}

PriceSignal decide_slot_price(const GridPolicy& policy, std::span<const ProsumerProfile> prosumers,
                              std::size_t slot) {
    if (slot >= policy.threshold.size()) {
        throw PreconditionError("decide_slot_price: slot out of range");
    }
    PriceSignal signal;
    signal.slot = slot;
    signal.buying_price = policy.fit_price;
    signal.demand = contracted_demand(prosumers, slot);
    signal.threshold = policy.threshold[slot];

    if (!(signal.demand > signal.threshold)) {
        signal.selling_price = policy.offpeak_price;
        return signal;
    }

    const double e_d = signal.demand.to_double();
    const double e_t = signal.threshold.to_double();
    double alpha_max = 0.0;
    for (const ProsumerProfile& p : prosumers) {
        alpha_max = std::max(alpha_max, p.alpha_at(slot));
    }
    const double bound = min_b(policy.a, alpha_max, e_d, e_t);
    if (!(policy.b > bound)) {
        std::ostringstream msg;
        msg << "slot " << slot << ": b = " << policy.b << " must exceed " << bound
            << " so the peak price deters grid purchases (max alpha " << alpha_max << ")";
        throw ConfigurationError(msg.str());
    }

    const Price price = cents_per_kwh(peak_price(policy.a, policy.b, e_d, e_t));
    if (price < policy.offpeak_price) {
        std::ostringstream msg;
        msg << "slot " << slot << ": peak price " << price.to_double()
            << " falls below the off-peak tariff " << policy.offpeak_price.to_double();
        throw ConfigurationError(msg.str());
    }
    signal.selling_price = price;
    signal.peak_flag = true;
    return signal;
}

PriceSignal decide_slot_price(const Scenario& scenario, std::size_t slot) {
    return decide_slot_price(scenario.grid, scenario.prosumers, slot);
}

}  // namespace gridp2p
