#pragma once

#include <cstddef>
#include <span>

#include "gridp2p/market_core.hpp"

namespace gridp2p {

/// Per-slot pricing decision of the centralized power system.
struct PriceSignal {
    std::size_t slot = 0;
    Price selling_price;   ///< grid selling price to the contracted prosumers
    Price buying_price;    ///< grid buying price, always the feed-in tariff
    bool peak_flag = false;
    Energy demand;         ///< E_D, sum of buyer deficits
    Energy threshold;      ///< E_T

    bool operator==(const PriceSignal&) const = default;
};

/// Net cost a*(x+)^2 + b*x+ - price*e_d with x = e_d - e_t, in cents. Negative is revenue.
double cps_cost(double a, double b, double e_d, double e_t, double price);

/// The generation/reserve part of the cost alone: a*(x+)^2 + b*x+.
double cps_excess_cost(double a, double b, double e_d, double e_t);

/// 2a(e_d - e_t) + b. Only defined in the peak condition e_d > e_t.
double peak_price(double a, double b, double e_d, double e_t);

/// Strict lower bound on b for the peak price to exceed alpha_max / ln 2.
double min_b(double a, double alpha_max, double e_d, double e_t);

/// Sum of buyer deficits at `slot`.
Energy contracted_demand(std::span<const ProsumerProfile> prosumers, std::size_t slot);

/** Chooses the grid selling price for one slot.
 *
 * Off-peak (E_D <= E_T) the standard tariff applies. Above the threshold the
 * punitive price 2a(E_D - E_T) + b is used, after checking that b clears the
 * deterrence bound for the largest alpha present and that the result is not below
 * the off-peak tariff; either failure throws ConfigurationError naming the slot.
 */
PriceSignal decide_slot_price(const GridPolicy& policy, std::span<const ProsumerProfile> prosumers,
                              std::size_t slot);

PriceSignal decide_slot_price(const Scenario& scenario, std::size_t slot);

}  // namespace gridp2p
