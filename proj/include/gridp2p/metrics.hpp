#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gridp2p/engine.hpp"

namespace gridp2p {

/** One prosumer's peak-slot cash flows under the three regimes.
 *
 * Ratios are fractions (0.22 is 22 %) and are empty when their denominator is zero,
 * e.g. the uplift of a prosumer that never sold at a peak slot.
 */
struct ProsumerComparison {
    std::string id;
    Money p2p_revenue;
    Money fit_revenue;  ///< same surplus sold to the grid at the feed-in tariff
    Money p2p_cost;
    Money grid_cost;
    Money third_party_cost;
    std::optional<double> revenue_uplift;          ///< (p2p - fit) / fit
    std::optional<double> savings_vs_grid;         ///< (grid - p2p) / grid
    std::optional<double> savings_vs_third_party;  ///< (tp - p2p) / tp
    std::optional<double> third_party_premium;     ///< (tp - p2p) / p2p
};

struct MetricsTable {
    std::vector<ProsumerComparison> prosumers;  ///< scenario order
    std::size_t peak_slots = 0;

    // Means of the per-prosumer ratios over the prosumers where they are defined.
    std::optional<double> avg_revenue_uplift;
    std::optional<double> avg_savings_vs_grid;
    std::optional<double> avg_savings_vs_third_party;
    std::optional<double> avg_third_party_premium;

    // Whole horizon. The net figure carries the grid's sales revenue; the excess
    // figure is the generation/reserve cost of serving demand above the threshold.
    Money cps_cost_p2p;
    Money cps_cost_grid_only;
    Money cps_cost_third_party;
    Money cps_excess_cost_p2p;
    Money cps_excess_cost_grid_only;

    // Peak-slot purchase cost divided by the number of prosumers.
    Money avg_cost_p2p;
    Money avg_cost_grid_only;
    Money avg_cost_third_party;
};

/// Throws DomainError unless the three reports come from the same scenario in the
/// expected modes.
MetricsTable compare(const SimulationReport& p2p, const SimulationReport& grid_only,
                     const SimulationReport& third_party);

}  // namespace gridp2p
