#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridp2p/coalition.hpp"
#include "gridp2p/leader.hpp"
#include "gridp2p/market_core.hpp"

namespace gridp2p {

enum class RunMode { P2P, GridOnly, ThirdParty };

const char* to_string(RunMode mode);

/// Cash flows and utility of one prosumer in one slot.
struct ProsumerSettlement {
    std::string id;
    std::optional<Role> role;  ///< empty when the prosumer sits the slot out
    Energy quantity;           ///< |net energy|
    Energy traded;
    Money revenue;
    Money cost;
    double utility = 0.0;
    std::string venue;  ///< auction, midmarket, grid, third_party or inactive
};

struct SlotResult {
    std::size_t slot = 0;
    PriceSignal price_signal;
    std::optional<CoalitionStructure> structure;  ///< only for peak slots of a P2P run
    std::optional<MidMarketPrices> mid_prices;
    std::optional<StabilityVerdict> stability;
    std::vector<Trade> trades;
    Energy cps_delivered;  ///< energy the grid sold to contracted prosumers
    Money cps_cost;        ///< net cost on the delivered energy at the applied price
    Money cps_excess_cost; ///< generation/reserve part only
    std::vector<ProsumerSettlement> per_prosumer;  ///< scenario order
};

struct ReportAggregates {
    Money cps_cost;
    Money cps_excess_cost;
    Energy cps_delivered;
    Money prosumer_cost;
    Money prosumer_revenue;
    Money network_fees;
    Money avg_cost_per_prosumer;  ///< prosumer_cost over all prosumers
    std::size_t peak_slots = 0;
    std::size_t unstable_slots = 0;

    bool operator==(const ReportAggregates&) const = default;
};

struct SimulationReport {
    RunMode mode = RunMode::P2P;
    std::vector<std::string> prosumer_ids;
    std::vector<SlotResult> slots;
    ReportAggregates aggregates;
};

/** Runs one slot of the peer-to-peer scheme.
 *
 * Off-peak, every buyer pays the off-peak tariff to the grid and every seller is paid
 * the feed-in tariff. At a peak slot the order book is cleared, the coalitions are
 * formed, coalition 2 trades at mid-market prices, auction burden is sold to the grid
 * at the feed-in tariff and any unmet deficit is bought from the third party. The
 * grid delivers nothing at a peak slot, so its cost there is zero.
 */
SlotResult run_slot(const Scenario& scenario, std::size_t slot);

/// Slot in the given mode; P2P is `run_slot`.
SlotResult run_slot(const Scenario& scenario, std::size_t slot, RunMode mode);

SimulationReport run_horizon(const Scenario& scenario, unsigned jobs = 1);

/// Prosumers always trade with the grid, paying the peak price when it is in force.
SimulationReport baseline_grid_only(const Scenario& scenario, unsigned jobs = 1);

/// At peak slots buyers buy from the third party, sellers sell to the grid.
SimulationReport baseline_third_party(const Scenario& scenario, unsigned jobs = 1);

SimulationReport run_mode(const Scenario& scenario, RunMode mode, unsigned jobs = 1);

ReportAggregates aggregate(std::span<const SlotResult> slots, std::size_t prosumer_count);

/// Cash and energy bookkeeping checks for one slot.
struct SettlementAudit {
    Money prosumer_payments;
    Money prosumer_receipts;
    Money network_fees;
    Money external_net;  ///< received by grid and third party minus paid by them
    bool cash_balanced = false;
    bool auction_balanced = false;
    bool positions_covered = false;

    bool ok() const { return cash_balanced && auction_balanced && positions_covered; }
};

SettlementAudit audit_settlement(const SlotResult& slot);

}  // namespace gridp2p
