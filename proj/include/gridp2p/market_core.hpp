#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridp2p/fixed_point.hpp"

namespace gridp2p {

/// Counterparty ids used when one side of a trade is not a prosumer; reserved.
inline constexpr const char* kGridId = "GRID";
inline constexpr const char* kThirdPartyId = "THIRD_PARTY";

enum class AuctionPriceRule { HighestReservation, Vickrey };

enum class Side { Ask, Bid };

/** A contracted prosumer.
 *
 * `net_energy[t]` is signed: positive is surplus offered for sale, negative is a
 * deficit to buy, zero sits the slot out. `alpha` holds one preference value per
 * slot; scenario files may give a single number, which is broadcast.
 */
struct ProsumerProfile {
    std::string id;
    std::vector<double> alpha;
    std::vector<Energy> net_energy;
    std::vector<Price> reservation_price;
    std::vector<Price> bid_price;

    double alpha_at(std::size_t slot) const { return alpha.at(slot); }
    bool is_seller(std::size_t slot) const { return net_energy.at(slot) > Energy{}; }
    bool is_buyer(std::size_t slot) const { return net_energy.at(slot) < Energy{}; }

    bool operator==(const ProsumerProfile&) const = default;
};

/// Cost parameters and tariffs of the centralized power system.
struct GridPolicy {
    double a = 1.0;  ///< cents per kWh^2
    double b = 1.0;  ///< cents per kWh
    std::vector<Energy> threshold;
    std::vector<Energy> other_demand;
    std::optional<std::vector<Energy>> supply_capacity;
    Price offpeak_price = cents_per_kwh(28.0);
    Price fit_price = cents_per_kwh(10.0);

    bool operator==(const GridPolicy&) const = default;
};

struct MarketConfig {
    double beta = 0.1;  ///< mid-market network fee, fraction of the mid-market selling price
    Price third_party_price = cents_per_kwh(21.0);
    AuctionPriceRule auction_price_rule = AuctionPriceRule::HighestReservation;

    bool operator==(const MarketConfig&) const = default;
};

struct Scenario {
    std::size_t slots = 1;
    int slot_minutes = 30;
    std::uint64_t seed = 0;
    std::vector<ProsumerProfile> prosumers;
    GridPolicy grid;
    MarketConfig market;

    bool operator==(const Scenario&) const = default;
};

/// One side of the auction book.
struct Order {
    std::string prosumer_id;
    Price price;
    Energy quantity;
    Side side = Side::Ask;

    bool operator==(const Order&) const = default;
};

/// Throws ValidationError naming the first offending field.
void validate(const Scenario& scenario);

/// E_S = E_D + E_O. Throws DomainError on negative input.
Energy total_system_demand(Energy contracted_demand, Energy other_demand);

/// Splits `total` over `weights` in proportion, largest remainder first (ties to the
/// lower index). The parts sum to `total` exactly. Zero total weight yields zeros.
std::vector<Energy> split_pro_rata(Energy total, std::span<const Energy> weights);

/// Sum of a range of energies.
Energy sum(std::span<const Energy> values);

}  // namespace gridp2p
