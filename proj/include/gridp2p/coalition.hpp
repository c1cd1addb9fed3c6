#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridp2p/auction.hpp"
#include "gridp2p/market_core.hpp"

namespace gridp2p {

enum class Venue { Auction, MidMarket, Grid, ThirdParty };

const char* to_string(Venue venue);

/** A bilateral transfer of energy.
 *
 * The buyer pays cost_of(buyer_price, quantity), the seller receives
 * cost_of(seller_price, quantity); the difference is the network fee.
 */
struct Trade {
    std::string seller_id;
    std::string buyer_id;
    Energy quantity;
    Price seller_price;
    Price buyer_price;
    Venue venue = Venue::Auction;

    Money receipt() const { return cost_of(seller_price, quantity); }
    Money payment() const { return cost_of(buyer_price, quantity); }
    Money fee() const { return payment() - receipt(); }

    bool operator==(const Trade&) const = default;
};

struct MidMarketPrices {
    Price sell;
    Price buy;
};

/// sell = (p_auc + p_fit) / 2, buy = (1 + beta) * sell.
MidMarketPrices mid_market_prices(Price auction_price, Price fit_price, double beta);

/// Coalition 1 trades at the auction price, coalition 2 at mid-market prices.
struct CoalitionStructure {
    std::size_t slot = 0;
    std::vector<std::string> auction_coalition;
    std::vector<std::string> midmarket_coalition;
    AuctionOutcome auction;
};

/// Coalition 1 = trading sellers and buyers; coalition 2 = every other active prosumer,
/// both listed in the order of `active`.
CoalitionStructure partition(std::span<const std::string> active, const AuctionOutcome& outcome,
                             std::size_t slot = 0);

struct Participant {
    std::string id;
    Energy quantity;  ///< surplus for sellers, deficit for buyers
};

/** Splits `row_totals` across columns so that every row and column sum is exact.
 *
 * Cell (i, j) is close to row_i * col_j / total; both totals must be equal. Used for
 * bilateral trade lists inside a coalition.
 */
std::vector<std::vector<Energy>> split_bilateral(std::span<const Energy> row_totals,
                                                 std::span<const Energy> col_totals);

/** Matches the mid-market coalition.
 *
 * Traded energy is min(total surplus, total deficit); each side is filled pro rata to
 * its quantity and the fills are split bilaterally. Leftover surplus goes to the grid
 * at the feed-in tariff, leftover deficit is bought from the third party.
 */
std::vector<Trade> match_midmarket(std::span<const Participant> sellers, std::span<const Participant> buyers,
                                   const MidMarketPrices& prices, Price fit_price, Price third_party_price);

enum class Role { Seller, Buyer };

/// State of one active prosumer as settled under the coalition structure.
struct Member {
    std::string id;
    Role role = Role::Seller;
    double alpha = 0.0;
    Energy quantity;
    double utility = 0.0;
};

struct StabilityContext {
    Price grid_selling_price;  ///< peak price in force
    Price fit_price;
    Price third_party_price;
    MidMarketPrices mid;
    std::size_t pair_limit = 12;  ///< pair defections are enumerated up to this many members
    /// Also try seller/buyer pairs leaving the auction coalition. Off by default: the
    /// feasible set is grid, third party and sub-coalitions of the mid-market coalition.
    bool auction_pairs = false;
};

/// Utility gain (cents) a deviation must exceed to count as strict.
inline constexpr double kStrictGain = 1e-4;

enum class DeviationKind { AloneGrid, AloneThirdParty, Pair };

const char* to_string(DeviationKind kind);

struct Deviation {
    DeviationKind kind = DeviationKind::AloneGrid;
    std::vector<std::string> members;
    std::vector<double> utility_before;
    std::vector<double> utility_after;
};

struct StabilityVerdict {
    bool stable = true;
    std::optional<Deviation> witness;
    std::size_t deviations_checked = 0;
};

/** Searches for a profitable split from the coalition structure.
 *
 * Candidates, in order: for every member (coalition 1 first, then coalition 2) acting
 * alone with the grid, then alone with the third party (buyers only); then, when the
 * structure has at most `pair_limit` members, every seller/buyer pair of the mid-market
 * coalition (and of the auction coalition if `auction_pairs`) splitting off to trade
 * at mid-market prices. A deviation is profitable when every deviator gains more than
 * kStrictGain, which absorbs the per-trade rounding of settled cash; the first one
 * found is returned as the witness. Deviators always settle their full surplus or
 * deficit, residuals going to the grid (surplus) or third party (deficit).
 */
StabilityVerdict check_dhp_stability(const CoalitionStructure& structure, std::span<const Member> members,
                                     const StabilityContext& context);

}  // namespace gridp2p
