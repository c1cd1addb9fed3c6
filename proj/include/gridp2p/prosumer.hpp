#pragma once

#include "gridp2p/fixed_point.hpp"

namespace gridp2p {

enum class TradeSide { Sell, Buy };

/// One prosumer's position for a slot: a grid leg and a peer-to-peer leg, never both.
struct TradePosition {
    double e_g = 0.0;      ///< kWh traded with the grid
    double e_p = 0.0;      ///< kWh traded with peers
    double price_g = 0.0;  ///< cents/kWh on the grid leg
    double price_p = 0.0;  ///< cents/kWh on the peer leg
    TradeSide side = TradeSide::Sell;
};

/// alpha*log2(1 + e_g + e_p) + price_g*e_g + price_p*e_p
double utility_sell(double alpha, const TradePosition& position);

/// alpha*log2(1 + e_g + e_p) - price_g*e_g - price_p*e_p
double utility_buy(double alpha, const TradePosition& position);

/// Grid purchase maximizing utility_buy with no peer leg, clamped at zero.
double optimal_grid_purchase(double alpha, double price);

/// alpha / ln 2; above this price the optimal grid purchase is zero.
double max_willingness_price(double alpha);

/** Utility of a settled slot spanning any number of venues.
 *
 * Reduces to utility_sell / utility_buy when there is a single leg:
 * alpha*log2(1 + traded) + net_cash, where net_cash is revenue minus cost in cents.
 */
double settled_utility(double alpha, Energy traded, Money net_cash);

}  // namespace gridp2p
