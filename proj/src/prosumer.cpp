#include "gridp2p/prosumer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gridp2p/errors.hpp"

namespace gridp2p {

namespace {

void check_position(const TradePosition& p, TradeSide expected) {
    if (p.side != expected) {
        throw PreconditionError("trade position has the wrong side for this utility");
    }
    if (p.e_g < 0.0 || p.e_p < 0.0) {
        throw DomainError("traded energy must be non-negative");
    }
    if (p.e_g > 0.0 && p.e_p > 0.0) {
        throw DomainError("a prosumer trading with the grid does not trade with peers in the same slot");
    }
}

}  // namespace

double utility_sell(double alpha, const TradePosition& p) {
    check_position(p, TradeSide::Sell);
    return alpha * std::log2(1.0 + p.e_g + p.e_p) + p.price_g * p.e_g + p.price_p * p.e_p;
}

double utility_buy(double alpha, const TradePosition& p) {
    check_position(p, TradeSide::Buy);
    return alpha * std::log2(1.0 + p.e_g + p.e_p) - p.price_g * p.e_g - p.price_p * p.e_p;
}

double optimal_grid_purchase(double alpha, double price) {
    if (!(price > 0.0)) {
        throw DomainError("optimal_grid_purchase: price must be positive");
    }
    return std::max(alpha / (price * std::numbers::ln2) - 1.0, 0.0);
}

double max_willingness_price(double alpha) { return alpha / std::numbers::ln2; }

double settled_utility(double alpha, Energy traded, Money net_cash) {
    return alpha * std::log2(1.0 + traded.to_double()) + net_cash.to_double();
}

}  // namespace gridp2p
