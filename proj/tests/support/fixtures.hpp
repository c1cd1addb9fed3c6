#pragma once

// Hand-built scenarios shared by the unit and acceptance suites.

#include <string>
#include <vector>

#include "gridp2p/market_core.hpp"

namespace gridp2p::testing {

struct Position {
    std::string id;
    double net;    ///< + surplus, - deficit
    double price;  ///< ask for sellers, bid for buyers
};

/// One-slot scenario; the threshold sits `excess` kWh below the contracted demand.
inline Scenario single_slot(const std::vector<Position>& positions, double excess, double a = 68.6,
                            double b = 274.4) {
    Scenario s;
    s.slots = 1;
    double demand = 0.0;
    for (const Position& p : positions) {
        ProsumerProfile prof;
        prof.id = p.id;
        prof.alpha = {15.0};
        prof.net_energy = {kwh(p.net)};
        prof.reservation_price = {cents_per_kwh(p.price)};
        prof.bid_price = {cents_per_kwh(p.price)};
        s.prosumers.push_back(prof);
        if (p.net < 0) {
            demand -= p.net;
        }
    }
    s.grid.a = a;
    s.grid.b = b;
    s.grid.threshold = {kwh(demand - excess)};
    s.grid.other_demand = {kwh(50.0)};
    return s;
}

/** Sellers 1-6 and buyers 7-12 in a single worked peak slot.
 *
 * Supply curve 12 (3 kWh), 13 (2), 13.5 (2), 14 (3), 14.5 (2), 15 (3); demand curve
 * 15 (4), 14.8 (3), 14.5 (2), 13 (2), 12 (3), 11 (2). The curves cross at 9 kWh with
 * sellers 3-6 and buyers 7-9 trading at 14; supply 10 against demand 9 leaves a burden
 * of 0.25 kWh per seller. E_D - E_T = 2 puts the peak price at 548.8.
 */
inline Scenario worked_slot_scenario() {
    return single_slot({{"1", 2, 14.5},
                        {"2", 3, 15},
                        {"3", 3, 12},
                        {"4", 2, 13},
                        {"5", 2, 13.5},
                        {"6", 3, 14},
                        {"7", -4, 15},
                        {"8", -3, 14.8},
                        {"9", -2, 14.5},
                        {"10", -2, 13},
                        {"11", -3, 12},
                        {"12", -2, 11}},
                       2.0);
}

/// Every buyer trades in the auction at 14 and supply covers demand.
inline Scenario all_auction_buyers_scenario() {
    return single_slot({{"s1", 3, 12}, {"s2", 3, 13}, {"s3", 3, 14}, {"b1", -3, 15}, {"b2", -3, 15}, {"b3", -2, 14.5}},
                       2.0);
}

/** Five sellers clear at 12.4 with demand matching supply; seller 6 and buyer 10 are
 * left out and trade 3 kWh at the mid-market price 11.2.
 */
inline Scenario blended_seller_scenario() {
    return single_slot({{"1", 2, 12.0},
                        {"2", 2, 12.1},
                        {"3", 2, 12.2},
                        {"4", 2, 12.3},
                        {"5", 2, 12.4},
                        {"6", 3, 14.8},
                        {"7", -4, 15},
                        {"8", -4, 14.5},
                        {"9", -2, 14},
                        {"10", -3, 12}},
                       2.0);
}

}  // namespace gridp2p::testing
