#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridp2p/engine.hpp"
#include "gridp2p/metrics.hpp"

namespace gridp2p {

/** Run output files and their fixed headers:
 *
 *   prices.csv       slot,selling_price,peak_flag
 *   cps_cost.csv     slot,peak_flag,delivered_demand,cps_cost,excess_cost
 *   coalitions.csv   slot,coalition,member          (peak slots of P2P runs)
 *   trades.csv       slot,venue,seller,buyer,qty,seller_price,buyer_price
 *   summary.csv      scope,prosumer,metric,value    (compare runs)
 *
 * Prices and money carry 6 decimals, energy 9; both are the exact fixed-point values,
 * so re-parsed files reproduce the settlement to the last unit.
 */
void write_run_outputs(const std::filesystem::path& dir, const SimulationReport& report);

void write_summary(const std::filesystem::path& dir, const MetricsTable& table);

/// Exact decimal rendering of a fixed-point raw value with `decimals` fractional digits.
std::string format_fixed(std::int64_t raw, int decimals);

/// Inverse of format_fixed; at most `decimals` fractional digits. Throws DomainError.
std::int64_t parse_fixed(std::string_view text, int decimals);

struct AuditResult {
    std::size_t slots = 0;
    std::size_t trades = 0;
    std::vector<std::string> problems;

    bool ok() const { return problems.empty(); }
};

/** Re-reads an output directory and checks it against the settlement invariants.
 *
 * Without a scenario: headers, number formats, per-trade arithmetic, one price per
 * slot in the auction, a single role per prosumer and slot, coalition membership
 * matching trade venues and zero CPS cost on peak slots served peer to peer. With the
 * scenario: additionally every prosumer's traded energy equals its surplus or
 * deficit, and the prices equal the leader's decision. Missing files throw IoError.
 */
AuditResult audit_directory(const std::filesystem::path& dir, const std::optional<Scenario>& scenario = {});

}  // namespace gridp2p
