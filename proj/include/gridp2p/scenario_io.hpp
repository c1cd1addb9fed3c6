#pragma once

#include <filesystem>
#include <string>

#include "gridp2p/market_core.hpp"

namespace gridp2p {

/// Serializes to the scenario JSON document (stable key order, 2-space indent).
std::string emit_scenario(const Scenario& scenario);

/** Parses and validates a scenario document.
 *
 * Unknown keys, missing keys, wrong types, per-slot arrays whose length differs from
 * `slots` and out-of-range values all throw ValidationError with the JSON path of the
 * offending field.
 */
Scenario parse_scenario(const std::string& text);

/// Reads `path` and parses it. I/O failures throw IoError.
Scenario load_scenario(const std::filesystem::path& path);

void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

const char* to_string(AuctionPriceRule rule);
AuctionPriceRule parse_price_rule(const std::string& text);

}  // namespace gridp2p
