#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gridp2p/market_core.hpp"

namespace gridp2p {

/** Knobs for the synthetic residential case study.
 *
 * Defaults: 12 prosumers, 6 sellers and 6 buyers per slot, surplus/deficit magnitudes
 * in [2, 9] kWh, asks and bids in [11, 15] cents/kWh, FiT 10 and off-peak 28
 * cents/kWh, 22 half-hour slots with the demand peaks at slots 3, 4, 6, 13, 15
 * and 19 (1-based).
 */
struct CaseStudyOptions {
    std::size_t prosumers = 12;
    std::size_t sellers_per_slot = 6;
    std::size_t slots = 22;
    double a = 68.6;
    double b = 274.4;
    std::vector<std::size_t> peak_slots = {2, 3, 5, 12, 14, 18};  // 0-based
    double alpha_min = 10.0;
    double alpha_max = 20.0;
};

/// Deterministic in `seed`: equal seeds give equal scenarios on every platform.
Scenario make_case_study_scenario(std::uint64_t seed, const CaseStudyOptions& options = {});

}  // namespace gridp2p
