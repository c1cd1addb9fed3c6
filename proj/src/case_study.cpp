#include "gridp2p/case_study.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "gridp2p/errors.hpp"

namespace gridp2p {

namespace {

// std::mt19937_64 output is fully specified by the standard; the library's
// distributions are not, so the mapping to ranges is done here.
class SeededStream {
public:
    explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    std::size_t index(std::size_t n) {
        const std::uint64_t limit = engine_.max() - engine_.max() % n;
        std::uint64_t draw = engine_();
        while (draw >= limit) {
            draw = engine_();
        }
        return static_cast<std::size_t>(draw % n);
    }

private:
    std::mt19937_64 engine_;
};

double quantize(double value, double step) { return std::round(value / step) * step; }

}  // namespace

Scenario make_case_study_scenario(std::uint64_t seed, const CaseStudyOptions& options) {
    if (options.prosumers == 0 || options.slots == 0) {
        throw DomainError("case study needs at least one prosumer and one slot");
    }
    if (options.sellers_per_slot > options.prosumers) {
        throw DomainError("sellers_per_slot exceeds the number of prosumers");
    }

    SeededStream rng(seed);
    const std::size_t n_prosumers = options.prosumers;
    const std::size_t n_slots = options.slots;

    Scenario s;
    s.slots = n_slots;
    s.slot_minutes = 30;
    s.seed = seed;
    s.grid.a = options.a;
    s.grid.b = options.b;
    s.grid.offpeak_price = cents_per_kwh(28.0);
    s.grid.fit_price = cents_per_kwh(10.0);
    s.market = MarketConfig{};

    std::vector<std::vector<double>> magnitude(n_prosumers, std::vector<double>(n_slots));
    s.prosumers.resize(n_prosumers);
    for (std::size_t n = 0; n < n_prosumers; ++n) {
        ProsumerProfile& p = s.prosumers[n];
        p.id = std::to_string(n + 1);
        const double alpha = quantize(rng.uniform(options.alpha_min, options.alpha_max), 0.001);
        p.alpha.assign(n_slots, alpha);
        p.net_energy.resize(n_slots);
        p.reservation_price.resize(n_slots);
        p.bid_price.resize(n_slots);
        for (std::size_t t = 0; t < n_slots; ++t) {
            magnitude[n][t] = quantize(rng.uniform(2.0, 9.0), 0.001);
            p.reservation_price[t] = cents_per_kwh(quantize(rng.uniform(11.0, 15.0), 0.01));
            p.bid_price[t] = cents_per_kwh(quantize(rng.uniform(11.0, 15.0), 0.01));
        }
    }

    std::vector<std::size_t> order(n_prosumers);
    s.grid.threshold.resize(n_slots);
    s.grid.other_demand.resize(n_slots);
    std::vector<Energy> capacity(n_slots);
    for (std::size_t t = 0; t < n_slots; ++t) {
        for (std::size_t i = 0; i < n_prosumers; ++i) {
            order[i] = i;
        }
        for (std::size_t i = n_prosumers - 1; i > 0; --i) {
            std::swap(order[i], order[rng.index(i + 1)]);
        }
        Energy deficit{};
        for (std::size_t k = 0; k < n_prosumers; ++k) {
            const std::size_t n = order[k];
            const Energy e = kwh(magnitude[n][t]);
            const bool seller = k < options.sellers_per_slot;
            s.prosumers[n].net_energy[t] = seller ? e : -e;
            if (!seller) {
                deficit += e;
            }
        }

        const bool peak = std::find(options.peak_slots.begin(), options.peak_slots.end(), t) !=
                          options.peak_slots.end();
        Energy threshold;
        if (peak) {
            threshold = max(deficit - kwh(quantize(rng.uniform(0.5, 3.0), 0.001)), Energy{});
        } else {
            threshold = deficit + kwh(quantize(rng.uniform(2.0, 10.0), 0.001));
        }
        s.grid.threshold[t] = threshold;
        s.grid.other_demand[t] = kwh(quantize(rng.uniform(40.0, 80.0), 0.001));
        capacity[t] = threshold + s.grid.other_demand[t];
    }
    s.grid.supply_capacity = std::move(capacity);
    return s;
}

}  // namespace gridp2p
