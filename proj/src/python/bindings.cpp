#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gridp2p/auction.hpp"
#include "gridp2p/case_study.hpp"
#include "gridp2p/coalition.hpp"
#include "gridp2p/engine.hpp"
#include "gridp2p/errors.hpp"
#include "gridp2p/leader.hpp"
#include "gridp2p/metrics.hpp"
#include "gridp2p/prosumer.hpp"
#include "gridp2p/scenario_io.hpp"

namespace py = pybind11;
using namespace gridp2p;

namespace {

// Scenarios cross the boundary as JSON documents; results as plain dicts.

std::vector<Order> orders(const std::vector<std::tuple<std::string, double, double>>& rows, Side side) {
    std::vector<Order> out;
    for (const auto& [id, price, qty] : rows) {
        out.push_back(Order{id, cents_per_kwh(price), kwh(qty), side});
    }
    return out;
}

py::list fills(const std::vector<Fill>& side) {
    py::list out;
    for (const Fill& f : side) {
        py::dict d;
        d["id"] = f.prosumer_id;
        d["price"] = f.order_price.to_double();
        d["offered"] = f.offered.to_double();
        d["cleared"] = f.cleared.to_double();
        d["burden"] = f.burden.to_double();
        out.append(d);
    }
    return out;
}

py::dict clear_book(const std::vector<std::tuple<std::string, double, double>>& asks,
                    const std::vector<std::tuple<std::string, double, double>>& bids, const std::string& rule) {
    const AuctionOutcome o = clear(OrderBook{orders(asks, Side::Ask), orders(bids, Side::Bid), 0},
                                   parse_price_rule(rule));
    py::dict d;
    d["auction_price"] = o.empty() ? py::object(py::none()) : py::float_(o.auction_price.to_double());
    d["sellers"] = fills(o.sellers);
    d["buyers"] = fills(o.buyers);
    d["excluded"] = o.excluded;
    return d;
}

py::dict slot_dict(const SlotResult& r) {
    py::dict d;
    d["slot"] = r.slot;
    d["selling_price"] = r.price_signal.selling_price.to_double();
    d["peak"] = r.price_signal.peak_flag;
    d["demand"] = r.price_signal.demand.to_double();
    d["threshold"] = r.price_signal.threshold.to_double();
    d["delivered"] = r.cps_delivered.to_double();
    d["cps_cost"] = r.cps_cost.to_double();
    d["excess_cost"] = r.cps_excess_cost.to_double();
    if (r.structure) {
        d["auction_price"] = r.structure->auction.empty()
                                 ? py::object(py::none())
                                 : py::float_(r.structure->auction.auction_price.to_double());
        d["coalitions"] = py::make_tuple(r.structure->auction_coalition, r.structure->midmarket_coalition);
    }
    if (r.stability) {
        d["stable"] = r.stability->stable;
    }
    py::list trades;
    for (const Trade& t : r.trades) {
        trades.append(py::make_tuple(to_string(t.venue), t.seller_id, t.buyer_id, t.quantity.to_double(),
                                     t.seller_price.to_double(), t.buyer_price.to_double()));
    }
    d["trades"] = trades;
    py::dict prosumers;
    for (const ProsumerSettlement& p : r.per_prosumer) {
        py::dict s;
        s["venue"] = p.venue;
        s["revenue"] = p.revenue.to_double();
        s["cost"] = p.cost.to_double();
        s["utility"] = p.utility;
        prosumers[py::str(p.id)] = s;
    }
    d["prosumers"] = prosumers;
    return d;
}

RunMode parse_mode(const std::string& mode) {
    if (mode == "p2p") {
        return RunMode::P2P;
    }
    if (mode == "grid-only") {
        return RunMode::GridOnly;
    }
    if (mode == "third-party") {
        return RunMode::ThirdParty;
    }
    throw ValidationError("mode", "expected p2p, grid-only or third-party, got '" + mode + "'");
}

py::dict simulate(const std::string& scenario_json, const std::string& mode, unsigned jobs) {
    const Scenario s = parse_scenario(scenario_json);
    SimulationReport report;
    {
        py::gil_scoped_release release;
        report = run_mode(s, parse_mode(mode), jobs);
    }
    py::dict d;
    d["mode"] = to_string(report.mode);
    py::list slots;
    for (const SlotResult& r : report.slots) {
        slots.append(slot_dict(r));
    }
    d["slots"] = slots;
    const ReportAggregates& a = report.aggregates;
    d["cps_cost"] = a.cps_cost.to_double();
    d["cps_excess_cost"] = a.cps_excess_cost.to_double();
    d["prosumer_cost"] = a.prosumer_cost.to_double();
    d["prosumer_revenue"] = a.prosumer_revenue.to_double();
    d["network_fees"] = a.network_fees.to_double();
    d["avg_cost_per_prosumer"] = a.avg_cost_per_prosumer.to_double();
    d["peak_slots"] = a.peak_slots;
    d["unstable_slots"] = a.unstable_slots;
    return d;
}

py::dict compare_modes(const std::string& scenario_json, unsigned jobs) {
    const Scenario s = parse_scenario(scenario_json);
    MetricsTable t;
    {
        py::gil_scoped_release release;
        t = compare(run_horizon(s, jobs), baseline_grid_only(s, jobs), baseline_third_party(s, jobs));
    }
    auto opt = [](const std::optional<double>& v) { return v ? py::object(py::float_(*v)) : py::object(py::none()); };
    py::dict d;
    d["peak_slots"] = t.peak_slots;
    d["avg_revenue_uplift"] = opt(t.avg_revenue_uplift);
    d["avg_savings_vs_grid"] = opt(t.avg_savings_vs_grid);
    d["avg_savings_vs_third_party"] = opt(t.avg_savings_vs_third_party);
    d["avg_third_party_premium"] = opt(t.avg_third_party_premium);
    d["cps_cost_p2p"] = t.cps_cost_p2p.to_double();
    d["cps_cost_grid_only"] = t.cps_cost_grid_only.to_double();
    d["cps_excess_cost_p2p"] = t.cps_excess_cost_p2p.to_double();
    d["cps_excess_cost_grid_only"] = t.cps_excess_cost_grid_only.to_double();
    d["avg_cost_p2p"] = t.avg_cost_p2p.to_double();
    d["avg_cost_grid_only"] = t.avg_cost_grid_only.to_double();
    d["avg_cost_third_party"] = t.avg_cost_third_party.to_double();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Peer-to-peer energy trading simulator core";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def(
        "case_study",
        [](std::uint64_t seed, std::size_t prosumers, std::size_t sellers) {
            CaseStudyOptions o;
            o.prosumers = prosumers;
            o.sellers_per_slot = sellers;
            return emit_scenario(make_case_study_scenario(seed, o));
        },
        py::arg("seed"), py::arg("prosumers") = 12, py::arg("sellers") = 6,
        "Seeded case-study scenario as a JSON document.");
    m.def(
        "validate_scenario", [](const std::string& text) { return emit_scenario(parse_scenario(text)); },
        py::arg("scenario_json"), "Parses, validates and re-emits a scenario document.");

    m.def("peak_price", &peak_price, py::arg("a"), py::arg("b"), py::arg("e_d"), py::arg("e_t"));
    m.def("min_b", &min_b, py::arg("a"), py::arg("alpha_max"), py::arg("e_d"), py::arg("e_t"));
    m.def("cps_cost", &cps_cost, py::arg("a"), py::arg("b"), py::arg("e_d"), py::arg("e_t"), py::arg("price"));
    m.def("optimal_grid_purchase", &optimal_grid_purchase, py::arg("alpha"), py::arg("price"));
    m.def("max_willingness_price", &max_willingness_price, py::arg("alpha"));
    m.def(
        "utility_sell",
        [](double alpha, double e_g, double e_p, double price_g, double price_p) {
            return utility_sell(alpha, TradePosition{e_g, e_p, price_g, price_p, TradeSide::Sell});
        },
        py::arg("alpha"), py::arg("e_g"), py::arg("e_p"), py::arg("price_g"), py::arg("price_p"));
    m.def(
        "utility_buy",
        [](double alpha, double e_g, double e_p, double price_g, double price_p) {
            return utility_buy(alpha, TradePosition{e_g, e_p, price_g, price_p, TradeSide::Buy});
        },
        py::arg("alpha"), py::arg("e_g"), py::arg("e_p"), py::arg("price_g"), py::arg("price_p"));

    m.def("clear", &clear_book, py::arg("asks"), py::arg("bids"), py::arg("rule") = "highest",
          "Clears (id, price, qty) asks and bids.");
    m.def(
        "mid_market_prices",
        [](double auction_price, double fit, double beta) {
            const MidMarketPrices p = mid_market_prices(cents_per_kwh(auction_price), cents_per_kwh(fit), beta);
            return py::make_tuple(p.sell.to_double(), p.buy.to_double());
        },
        py::arg("auction_price"), py::arg("fit_price"), py::arg("beta"));

    m.def("simulate", &simulate, py::arg("scenario_json"), py::arg("mode") = "p2p", py::arg("jobs") = 1);
    m.def("compare", &compare_modes, py::arg("scenario_json"), py::arg("jobs") = 1);
}
