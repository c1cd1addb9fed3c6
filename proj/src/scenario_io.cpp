#include "gridp2p/scenario_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gridp2p/errors.hpp"

namespace gridp2p {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

namespace {

// Walks one JSON object, recording which keys were consumed so leftovers can be
// rejected as unknown.
class ObjectReader {
public:
    ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) {
            throw ValidationError(display(), "expected an object");
        }
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    const json& at(const std::string& key) {
        if (!node_.contains(key)) {
            throw ValidationError(child(key), "missing required key");
        }
        consumed_.insert(key);
        return node_.at(key);
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    double number(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number()) {
            throw ValidationError(child(key), "expected a number");
        }
        return v.get<double>();
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = at(key);
        if (!v.is_array()) {
            throw ValidationError(child(key), "expected an array of numbers");
        }
        std::vector<double> out;
        out.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                throw ValidationError(child(key) + "[" + std::to_string(i) + "]", "expected a number");
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    void reject_unknown() const {
        for (const auto& item : node_.items()) {
            if (!consumed_.contains(item.key())) {
                throw ValidationError(child(item.key()), "unknown key");
            }
        }
    }

private:
    std::string display() const { return path_.empty() ? "$" : path_; }

    const json& node_;
    std::string path_;
    std::set<std::string> consumed_;
};

template <typename T>
std::vector<T> convert(const std::vector<double>& values, T (*make)(double), const std::string& path) {
    std::vector<T> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        try {
            out.push_back(make(values[i]));
        } catch (const std::out_of_range&) {
            throw ValidationError(path + "[" + std::to_string(i) + "]", "value out of range");
        }
    }
    return out;
}

template <typename T>
ordered_json to_array(const std::vector<T>& values) {
    ordered_json arr = ordered_json::array();
    for (const T& v : values) {
        arr.push_back(v.to_double());
    }
    return arr;
}

void require_length(std::size_t got, std::size_t slots, const std::string& path) {
    if (got != slots) {
        throw ValidationError(path, "expected " + std::to_string(slots) + " entries, got " +
                                        std::to_string(got));
    }
}

}  // namespace

const char* to_string(AuctionPriceRule rule) {
    return rule == AuctionPriceRule::Vickrey ? "vickrey" : "highest";
}

AuctionPriceRule parse_price_rule(const std::string& text) {
    if (text == "highest") {
        return AuctionPriceRule::HighestReservation;
    }
    if (text == "vickrey") {
        return AuctionPriceRule::Vickrey;
    }
    throw ValidationError("market.auction_price_rule", "expected 'highest' or 'vickrey', got '" + text + "'");
}

std::string emit_scenario(const Scenario& s) {
    ordered_json doc;
    doc["slots"] = s.slots;
    doc["slot_minutes"] = s.slot_minutes;
    doc["seed"] = s.seed;

    ordered_json grid;
    grid["a"] = s.grid.a;
    grid["b"] = s.grid.b;
    grid["threshold"] = to_array(s.grid.threshold);
    grid["other_demand"] = to_array(s.grid.other_demand);
    if (s.grid.supply_capacity) {
        grid["supply_capacity"] = to_array(*s.grid.supply_capacity);
    }
    grid["offpeak_price"] = s.grid.offpeak_price.to_double();
    grid["fit_price"] = s.grid.fit_price.to_double();
    doc["grid"] = std::move(grid);

    ordered_json market;
    market["beta"] = s.market.beta;
    market["third_party_price"] = s.market.third_party_price.to_double();
    market["auction_price_rule"] = to_string(s.market.auction_price_rule);
    doc["market"] = std::move(market);

    ordered_json prosumers = ordered_json::array();
    for (const ProsumerProfile& p : s.prosumers) {
        ordered_json row;
        row["id"] = p.id;
        const bool uniform = !p.alpha.empty() &&
                             std::all_of(p.alpha.begin(), p.alpha.end(),
                                         [&](double v) { return v == p.alpha.front(); });
        if (uniform) {
            row["alpha"] = p.alpha.front();
        } else {
            row["alpha"] = p.alpha;
        }
        row["net_energy"] = to_array(p.net_energy);
        row["reservation_price"] = to_array(p.reservation_price);
        row["bid_price"] = to_array(p.bid_price);
        prosumers.push_back(std::move(row));
    }
    doc["prosumers"] = std::move(prosumers);
    return doc.dump(2) + "\n";
}

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("$", std::string("malformed JSON: ") + e.what());
    }

    Scenario s;
    ObjectReader root(doc, "");

    const json& slots = root.at("slots");
    if (!slots.is_number_integer() || slots.get<long long>() < 1) {
        throw ValidationError("slots", "expected an integer >= 1");
    }
    s.slots = slots.get<std::size_t>();

    const json& minutes = root.at("slot_minutes");
    if (!minutes.is_number_integer() || minutes.get<long long>() <= 0) {
        throw ValidationError("slot_minutes", "expected a positive integer");
    }
    s.slot_minutes = minutes.get<int>();

    const json& seed = root.at("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
        throw ValidationError("seed", "expected a non-negative integer");
    }
    s.seed = seed.get<std::uint64_t>();

    {
        ObjectReader grid(root.at("grid"), "grid");
        s.grid.a = grid.number("a");
        s.grid.b = grid.number("b");
        s.grid.threshold = convert(grid.numbers("threshold"), &kwh, grid.child("threshold"));
        require_length(s.grid.threshold.size(), s.slots, "grid.threshold");
        s.grid.other_demand = convert(grid.numbers("other_demand"), &kwh, grid.child("other_demand"));
        require_length(s.grid.other_demand.size(), s.slots, "grid.other_demand");
        if (grid.has("supply_capacity")) {
            s.grid.supply_capacity = convert(grid.numbers("supply_capacity"), &kwh, grid.child("supply_capacity"));
            require_length(s.grid.supply_capacity->size(), s.slots, "grid.supply_capacity");
        }
        s.grid.offpeak_price = cents_per_kwh(grid.number("offpeak_price"));
        s.grid.fit_price = cents_per_kwh(grid.number("fit_price"));
        grid.reject_unknown();
    }

    {
        ObjectReader market(root.at("market"), "market");
        s.market.beta = market.number("beta");
        s.market.third_party_price = cents_per_kwh(market.number("third_party_price"));
        const json& rule = market.at("auction_price_rule");
        if (!rule.is_string()) {
            throw ValidationError("market.auction_price_rule", "expected a string");
        }
        s.market.auction_price_rule = parse_price_rule(rule.get<std::string>());
        market.reject_unknown();
    }

    const json& prosumers = root.at("prosumers");
    if (!prosumers.is_array()) {
        throw ValidationError("prosumers", "expected an array");
    }
    for (std::size_t n = 0; n < prosumers.size(); ++n) {
        const std::string base = "prosumers[" + std::to_string(n) + "]";
        ObjectReader row(prosumers[n], base);
        ProsumerProfile p;
        const json& id = row.at("id");
        if (id.is_string()) {
            p.id = id.get<std::string>();
        } else if (id.is_number_integer()) {
            p.id = std::to_string(id.get<long long>());
        } else {
            throw ValidationError(base + ".id", "expected a string or integer");
        }
        const json& alpha = row.at("alpha");
        if (alpha.is_number()) {
            p.alpha.assign(s.slots, alpha.get<double>());
        } else {
            p.alpha = row.numbers("alpha");
            require_length(p.alpha.size(), s.slots, base + ".alpha");
        }
        p.net_energy = convert(row.numbers("net_energy"), &kwh, row.child("net_energy"));
        require_length(p.net_energy.size(), s.slots, base + ".net_energy");
        p.reservation_price = convert(row.numbers("reservation_price"), &cents_per_kwh, row.child("reservation_price"));
        require_length(p.reservation_price.size(), s.slots, base + ".reservation_price");
        p.bid_price = convert(row.numbers("bid_price"), &cents_per_kwh, row.child("bid_price"));
        require_length(p.bid_price.size(), s.slots, base + ".bid_price");
        row.reject_unknown();
        s.prosumers.push_back(std::move(p));
    }
    root.reject_unknown();

    validate(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open scenario file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write scenario file " + path.string());
    }
    out << emit_scenario(scenario);
    if (!out) {
        throw IoError("failed writing scenario file " + path.string());
    }
}

}  // namespace gridp2p
