#include "gridp2p/csv_report.hpp"

#include <fmt/format.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gridp2p/errors.hpp"
#include "gridp2p/leader.hpp"

namespace gridp2p {

namespace {

constexpr int kPriceDecimals = 6;
constexpr int kMoneyDecimals = 6;
constexpr int kEnergyDecimals = 9;

const std::vector<std::string> kPricesHeader = {"slot", "selling_price", "peak_flag"};
const std::vector<std::string> kCpsHeader = {"slot", "peak_flag", "delivered_demand", "cps_cost", "excess_cost"};
const std::vector<std::string> kCoalitionsHeader = {"slot", "coalition", "member"};
const std::vector<std::string> kTradesHeader = {"slot",  "venue", "seller",      "buyer",
                                                "qty",   "seller_price", "buyer_price"};
const std::vector<std::string> kSummaryHeader = {"scope", "prosumer", "metric", "value"};

std::string quoted(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

std::string row(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            line += ',';
        }
        line += quoted(fields[i]);
    }
    return line + '\n';
}

std::string energy(Energy e) { return format_fixed(e.raw(), kEnergyDecimals); }
std::string money(Money m) { return format_fixed(m.raw(), kMoneyDecimals); }
std::string price(Price p) { return format_fixed(p.raw(), kPriceDecimals); }
std::string percent(const std::optional<double>& fraction) {
    return fraction ? fmt::format("{:.6f}", *fraction * 100.0) : "NA";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << content;
    if (!out.flush()) {
        throw IoError("failed writing " + path.string());
    }
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
}

using Table = std::vector<std::vector<std::string>>;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields(1);
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                in_quotes = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

/// Header-checked rows; header mismatches are recorded as problems.
Table read_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               std::vector<std::string>& problems) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    Table rows;
    std::string line;
    bool first = true;
    const std::string name = path.filename().string();
    while (std::getline(in, line)) {
        auto fields = split_csv_line(line);
        if (first) {
            first = false;
            if (fields != header) {
                problems.push_back(name + ": unexpected header '" + line + "'");
            }
            continue;
        }
        if (fields.size() != header.size()) {
            problems.push_back(name + ": wrong field count in '" + line + "'");
            continue;
        }
        rows.push_back(std::move(fields));
    }
    if (first) {
        problems.push_back(name + ": empty file");
    }
    return rows;
}

struct ParsedTrade {
    std::size_t slot = 0;
    std::string venue;
    std::string seller;
    std::string buyer;
    Energy qty;
    Price seller_price;
    Price buyer_price;
};

bool external(const std::string& id) { return id == kGridId || id == kThirdPartyId; }

}  // namespace

std::string format_fixed(std::int64_t raw, int decimals) {
    std::uint64_t scale = 1;
    for (int i = 0; i < decimals; ++i) {
        scale *= 10;
    }
    const bool negative = raw < 0;
    // Magnitude via unsigned arithmetic so INT64_MIN is representable.
    const std::uint64_t mag = negative ? ~static_cast<std::uint64_t>(raw) + 1 : static_cast<std::uint64_t>(raw);
    if (decimals == 0) {
        return fmt::format("{}{}", negative ? "-" : "", mag);
    }
    return fmt::format("{}{}.{:0{}}", negative ? "-" : "", mag / scale, mag % scale, decimals);
}

std::int64_t parse_fixed(std::string_view text, int decimals) {
    const std::string original(text);
    auto fail = [&] { throw DomainError("not a decimal with at most " + std::to_string(decimals) + " places: '" +
                                        original + "'"); };
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const std::size_t dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() || frac.size() > static_cast<std::size_t>(decimals) ||
        (dot != std::string_view::npos && frac.empty())) {
        fail();
    }
    __int128 value = 0;
    auto digits = [&](std::string_view part) {
        for (char c : part) {
            if (c < '0' || c > '9') {
                fail();
            }
            value = value * 10 + (c - '0');
            if (value > static_cast<__int128>(INT64_MAX)) {
                fail();
            }
        }
    };
    digits(whole);
    digits(frac);
    for (std::size_t i = frac.size(); i < static_cast<std::size_t>(decimals); ++i) {
        value *= 10;
        if (value > static_cast<__int128>(INT64_MAX)) {
            fail();
        }
    }
    return static_cast<std::int64_t>(negative ? -value : value);
}

void write_run_outputs(const std::filesystem::path& dir, const SimulationReport& report) {
    ensure_dir(dir);
    std::string prices = row(kPricesHeader);
    std::string cps = row(kCpsHeader);
    std::string coalitions = row(kCoalitionsHeader);
    std::string trades = row(kTradesHeader);
    for (const SlotResult& r : report.slots) {
        const std::string slot = std::to_string(r.slot);
        const std::string peak = r.price_signal.peak_flag ? "1" : "0";
        prices += row({slot, price(r.price_signal.selling_price), peak});
        cps += row({slot, peak, energy(r.cps_delivered), money(r.cps_cost), money(r.cps_excess_cost)});
        if (r.structure) {
            for (const std::string& id : r.structure->auction_coalition) {
                coalitions += row({slot, "1", id});
            }
            for (const std::string& id : r.structure->midmarket_coalition) {
                coalitions += row({slot, "2", id});
            }
        }
        for (const Trade& t : r.trades) {
            trades += row({slot, to_string(t.venue), t.seller_id, t.buyer_id, energy(t.quantity),
                           price(t.seller_price), price(t.buyer_price)});
        }
    }
    write_file(dir / "prices.csv", prices);
    write_file(dir / "cps_cost.csv", cps);
    write_file(dir / "coalitions.csv", coalitions);
    write_file(dir / "trades.csv", trades);
}

void write_summary(const std::filesystem::path& dir, const MetricsTable& table) {
    ensure_dir(dir);
    std::string out = row(kSummaryHeader);
    auto add = [&](const std::string& scope, const std::string& who, const std::string& metric,
                   const std::string& value) { out += row({scope, who, metric, value}); };

    add("aggregate", "ALL", "peak_slots", std::to_string(table.peak_slots));
    add("aggregate", "ALL", "avg_revenue_uplift_pct", percent(table.avg_revenue_uplift));
    add("aggregate", "ALL", "avg_savings_vs_grid_pct", percent(table.avg_savings_vs_grid));
    add("aggregate", "ALL", "avg_savings_vs_third_party_pct", percent(table.avg_savings_vs_third_party));
    add("aggregate", "ALL", "avg_third_party_premium_pct", percent(table.avg_third_party_premium));
    add("aggregate", "ALL", "cps_cost_p2p", money(table.cps_cost_p2p));
    add("aggregate", "ALL", "cps_cost_grid_only", money(table.cps_cost_grid_only));
    add("aggregate", "ALL", "cps_cost_third_party", money(table.cps_cost_third_party));
    add("aggregate", "ALL", "cps_excess_cost_p2p", money(table.cps_excess_cost_p2p));
    add("aggregate", "ALL", "cps_excess_cost_grid_only", money(table.cps_excess_cost_grid_only));
    add("aggregate", "ALL", "avg_cost_per_prosumer_p2p", money(table.avg_cost_p2p));
    add("aggregate", "ALL", "avg_cost_per_prosumer_grid_only", money(table.avg_cost_grid_only));
    add("aggregate", "ALL", "avg_cost_per_prosumer_third_party", money(table.avg_cost_third_party));
    for (const ProsumerComparison& p : table.prosumers) {
        add("prosumer", p.id, "p2p_revenue", money(p.p2p_revenue));
        add("prosumer", p.id, "fit_revenue", money(p.fit_revenue));
        add("prosumer", p.id, "p2p_cost", money(p.p2p_cost));
        add("prosumer", p.id, "grid_cost", money(p.grid_cost));
        add("prosumer", p.id, "third_party_cost", money(p.third_party_cost));
        add("prosumer", p.id, "revenue_uplift_pct", percent(p.revenue_uplift));
        add("prosumer", p.id, "savings_vs_grid_pct", percent(p.savings_vs_grid));
        add("prosumer", p.id, "savings_vs_third_party_pct", percent(p.savings_vs_third_party));
        add("prosumer", p.id, "third_party_premium_pct", percent(p.third_party_premium));
    }
    write_file(dir / "summary.csv", out);
}

AuditResult audit_directory(const std::filesystem::path& dir, const std::optional<Scenario>& scenario) {
    AuditResult result;
    auto& problems = result.problems;
    auto problem = [&](const std::string& msg) { problems.push_back(msg); };

    const Table prices = read_csv(dir / "prices.csv", kPricesHeader, problems);
    const Table cps = read_csv(dir / "cps_cost.csv", kCpsHeader, problems);
    const Table coalitions = read_csv(dir / "coalitions.csv", kCoalitionsHeader, problems);
    const Table trade_rows = read_csv(dir / "trades.csv", kTradesHeader, problems);

    struct SlotInfo {
        Price selling_price;
        bool peak = false;
        Energy delivered;
        Money cps_cost;
        Money excess_cost;
    };
    std::map<std::size_t, SlotInfo> slots;
    auto parse_slot = [&](const std::string& text) -> std::optional<std::size_t> {
        try {
            const std::int64_t v = parse_fixed(text, 0);
            if (v >= 0) {
                return static_cast<std::size_t>(v);
            }
        } catch (const DomainError&) {
        }
        problem("bad slot index '" + text + "'");
        return std::nullopt;
    };
    auto parse_flag = [&](const std::string& text) {
        if (text != "0" && text != "1") {
            problem("bad peak flag '" + text + "'");
        }
        return text == "1";
    };

    try {
        for (const auto& f : prices) {
            const auto slot = parse_slot(f[0]);
            if (!slot) {
                continue;
            }
            if (slots.contains(*slot)) {
                problem("prices.csv: slot " + f[0] + " listed twice");
            }
            slots[*slot].selling_price = Price::from_raw(parse_fixed(f[1], kPriceDecimals));
            slots[*slot].peak = parse_flag(f[2]);
        }
        std::set<std::size_t> seen_cps;
        for (const auto& f : cps) {
            const auto slot = parse_slot(f[0]);
            if (!slot) {
                continue;
            }
            if (!slots.contains(*slot)) {
                problem("cps_cost.csv: slot " + f[0] + " missing from prices.csv");
                continue;
            }
            seen_cps.insert(*slot);
            SlotInfo& s = slots[*slot];
            if (parse_flag(f[1]) != s.peak) {
                problem("cps_cost.csv: peak flag disagrees with prices.csv at slot " + f[0]);
            }
            s.delivered = Energy::from_raw(parse_fixed(f[2], kEnergyDecimals));
            s.cps_cost = Money::from_raw(parse_fixed(f[3], kMoneyDecimals));
            s.excess_cost = Money::from_raw(parse_fixed(f[4], kMoneyDecimals));
        }
        if (seen_cps.size() != slots.size()) {
            problem("cps_cost.csv and prices.csv list different slots");
        }
        result.slots = slots.size();

        std::vector<ParsedTrade> trades;
        for (const auto& f : trade_rows) {
            const auto slot = parse_slot(f[0]);
            if (!slot) {
                continue;
            }
            trades.push_back(ParsedTrade{*slot, f[1], f[2], f[3], Energy::from_raw(parse_fixed(f[4], kEnergyDecimals)),
                                         Price::from_raw(parse_fixed(f[5], kPriceDecimals)),
                                         Price::from_raw(parse_fixed(f[6], kPriceDecimals))});
        }
        result.trades = trades.size();

        std::map<std::size_t, std::map<std::string, std::string>> members;  // slot -> id -> coalition
        for (const auto& f : coalitions) {
            const auto slot = parse_slot(f[0]);
            if (!slot) {
                continue;
            }
            if (f[1] != "1" && f[1] != "2") {
                problem("coalitions.csv: bad coalition '" + f[1] + "'");
            }
            if (!members[*slot].emplace(f[2], f[1]).second) {
                problem("coalitions.csv: " + f[2] + " listed twice at slot " + f[0]);
            }
            if (!slots.contains(*slot) || !slots[*slot].peak) {
                problem("coalitions.csv: coalitions at non-peak slot " + f[0]);
            }
        }

        std::map<std::size_t, Energy> grid_sold;
        std::map<std::size_t, std::set<std::int64_t>> auction_prices;
        std::map<std::size_t, std::map<std::string, int>> roles;  // +1 seller, -1 buyer
        std::map<std::size_t, std::map<std::string, Energy>> traded;
        Money payments;
        Money receipts;
        Money fees;
        for (const ParsedTrade& t : trades) {
            const std::string where = "trades.csv slot " + std::to_string(t.slot) + " " + t.seller + "->" + t.buyer;
            if (!slots.contains(t.slot)) {
                problem(where + ": slot missing from prices.csv");
                continue;
            }
            if (!(t.qty > Energy{})) {
                problem(where + ": non-positive quantity");
            }
            if (t.seller_price < Price{} || t.buyer_price < t.seller_price) {
                problem(where + ": buyer price below seller price");
            }
            const Money pay = cost_of(t.buyer_price, t.qty);
            const Money receive = cost_of(t.seller_price, t.qty);
            payments += pay;
            receipts += receive;
            fees += pay - receive;

            const bool seller_ext = external(t.seller);
            const bool buyer_ext = external(t.buyer);
            if (t.venue == "auction" || t.venue == "midmarket") {
                if (seller_ext || buyer_ext) {
                    problem(where + ": peer venue with an external party");
                }
                if (!slots[t.slot].peak) {
                    problem(where + ": peer trade at a non-peak slot");
                }
                if (t.venue == "auction") {
                    if (t.seller_price != t.buyer_price) {
                        problem(where + ": auction trade carries a fee");
                    }
                    auction_prices[t.slot].insert(t.seller_price.raw());
                }
                static const std::map<std::string, std::string> none;
                const auto it = members.find(t.slot);
                const auto& m = it == members.end() ? none : it->second;
                const std::string want = t.venue == "auction" ? "1" : "2";
                for (const std::string& id : {t.seller, t.buyer}) {
                    if (!m.contains(id) || m.at(id) != want) {
                        problem(where + ": " + id + " is not in coalition " + want);
                    }
                }
            } else if (t.venue == "grid") {
                if (seller_ext == buyer_ext || (t.seller != kGridId && t.buyer != kGridId)) {
                    problem(where + ": grid trade must have the grid on exactly one side");
                }
                if (t.seller_price != t.buyer_price) {
                    problem(where + ": grid trade carries a fee");
                }
                if (t.seller == kGridId) {
                    grid_sold[t.slot] += t.qty;
                    if (t.buyer_price != slots[t.slot].selling_price) {
                        problem(where + ": grid sale not at the announced price");
                    }
                }
            } else if (t.venue == "third_party") {
                if (t.seller != kThirdPartyId || buyer_ext) {
                    problem(where + ": third-party trade must sell to a prosumer");
                }
                if (t.seller_price != t.buyer_price) {
                    problem(where + ": third-party trade carries a fee");
                }
            } else {
                problem(where + ": unknown venue '" + t.venue + "'");
            }

            if (!seller_ext) {
                int& r = roles[t.slot][t.seller];
                if (r < 0) {
                    problem(where + ": " + t.seller + " both buys and sells");
                }
                r = 1;
                traded[t.slot][t.seller] += t.qty;
            }
            if (!buyer_ext) {
                int& r = roles[t.slot][t.buyer];
                if (r > 0) {
                    problem(where + ": " + t.buyer + " both buys and sells");
                }
                r = -1;
                traded[t.slot][t.buyer] += t.qty;
            }
        }
        if (payments != receipts + fees) {
            problem("cash does not balance");
        }
        for (const auto& [slot, set] : auction_prices) {
            if (set.size() > 1) {
                problem("trades.csv: more than one auction price at slot " + std::to_string(slot));
            }
        }

        for (const auto& [slot, info] : slots) {
            const Energy sold = grid_sold.contains(slot) ? grid_sold[slot] : Energy{};
            if (sold != info.delivered) {
                problem("cps_cost.csv: delivered demand at slot " + std::to_string(slot) +
                        " differs from grid sales in trades.csv");
            }
            if (info.peak && members.contains(slot) && !(info.cps_cost.is_zero() && info.excess_cost.is_zero())) {
                problem("cps_cost.csv: nonzero CPS cost at peer-to-peer peak slot " + std::to_string(slot));
            }
        }

        if (scenario) {
            if (slots.size() != scenario->slots) {
                problem("output covers " + std::to_string(slots.size()) + " slots, scenario has " +
                        std::to_string(scenario->slots));
            }
            for (const auto& [slot, info] : slots) {
                if (slot >= scenario->slots) {
                    continue;
                }
                const PriceSignal signal = decide_slot_price(*scenario, slot);
                const std::string at = " at slot " + std::to_string(slot);
                if (signal.selling_price != info.selling_price || signal.peak_flag != info.peak) {
                    problem("prices.csv: price signal differs from the leader's decision" + at);
                }
                const double e_t = signal.threshold.to_double();
                const double e_d = info.delivered.to_double();
                const Money expected = cents(cps_cost(scenario->grid.a, scenario->grid.b, e_d, e_t,
                                                      signal.selling_price.to_double()));
                if (expected != info.cps_cost) {
                    problem("cps_cost.csv: cost differs from the recomputed value" + at);
                }
                for (const ProsumerProfile& p : scenario->prosumers) {
                    const Energy need = abs(p.net_energy[slot]);
                    const auto& got_map = traded[slot];
                    const Energy got = got_map.contains(p.id) ? got_map.at(p.id) : Energy{};
                    if (got != need) {
                        problem("prosumer " + p.id + " traded " + energy(got) + " kWh of " + energy(need) + at);
                    }
                    if (got > Energy{}) {
                        const int role = roles[slot][p.id];
                        if ((role > 0) != p.is_seller(slot)) {
                            problem("prosumer " + p.id + " traded on the wrong side" + at);
                        }
                    }
                }
            }
        }
    } catch (const DomainError& e) {
        problem(e.what());
    }
    return result;
}

}  // namespace gridp2p
