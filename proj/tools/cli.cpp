#include "cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <optional>
#include <ostream>

#include "gridp2p/case_study.hpp"
#include "gridp2p/csv_report.hpp"
#include "gridp2p/engine.hpp"
#include "gridp2p/errors.hpp"
#include "gridp2p/metrics.hpp"
#include "gridp2p/scenario_io.hpp"

namespace gridp2p::cli {

namespace {

struct SimulateOptions {
    std::string scenario_path;
    std::string output_dir;
    std::string mode = "p2p";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> price_rule;
    unsigned jobs = 1;
};

struct FixtureOptions {
    std::uint64_t seed = 0;
    std::string out;
    std::size_t prosumers = CaseStudyOptions{}.prosumers;
    std::size_t sellers = CaseStudyOptions{}.sellers_per_slot;
};

struct AuditOptions {
    std::string dir;
    std::string scenario_path;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("gridp2p", sink);
    logger->set_pattern("[%l] %v");
    logger->set_level(spdlog::level::warn);
    if (const char* level = std::getenv("GRIDP2P_LOG")) {
        logger->set_level(spdlog::level::from_str(level));
    }
    return logger;
}

int simulate(const SimulateOptions& o, spdlog::logger& log, std::ostream& out) {
    Scenario scenario;
    if (!o.scenario_path.empty()) {
        scenario = load_scenario(o.scenario_path);
        if (o.seed) {
            scenario.seed = *o.seed;
        }
        log.info("loaded {} ({} prosumers, {} slots)", o.scenario_path, scenario.prosumers.size(), scenario.slots);
    } else if (o.seed) {
        scenario = make_case_study_scenario(*o.seed);
        log.info("generated the case-study scenario for seed {}", *o.seed);
    } else {
        throw ValidationError("--scenario", "either --scenario or --seed is required");
    }
    if (o.price_rule) {
        scenario.market.auction_price_rule = parse_price_rule(*o.price_rule);
    }

    const std::filesystem::path dir = o.output_dir;
    if (o.mode == "compare") {
        const SimulationReport p2p = run_horizon(scenario, o.jobs);
        const SimulationReport grid = baseline_grid_only(scenario, o.jobs);
        const SimulationReport tp = baseline_third_party(scenario, o.jobs);
        write_run_outputs(dir, p2p);
        write_summary(dir, compare(p2p, grid, tp));
        log.info("peak slots: {}, unstable: {}", p2p.aggregates.peak_slots, p2p.aggregates.unstable_slots);
    } else {
        RunMode mode = RunMode::P2P;
        if (o.mode == "grid-only") {
            mode = RunMode::GridOnly;
        } else if (o.mode == "third-party") {
            mode = RunMode::ThirdParty;
        }
        const SimulationReport report = run_mode(scenario, mode, o.jobs);
        write_run_outputs(dir, report);
        if (report.aggregates.unstable_slots > 0) {
            log.warn("{} peak slot(s) failed the stability check", report.aggregates.unstable_slots);
        }
    }
    out << "wrote " << dir.string() << "\n";
    return kOk;
}

int gen_fixture(const FixtureOptions& o, std::ostream& out) {
    CaseStudyOptions options;
    options.prosumers = o.prosumers;
    options.sellers_per_slot = o.sellers;
    save_scenario(make_case_study_scenario(o.seed, options), o.out);
    out << "wrote " << o.out << "\n";
    return kOk;
}

int audit(const AuditOptions& o, std::ostream& out) {
    std::optional<Scenario> scenario;
    if (!o.scenario_path.empty()) {
        scenario = load_scenario(o.scenario_path);
    }
    const AuditResult result = audit_directory(o.dir, scenario);
    for (const std::string& p : result.problems) {
        out << "FAIL " << p << "\n";
    }
    out << (result.ok() ? "ok" : "failed") << ": " << result.slots << " slots, " << result.trades << " trades, "
        << result.problems.size() << " problem(s)\n";
    return result.ok() ? kOk : kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto log = make_logger(err);

    CLI::App app{"Peer-to-peer energy trading simulator", "gridp2p"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario and write the CSV reports");
    simulate_cmd->add_option("--scenario", sim.scenario_path, "Scenario JSON file");
    simulate_cmd->add_option("--mode", sim.mode, "Run mode")
        ->check(CLI::IsMember({"p2p", "grid-only", "third-party", "compare"}));
    simulate_cmd->add_option("--out", sim.output_dir, "Output directory")->required();
    simulate_cmd->add_option("--seed", sim.seed, "Seed override; without --scenario, generates the case study");
    simulate_cmd->add_option("--price-rule", sim.price_rule, "Auction price rule")
        ->check(CLI::IsMember({"highest", "vickrey"}));
    simulate_cmd->add_option("--jobs", sim.jobs, "Worker threads for the slot loop")->check(CLI::PositiveNumber);

    FixtureOptions fix;
    auto* fixture_cmd = app.add_subcommand("gen-fixture", "Write the seeded case-study scenario");
    fixture_cmd->add_option("--seed", fix.seed, "Generator seed")->required();
    fixture_cmd->add_option("--out", fix.out, "Scenario file to write")->required();
    fixture_cmd->add_option("--prosumers", fix.prosumers, "Number of prosumers")->check(CLI::PositiveNumber);
    fixture_cmd->add_option("--sellers", fix.sellers, "Sellers per slot");

    AuditOptions aud;
    auto* audit_cmd = app.add_subcommand("audit", "Re-check an output directory");
    audit_cmd->add_option("--dir", aud.dir, "Output directory")->required();
    audit_cmd->add_option("--scenario", aud.scenario_path, "Scenario the outputs came from");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }

    try {
        if (*simulate_cmd) {
            return simulate(sim, *log, out);
        }
        if (*fixture_cmd) {
            return gen_fixture(fix, out);
        }
        return audit(aud, out);
    } catch (const ValidationError& e) {
        log->error("invalid input: {}", e.what());
        return kValidation;
    } catch (const ConfigurationError& e) {
        log->error("unusable configuration: {}", e.what());
        return kValidation;
    } catch (const IoError& e) {
        log->error("{}", e.what());
        return kIo;
    } catch (const std::exception& e) {
        log->error("{}", e.what());
        return kFailure;
    }
}

}  // namespace gridp2p::cli
