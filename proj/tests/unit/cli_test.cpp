#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "gridp2p/case_study.hpp"
#include "gridp2p/scenario_io.hpp"

namespace gridp2p {
namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        root_ = fs::temp_directory_path() /
                (std::string("gridp2p_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(root_);
        fs::create_directories(root_);
    }
    void TearDown() override { fs::remove_all(root_); }
    std::string path(const std::string& name) const { return (root_ / name).string(); }

    fs::path root_;
};

TEST_F(CliTest, GenFixtureMatchesTheGenerator) {
    const Outcome r = run({"gen-fixture", "--seed", "42", "--out", path("case12.json")});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_EQ(load_scenario(path("case12.json")), make_case_study_scenario(42));
}

TEST_F(CliTest, CompareWritesFiveFiles) {
    ASSERT_EQ(run({"gen-fixture", "--seed", "42", "--out", path("case12.json")}).code, cli::kOk);
    const Outcome r =
        run({"simulate", "--scenario", path("case12.json"), "--mode", "compare", "--out", path("run1")});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(path("run1"))) {
        names.push_back(e.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    EXPECT_EQ(names, (std::vector<std::string>{"coalitions.csv", "cps_cost.csv", "prices.csv", "summary.csv",
                                               "trades.csv"}));
}

TEST_F(CliTest, SimulateIsByteIdenticalAndLeavesTheInputAlone) {
    ASSERT_EQ(run({"gen-fixture", "--seed", "9", "--out", path("s.json")}).code, cli::kOk);
    const std::string before = read(path("s.json"));
    ASSERT_EQ(run({"simulate", "--scenario", path("s.json"), "--mode", "compare", "--out", path("a")}).code, 0);
    ASSERT_EQ(run({"simulate", "--scenario", path("s.json"), "--mode", "compare", "--out", path("b"), "--jobs", "4"})
                  .code,
              0);
    for (const char* f : {"prices.csv", "cps_cost.csv", "coalitions.csv", "trades.csv", "summary.csv"}) {
        EXPECT_EQ(read(root_ / "a" / f), read(root_ / "b" / f)) << f;
    }
    EXPECT_EQ(read(path("s.json")), before);
}

TEST_F(CliTest, SeedAloneGeneratesTheCaseStudy) {
    ASSERT_EQ(run({"gen-fixture", "--seed", "5", "--out", path("s.json")}).code, cli::kOk);
    ASSERT_EQ(run({"simulate", "--seed", "5", "--out", path("a")}).code, cli::kOk);
    ASSERT_EQ(run({"simulate", "--scenario", path("s.json"), "--out", path("b")}).code, cli::kOk);
    EXPECT_EQ(read(root_ / "a" / "trades.csv"), read(root_ / "b" / "trades.csv"));
}

TEST_F(CliTest, EveryModeAudits) {
    ASSERT_EQ(run({"gen-fixture", "--seed", "3", "--out", path("s.json")}).code, cli::kOk);
    for (const char* mode : {"p2p", "grid-only", "third-party", "compare"}) {
        const std::string dir = path(std::string("out_") + mode);
        ASSERT_EQ(run({"simulate", "--scenario", path("s.json"), "--mode", mode, "--out", dir}).code, cli::kOk);
        const Outcome a = run({"audit", "--dir", dir, "--scenario", path("s.json")});
        EXPECT_EQ(a.code, cli::kOk) << mode << "\n" << a.out;
        EXPECT_NE(a.out.find("ok: 22 slots"), std::string::npos) << a.out;
    }
}

TEST_F(CliTest, AuditReportsTampering) {
    ASSERT_EQ(run({"simulate", "--seed", "3", "--out", path("o")}).code, cli::kOk);
    std::ofstream(path("o/prices.csv")) << "slot,selling_price,peak_flag\n0,1.000000,0\n";
    const Outcome a = run({"audit", "--dir", path("o")});
    EXPECT_EQ(a.code, cli::kFailure);
    EXPECT_NE(a.out.find("FAIL "), std::string::npos);
}

TEST_F(CliTest, PriceRuleOverride) {
    ASSERT_EQ(run({"simulate", "--seed", "3", "--out", path("h")}).code, cli::kOk);
    ASSERT_EQ(run({"simulate", "--seed", "3", "--price-rule", "vickrey", "--out", path("v")}).code, cli::kOk);
    EXPECT_NE(read(root_ / "h" / "trades.csv"), read(root_ / "v" / "trades.csv"));
}

TEST_F(CliTest, ValidationErrorsExitWithTwo) {
    std::ofstream(path("bad.json")) << R"({"slots": 1})";
    EXPECT_EQ(run({"simulate", "--scenario", path("bad.json"), "--out", path("o")}).code, cli::kValidation);
    EXPECT_EQ(run({"simulate", "--out", path("o")}).code, cli::kValidation);
    EXPECT_EQ(run({"simulate", "--seed", "1", "--mode", "sideways", "--out", path("o")}).code, cli::kValidation);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kValidation);
    EXPECT_EQ(run({}).code, cli::kValidation);

    Scenario s = make_case_study_scenario(1);
    s.market.beta = -0.1;
    save_scenario(s, path("beta.json"));
    const Outcome r = run({"simulate", "--scenario", path("beta.json"), "--out", path("o")});
    EXPECT_EQ(r.code, cli::kValidation);
    EXPECT_NE(r.err.find("market.beta"), std::string::npos) << r.err;
}

TEST_F(CliTest, ConfigurationErrorsExitWithTwo) {
    Scenario s = testing::single_slot({{"b", -5, 14}}, 0.1, 0.01, 20.0);
    s.prosumers[0].alpha = {40.0};
    save_scenario(s, path("weak.json"));
    const Outcome r = run({"simulate", "--scenario", path("weak.json"), "--out", path("o")});
    EXPECT_EQ(r.code, cli::kValidation);
    EXPECT_NE(r.err.find("slot 0"), std::string::npos) << r.err;
}

TEST_F(CliTest, IoErrorsExitWithThree) {
    EXPECT_EQ(run({"simulate", "--scenario", path("missing.json"), "--out", path("o")}).code, cli::kIo);
    EXPECT_EQ(run({"audit", "--dir", path("nowhere")}).code, cli::kIo);
    std::ofstream(path("file")) << "x";
    EXPECT_EQ(run({"simulate", "--seed", "1", "--out", path("file")}).code, cli::kIo);
    EXPECT_EQ(run({"gen-fixture", "--seed", "1", "--out", path("file/s.json")}).code, cli::kIo);
}

TEST_F(CliTest, HelpExitsCleanly) {
    const Outcome r = run({"--help"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

}  // namespace
}  // namespace gridp2p
