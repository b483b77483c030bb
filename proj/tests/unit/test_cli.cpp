#include "cli.hpp"

#include "eca/error.hpp"
#include "eca/png_io.hpp"
#include "eca/strips.hpp"
#include "eca/synthetic.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace eca {
namespace {

namespace fs = std::filesystem;

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "eca");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("eca_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }
    fs::path dir;
};

TEST_F(CliTest, InferPrintsJsonLine) {
    const auto s = render_synthetic(random_spec(SyntheticCase::Clean, {320, 240}, 1), 1, "one");
    write_png((dir / "one.png").string(), s.frame);
    const CliRun r = run_cli({"infer", (dir / "one.png").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["id"], "one");
    EXPECT_EQ(j["width"], 320);
    EXPECT_EQ(j["height"], 240);
    EXPECT_EQ(j["area"], "circle");
    EXPECT_NEAR(j["cx"].get<double>(), s.annotation.circle->cx, 3.0);
    EXPECT_NEAR(j["r"].get<double>(), s.annotation.circle->r, 3.0);
}

TEST_F(CliTest, MissingFileIsInputError) {
    const CliRun r = run_cli({"infer", (dir / "absent.png").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("absent.png"), std::string::npos);
}

TEST_F(CliTest, HelpAndUsageErrors) {
    EXPECT_EQ(run_cli({"--help"}).code, 0);
    EXPECT_EQ(run_cli({"infer", "--help"}).code, 0);
    EXPECT_EQ(run_cli({"infer", "--bogus", "x.png"}).code, 1);
    EXPECT_EQ(run_cli({"--set", "alpha=-1", "strips", "--height", "100"}).code, 1);
    EXPECT_EQ(run_cli({"--set", "nope=1", "strips", "--height", "100"}).code, 1);
}

TEST_F(CliTest, StripsMatchesLibrary) {
    const CliRun r = run_cli({"strips", "--height", "1080"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::string expect;
    for (int h : strip_heights(1080, 16, 8)) expect += std::to_string(h) + "\n";
    EXPECT_EQ(r.out, expect);
}

TEST_F(CliTest, SynthInferEvalCompose) {
    const std::string data = (dir / "data").string();
    ASSERT_EQ(run_cli({"synth", "--count", "4", "--out", data, "--width", "320", "--height", "240"}).code, 0);
    const std::string preds = (dir / "preds.jsonl").string();
    const CliRun inf = run_cli({"infer", data, "--out", preds});
    ASSERT_EQ(inf.code, 0) << inf.err;
    const std::string report = (dir / "report.json").string();
    const CliRun ev = run_cli({"--quiet", "eval", "--annotations", data, "--predictions", preds, "--report", report});
    ASSERT_EQ(ev.code, 0) << ev.err;
    EXPECT_NE(ev.out.find("| Method | Avg. err. (px) | Miss (%) | Bad Miss (%) |"), std::string::npos);
    std::ifstream in(report);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["samples"].size(), 4u);
    EXPECT_LT(j["avg_error_px"].get<double>(), 15.0);
}

TEST_F(CliTest, EvalReportsMismatchedIds) {
    const std::string data = (dir / "data").string();
    ASSERT_EQ(run_cli({"synth", "--count", "2", "--out", data, "--width", "96", "--height", "72"}).code, 0);
    const std::string preds = (dir / "p.jsonl").string();
    std::ofstream(preds) << R"({"id":"other","width":96,"height":72,"area":"full"})" << "\n";
    const CliRun ev = run_cli({"eval", "--annotations", data, "--predictions", preds});
    EXPECT_EQ(ev.code, 1);
    EXPECT_NE(ev.err.find("other"), std::string::npos);
}

TEST_F(CliTest, BenchReportsTimings) {
    const CliRun r = run_cli({"bench", "--frames", "3", "--width", "160", "--height", "120"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    for (const char* k : {"min_ms", "mean_ms", "p99_ms"}) {
        ASSERT_TRUE(j.contains(k)) << k;
        EXPECT_GE(j[k].get<double>(), 0.0);
    }
    EXPECT_LE(j["min_ms"].get<double>(), j["mean_ms"].get<double>());
}

TEST_F(CliTest, DebugScoresCsv) {
    const auto s = render_synthetic(random_spec(SyntheticCase::Clean, {96, 72}, 3), 3);
    write_png((dir / "f.png").string(), s.frame);
    const CliRun r = run_cli({"debug-scores", (dir / "f.png").string(), "--strip", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("row,x,score,best\n", 0), 0u);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 96);
}

TEST(Predictions, ParseAllLayouts) {
    const std::string line = R"({"id":"a","width":10,"height":8,"area":"circle","cx":4.5,"cy":3.5,"r":3,"score":0.5})";
    const std::string full = R"({"id":"b","width":10,"height":8,"area":"full"})";
    EXPECT_EQ(cli::parse_predictions(line + "\n" + full + "\n").size(), 2u);
    EXPECT_EQ(cli::parse_predictions("[" + line + "," + full + "]").size(), 2u);
    const auto one = cli::parse_predictions(line);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].dims, (FrameDims{10, 8}));
    ASSERT_FALSE(is_full_frame(one[0].area));
    EXPECT_EQ(std::get<CircularArea>(one[0].area).circle.cx, 4.5);
    const auto back = cli::parse_predictions(cli::prediction_to_json(one[0]));
    EXPECT_EQ(std::get<CircularArea>(back[0].area).circle.r, 3.0);
    EXPECT_THROW(cli::parse_predictions("{bad json"), InvalidInput);
    EXPECT_THROW(cli::parse_predictions(R"({"id":"x","area":"oval"})"), InvalidInput);
}

} // namespace
} // namespace eca
