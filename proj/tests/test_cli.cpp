#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "codeclag/cli.hpp"

using codeclag::cli::run;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "codeclag");
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "codeclag_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Cli, SelectBenchmarks) {
    const auto sun = nlohmann::json::parse(call({"select", "--benchmark", "sunspots"}).out);
    EXPECT_EQ(sun["p1"], 3);
    EXPECT_EQ(sun["h_max"], 15);
    EXPECT_EQ(sun["config"]["seed"], 1);
    EXPECT_EQ(sun["config"]["measure"], "codec");
    EXPECT_EQ(sun["version"], "0.1.0");
    EXPECT_EQ(nlohmann::json::parse(call({"select", "--benchmark", "lynx"}).out)["p1"], 4);
    const auto air = nlohmann::json::parse(call({"select", "--benchmark", "passengers", "--full-ranking"}).out);
    EXPECT_EQ(air["p1"], 12);
    EXPECT_EQ(air["p2"], 3);
    EXPECT_TRUE(air["p3"].is_null());
    EXPECT_EQ(air["full_ranking"].size(), 13u);
}

TEST(Cli, SelectPacfAndFileInput) {
    const auto path = scratch("series.csv");
    ASSERT_EQ(call({"simulate", "--model", "ar8", "--n", "300", "--seed", "2", "--out", path.string()}).code, 0);
    for (const char* m : {"pearson", "spearman", "codec"}) {
        for (const char* prep : {"raw", "diff"}) {
            const auto r = call({"select", path.string(), "--measure", m, "--preprocess", prep});
            ASSERT_EQ(r.code, 0) << r.err;
            const auto doc = nlohmann::json::parse(r.out);
            EXPECT_TRUE(doc.contains("ordered_lags"));
            EXPECT_TRUE(doc.contains("stop_index"));
            if (std::string(m) != "codec") EXPECT_TRUE(doc.contains("pacf"));
        }
    }
    const auto pacf = nlohmann::json::parse(call({"pacf", path.string(), "--max-lag", "5"}).out);
    EXPECT_EQ(pacf["pacf"].size(), 5u);
}

TEST(Cli, ExitCodes) {
    const auto path = scratch("constant.csv");
    {
        std::ofstream f(path);
        f << "value\n";
        for (int i = 0; i < 50; ++i) f << "3\n";
    }
    for (const char* m : {"codec", "pearson", "spearman"}) {
        const auto r = call({"select", path.string(), "--measure", m});
        EXPECT_EQ(r.code, 3) << m;
        EXPECT_NE(r.err.find("constant"), std::string::npos) << r.err;
        EXPECT_EQ(r.err.find("nan"), std::string::npos);
    }
    EXPECT_EQ(call({"select", "/nonexistent.csv"}).code, 2);
    EXPECT_EQ(call({"select", "--benchmark", "nope"}).code, 2);
    EXPECT_EQ(call({"select"}).code, 2);
    EXPECT_EQ(call({"select", "--benchmark", "lynx", "--measure", "kendall"}).code, 2);
    EXPECT_EQ(call({"bogus"}).code, 2);
    EXPECT_EQ(call({"--help"}).code, 0);
    const auto diverged = call({"simulate", "--model", "ari6", "--n", "500"});
    EXPECT_EQ(diverged.code, 5);
    EXPECT_NE(diverged.err.find("step"), std::string::npos);
}

TEST(Cli, SimulateIsDeterministicWithSidecar) {
    const auto a = scratch("a.csv");
    const auto b = scratch("b.csv");
    ASSERT_EQ(call({"simulate", "--model", "ar8", "--n", "100", "--seed", "1", "--out", a.string()}).code, 0);
    ASSERT_EQ(call({"simulate", "--model", "ar8", "--n", "100", "--seed", "1", "--out", b.string()}).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    const auto meta = nlohmann::json::parse(slurp(a.string() + ".meta.json"));
    EXPECT_EQ(meta["config"]["seed"], 1);
    EXPECT_EQ(meta["config"]["model"], "ar8");
    EXPECT_EQ(meta["config"]["burn_in"], 500);
    EXPECT_EQ(call({"simulate", "--model", "ar8", "--n", "100", "--seed", "1"}).out, slurp(a));
}

TEST(Cli, ExperimentWritesReports) {
    const auto scen = scratch("scenario.txt");
    {
        std::ofstream f(scen);
        f << "model = setar, nlar4\nsizes = 100\nreps = 3\n";
    }
    const auto prefix = scratch("exp").string();
    const auto r = call({"experiment", "--scenario", scen.string(), "--parallelism", "2", "--out", prefix});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("setar"), std::string::npos);
    const auto doc = nlohmann::json::parse(slurp(prefix + ".json"));
    EXPECT_EQ(doc["cells"].size(), 18u);
    EXPECT_EQ(doc["config"]["parallelism"], 2);
    const std::string csv = slurp(prefix + ".csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 19);

    EXPECT_EQ(call({"experiment"}).code, 2);
    EXPECT_EQ(call({"experiment", "--grid-desk", "--reps", "1", "--sizes", "200", "--measures", "pearson"}).code, 4);
}

TEST(Cli, Bench) {
    const auto r = call({"bench", "--op", "codec", "--sizes", "1000,2000", "--trials", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
    EXPECT_EQ(call({"bench", "--op", "sort"}).code, 2);
}
