#include <gtest/gtest.h>

#include <cmath>

#include "codeclag/experiment.hpp"
#include "helpers.hpp"

using namespace codeclag;
using testing_helpers::kind_of;

namespace {

Scenario small(ModelKind kind, Preprocessing prep = Preprocessing::raw) {
    Scenario s;
    s.spec = model_spec(kind);
    s.preprocessing = prep;
    s.sizes = {100, 200};
    s.replications = 6;
    return s;
}

}  // namespace

TEST(Rmse, Examples) {
    EXPECT_EQ(rmse(std::vector<std::size_t>{4, 4, 4, 4}, 4), 0.0);
    EXPECT_EQ(rmse(std::vector<std::size_t>{2, 6}, 4), 2.0);
    EXPECT_EQ(rmse(std::vector<std::size_t>{0}, 4), 4.0);
    EXPECT_EQ(rmse(std::vector<std::size_t>{3, 5}, 4), 1.0);
    EXPECT_EQ(kind_of([] { (void)rmse(std::vector<std::size_t>{}, 4); }), ErrorKind::InsufficientData);
}

TEST(Scenario, Validation) {
    auto s = small(ModelKind::AR_8, Preprocessing::decomposed);
    EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::InvalidInput);
    s = small(ModelKind::SARIMA_2_1_1x2_0_2_52, Preprocessing::decomposed);
    s.sizes = {100};
    EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::InvalidInput);
    s.sizes = {104};
    validate(s);
    s.replications = 0;
    EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::InvalidInput);
}

TEST(RunScenario, CompleteCellsAndCounts) {
    const auto s = small(ModelKind::SETAR_2_2_2_1);
    const auto r = run_scenario(s, 1);
    EXPECT_EQ(r.cells.size(), 2u * 3u * 3u);
    for (const auto& [k, c] : r.cells) {
        EXPECT_EQ(c.n_reps, 6u);
        EXPECT_LE(c.n_absent, 6u);
        EXPECT_TRUE(std::isfinite(c.rmse));
        std::size_t total = 0;
        for (const auto& [value, count] : r.distributions.at(k)) total += count;
        EXPECT_EQ(total, 6u);
    }
    EXPECT_EQ(r.health.size(), 2u);
    EXPECT_FALSE(r.any_flagged());
}

TEST(RunScenario, ParallelismInvariant) {
    const auto s = small(ModelKind::NLAR_4);
    const auto a = run_scenario(s, 1);
    for (std::size_t w : {2u, 4u, 8u}) {
        const auto b = run_scenario(s, w);
        EXPECT_EQ(a.cells, b.cells);
        EXPECT_EQ(a.distributions, b.distributions);
        EXPECT_EQ(a.health, b.health);
    }
}

TEST(RunScenario, AbsentPolicies) {
    auto s = small(ModelKind::AR_8);
    s.measures = {Measure::codec};
    const auto zero = run_scenario(s, 1);
    s.absent = AbsentPolicy::skip;
    const auto skip = run_scenario(s, 1);
    for (const auto& [k, c] : zero.cells) {
        const auto& other = skip.cells.at(k);
        EXPECT_EQ(c.n_absent, other.n_absent);
        if (c.n_absent == 0) EXPECT_EQ(c.rmse, other.rmse);
        if (c.n_absent == c.n_reps) EXPECT_TRUE(std::isnan(other.rmse));
    }
}

TEST(RunScenario, DivergenceIsFlagged) {
    auto s = small(ModelKind::ARI_6_1_0);
    s.measures = {Measure::pearson};
    const auto r = run_scenario(s, 1);
    EXPECT_TRUE(r.any_flagged());
    for (const auto& [k, h] : r.health) {
        EXPECT_EQ(h.failures, 6u);
        EXPECT_EQ(h.reseeded, 6u);
    }
    for (const auto& [k, c] : r.cells) EXPECT_EQ(c.n_reps, 0u);
}

TEST(RunScenario, DifferencedAndDecomposedRun) {
    auto s = small(ModelKind::SARI_5_1_0x3_0_0_12, Preprocessing::decomposed);
    s.replications = 2;
    EXPECT_EQ(run_scenario(s, 1).cells.size(), 18u);
    s = small(ModelKind::ARIMA_3_1_1, Preprocessing::differenced);
    s.replications = 2;
    EXPECT_EQ(run_scenario(s, 1).cells.begin()->first.preprocessing, "differenced");
}

TEST(Report, CsvShapeAndRoundTrip) {
    RmseReport empty;
    EXPECT_EQ(emit_report(empty, ReportFormat::csv), "model,preprocessing,size,measure,estimator,rmse,n_reps,n_absent\n");

    RmseReport one;
    one.cells[CellKey{"ar8", "raw", 500, "codec", "p1"}] = RmseCell{5.25, 50, 2};
    const std::string csv = emit_report(one, ReportFormat::csv);
    const std::string row = csv.substr(csv.find('\n') + 1);
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 7);
    EXPECT_EQ(parse_report(csv, ReportFormat::csv).cells, one.cells);

    auto s = small(ModelKind::NLARMA_2_2);
    s.replications = 3;
    const auto r = run_scenario(s, 1);
    const auto back_csv = parse_report(emit_report(r, ReportFormat::csv), ReportFormat::csv);
    EXPECT_EQ(back_csv.cells, r.cells);
    const auto back_json = parse_report(emit_report(r, ReportFormat::json), ReportFormat::json);
    EXPECT_EQ(back_json.cells, r.cells);
    EXPECT_EQ(back_json.distributions, r.distributions);
    EXPECT_EQ(back_json.health, r.health);
}

TEST(Report, NanRmseSurvivesJson) {
    RmseReport r;
    r.cells[CellKey{"x", "raw", 100, "codec", "p3"}] = RmseCell{std::nan(""), 0, 0};
    const std::string json = emit_report(r, ReportFormat::json);
    EXPECT_NE(json.find("null"), std::string::npos);
    EXPECT_TRUE(std::isnan(parse_report(json, ReportFormat::json).cells.begin()->second.rmse));
}

TEST(StudyGrid, FourteenColumns) {
    const auto desk = study_grid_scenarios(false);
    ASSERT_EQ(desk.size(), 14u);
    EXPECT_EQ(desk.front().spec.name, "sarima");
    EXPECT_EQ(desk[1].preprocessing, Preprocessing::decomposed);
    EXPECT_EQ(desk.back().spec.name, "ari6");
    for (const auto& s : desk) {
        EXPECT_EQ(s.replications, kDeskReplications);
        if (s.spec.name == "sarima" && s.preprocessing == Preprocessing::decomposed) {
            EXPECT_EQ(s.sizes, (std::vector<std::size_t>{500, 1000, 2000}));
        } else {
            EXPECT_EQ(s.sizes, (std::vector<std::size_t>{100, 500, 1000, 2000}));
        }
        validate(s);
    }
    for (const auto& s : study_grid_scenarios(true)) {
        EXPECT_EQ(s.replications, kFullReplications);
        EXPECT_EQ(s.sizes.back(), 5000u);
    }
}

TEST(ScenarioFile, ParsesAndExpands) {
    const auto list = parse_scenario_file(
        "# comment\n"
        "model = sari, sarima\n"
        "preprocessing = raw, decomposed\n"
        "sizes = 200, 400  # trailing\n"
        "reps = 7\n"
        "measures = codec\n"
        "seed = 11\n"
        "absent = skip\n");
    ASSERT_EQ(list.size(), 4u);
    EXPECT_EQ(list[0].spec.name, "sari");
    EXPECT_EQ(list[1].preprocessing, Preprocessing::decomposed);
    EXPECT_EQ(list[3].spec.name, "sarima");
    EXPECT_EQ(list[0].sizes, (std::vector<std::size_t>{200, 400}));
    EXPECT_EQ(list[0].replications, 7u);
    EXPECT_EQ(list[0].base_seed, 11u);
    EXPECT_EQ(list[0].absent, AbsentPolicy::skip);
    EXPECT_EQ(list[0].measures, (std::vector<Measure>{Measure::codec}));
}

TEST(ScenarioFile, Errors) {
    EXPECT_EQ(kind_of([] { (void)parse_scenario_file("sizes = 100\n"); }), ErrorKind::InvalidInput);
    EXPECT_EQ(kind_of([] { (void)parse_scenario_file("model = ar8\ncolour = red\n"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { (void)parse_scenario_file("model = ar8\nreps\n"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { (void)parse_scenario_file("model = ar8\nreps = many\n"); }), ErrorKind::InvalidInput);
}

TEST(RenderTable, MentionsEveryMeasure) {
    auto s = small(ModelKind::ARMA_3_1);
    s.replications = 2;
    const std::string table = render_table(run_scenario(s, 1));
    for (const char* word : {"arma31", "pearson", "spearman", "codec", "p1", "p3"})
        EXPECT_NE(table.find(word), std::string::npos) << word;
}
