// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "codeclag/cli.hpp"
#include "codeclag/dependence.hpp"
#include "codeclag/errors.hpp"
#include "codeclag/experiment.hpp"
#include "codeclag/ingest.hpp"
#include "codeclag/lagselect.hpp"
#include "codeclag/pacf.hpp"
#include "codeclag/parallel.hpp"
#include "codeclag/random.hpp"
#include "oracle.hpp"

using namespace codeclag;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string fmt(double v, int digits = 3) {
    std::ostringstream os;
    os.precision(digits);
    os << std::fixed << v;
    return os.str();
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// 1 -----------------------------------------------------------------------

Outcome benchmark_goldens() {
    const auto start = Clock::now();
    struct Case {
        std::string name;
        std::vector<std::size_t> expected;  // sorted selected set
        std::size_t p1;
    };
    const std::vector<Case> cases = {{"sunspots", {1, 2, 3}, 3}, {"lynx", {1, 2, 3, 4}, 4}, {"passengers", {3, 12}, 12}};
    bool pass = true;
    std::string detail;
    for (const Case& c : cases) {
        const TimeSeries s = load_benchmark(c.name);
        auto sel = select_lags_codec(s, 1).selected();
        std::sort(sel.begin(), sel.end());
        const bool default_ok = sel == c.expected && order_from_lags(sel).p1 == c.p1;
        std::size_t hits = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            auto v = select_lags_codec(s, seed).selected();
            std::sort(v.begin(), v.end());
            hits += v == c.expected ? 1 : 0;
        }
        pass = pass && default_ok && hits >= 16;
        detail += c.name + " default=" + (default_ok ? "ok" : "MISMATCH") + " seeds " + std::to_string(hits) + "/20; ";
    }
    const double elapsed = seconds_since(start);
    pass = pass && elapsed < 5.0;
    detail += "runtime " + fmt(elapsed) + " s (< 5)";
    return {pass, detail};
}

// 2 -----------------------------------------------------------------------

Eigen::MatrixXd to_matrix(const oracle::Points& pts) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(pts[0].size()));
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t k = 0; k < pts[i].size(); ++k)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = pts[i][k];
    return m;
}

Outcome oracle_equivalence() {
    Rng rng = make_rng({20240601});
    std::uniform_int_distribution<std::size_t> size(3, 12);
    std::uniform_int_distribution<std::size_t> dim(1, 3);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> grid(0, 3);
    std::normal_distribution<double> gauss;
    std::size_t mismatches = 0;
    std::size_t compared = 0;
    std::size_t degenerate = 0;
    for (int instance = 0; instance < 500; ++instance) {
        const std::size_t n = size(rng);
        const std::size_t dz = dim(rng);
        const std::size_t dx = dim(rng);
        const bool ties = coin(rng) == 1;
        auto draw = [&] { return ties ? static_cast<double>(grid(rng)) : gauss(rng); };
        std::vector<double> y(n);
        oracle::Points z(n, std::vector<double>(dz));
        oracle::Points x(n, std::vector<double>(dx));
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = draw();
            for (double& v : z[i]) v = draw();
            for (double& v : x[i]) v = draw();
        }
        const auto seed = static_cast<std::uint64_t>(instance);
        oracle::Points joint(n);
        for (std::size_t i = 0; i < n; ++i) {
            joint[i] = x[i];
            joint[i].insert(joint[i].end(), z[i].begin(), z[i].end());
        }
        const auto ru = oracle::unconditional(y, oracle::nearest(z, seed));
        const auto rc = oracle::conditional(y, oracle::nearest(x, derive_seed(seed, 0)),
                                            oracle::nearest(joint, derive_seed(seed, 1)));
        auto check = [&](const oracle::Ratio& ref, const std::function<DependenceEstimate()>& fast, ErrorKind when_zero) {
            ++compared;
            try {
                const DependenceEstimate e = fast();
                const bool same = ref.den != 0 && e.numerator == static_cast<double>(ref.num) &&
                                  e.denominator == static_cast<double>(ref.den) &&
                                  std::abs(e.value - static_cast<double>(ref.num) / static_cast<double>(ref.den)) <= 1e-12;
                mismatches += same ? 0 : 1;
            } catch (const Error& err) {
                ++degenerate;
                mismatches += ref.den == 0 && err.kind() == when_zero ? 0 : 1;
            }
        };
        check(ru, [&] { return codec_unconditional(y, to_matrix(z), seed); }, ErrorKind::DegenerateResponse);
        check(rc, [&] { return codec_conditional(y, to_matrix(z), to_matrix(x), seed); },
              ErrorKind::DegenerateConditioning);
    }
    return {mismatches == 0, std::to_string(compared) + " evaluations over 500 instances, " +
                                 std::to_string(mismatches) + " mismatches (" + std::to_string(degenerate) +
                                 " agreed degenerate)"};
}

// 3 -----------------------------------------------------------------------

Outcome xi_identities() {
    double worst = 0.0;
    for (std::size_t n : {2u + 1u, 4u, 10u, 101u, 5000u}) {
        std::vector<double> x(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(i) * 0.5;
            y[i] = std::log1p(static_cast<double>(i));
        }
        const double v = xi_coefficient(x, y, 1).value;
        worst = std::max(worst, std::abs(v - (1.0 - 3.0 / (static_cast<double>(n) + 1.0))));
    }
    const double hand = xi_coefficient(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}, 1).value;
    return {worst <= 1e-12 && hand == 0.0,
            "max |xi - (1 - 3/(n+1))| = " + sci(worst) + ", n=4 example = " + sci(hand)};
}

// 4 -----------------------------------------------------------------------

Outcome desk_grid_cells() {
    const auto start = Clock::now();
    const std::size_t workers = default_parallelism();
    auto cell_rmse = [&](ModelKind kind, std::size_t n) {
        Scenario s;
        s.spec = model_spec(kind);
        s.sizes = {n};
        s.replications = kDeskReplications;
        const RmseReport r = run_scenario(s, workers);
        std::map<std::string, double> out;
        for (const auto& [k, c] : r.cells) out[k.measure + "/" + k.estimator] = c.rmse;
        return out;
    };
    const auto nlar4 = cell_rmse(ModelKind::NLAR_4, 2000);
    const auto nlarma = cell_rmse(ModelKind::NLARMA_2_2, 500);
    const auto ar8 = cell_rmse(ModelKind::AR_8, 500);
    const auto setar = cell_rmse(ModelKind::SETAR_2_2_2_1, 2000);

    const bool a = nlar4.at("codec/p1") < 2.0 && nlar4.at("codec/p1") < 0.5 * nlar4.at("pearson/p1") &&
                   nlar4.at("codec/p1") < 0.5 * nlar4.at("spearman/p1");
    const bool b = nlarma.at("codec/p1") < 3.0 && nlarma.at("codec/p1") < nlarma.at("pearson/p1") &&
                   nlarma.at("codec/p1") < nlarma.at("spearman/p1");
    const bool c = ar8.at("pearson/p1") < ar8.at("codec/p1");
    const bool d = setar.at("codec/p2") < 3.0;
    auto mark = [](bool ok) { return ok ? "ok" : "FAIL"; };
    const std::string detail =
        std::string("NLAR4 n=2000 codec/p1 ") + fmt(nlar4.at("codec/p1"), 2) + " vs pearson " +
        fmt(nlar4.at("pearson/p1"), 2) + " spearman " + fmt(nlar4.at("spearman/p1"), 2) + " [" + mark(a) +
        "]; NLARMA n=500 codec/p1 " + fmt(nlarma.at("codec/p1"), 2) + " vs pearson " + fmt(nlarma.at("pearson/p1"), 2) +
        " spearman " + fmt(nlarma.at("spearman/p1"), 2) + " [" + mark(b) + "]; AR8 n=500 pearson/p1 " +
        fmt(ar8.at("pearson/p1"), 2) + " vs codec " + fmt(ar8.at("codec/p1"), 2) + " [" + mark(c) +
        "]; SETAR n=2000 codec/p2 " + fmt(setar.at("codec/p2"), 2) + " [" + mark(d) + "]; 50 reps, " +
        fmt(seconds_since(start), 1) + " s";
    return {a && b && c && d, detail};
}

// 5 -----------------------------------------------------------------------

Outcome pacf_analytic() {
    double worst = 0.0;
    for (double phi : {0.5, -0.8, 0.99}) {
        std::vector<double> acf(30);
        for (std::size_t k = 0; k < acf.size(); ++k) acf[k] = std::pow(phi, static_cast<double>(k + 1));
        const auto p = pacf_durbin_levinson(acf);
        worst = std::max(worst, std::abs(p[0] - phi));
        for (std::size_t k = 1; k < p.size(); ++k) worst = std::max(worst, std::abs(p[k]));
    }
    return {worst <= 1e-10, "phi in {0.5, -0.8, 0.99}, 30 lags, max deviation " + sci(worst)};
}

// 6 -----------------------------------------------------------------------

Outcome schwert_values() {
    const std::vector<std::size_t> n = {100, 500, 1000, 2000, 5000};
    const std::vector<std::size_t> expected = {12, 17, 21, 25, 31};
    std::string got;
    bool pass = true;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const std::size_t h = schwert_max_lag(n[i]);
        pass = pass && h == expected[i];
        got += (i ? "," : "") + std::to_string(h);
    }
    return {pass, "h* = {" + got + "}"};
}

// 7 -----------------------------------------------------------------------

double median_xi_seconds(std::size_t n) {
    Rng rng = make_rng({7, n});
    std::uniform_real_distribution<double> u;
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = u(rng);
        y[i] = std::sin(6.0 * x[i]) + 0.1 * u(rng);
    }
    std::vector<double> times;
    double sink = 0.0;
    for (int t = 0; t < 7; ++t) {
        const auto start = Clock::now();
        sink += xi_coefficient(x, y, static_cast<std::uint64_t>(t)).value;
        times.push_back(seconds_since(start));
    }
    if (!std::isfinite(sink)) return -1.0;
    std::sort(times.begin(), times.end());
    return times[3];
}

Outcome xi_scaling() {
    (void)median_xi_seconds(100000);  // warm-up
    const double small = median_xi_seconds(100000);
    const double large = median_xi_seconds(200000);
    const double ratio = large / small;
    return {small > 0 && ratio < 2.6, "median of 7: n=1e5 " + fmt(small * 1e3, 2) + " ms, n=2e5 " +
                                          fmt(large * 1e3, 2) + " ms, ratio " + fmt(ratio, 3) + " (< 2.6)"};
}

// 8 -----------------------------------------------------------------------

Outcome determinism() {
    bool pass = true;
    std::string detail;
    for (ModelKind kind : {ModelKind::SETAR_2_2_2_1, ModelKind::ARIMA_GARCH_1_1_1_1_1}) {
        Scenario s;
        s.spec = model_spec(kind);
        s.sizes = {200, 500};
        s.replications = 12;
        const RmseReport base = run_scenario(s, 1);
        for (std::size_t workers : {4u, 8u}) {
            const RmseReport other = run_scenario(s, workers);
            const bool same = other.cells == base.cells && other.distributions == base.distributions &&
                              other.health == base.health;
            pass = pass && same;
            detail += s.spec.name + "@" + std::to_string(workers) + (same ? " identical; " : " DIFFERS; ");
        }
    }
    return {pass, detail + "baseline 1 worker"};
}

// 9 -----------------------------------------------------------------------

Outcome degenerate_handling() {
    bool pass = true;
    std::string detail;
    const TimeSeries constant(std::vector<double>(60, 4.25));
    for (Measure m : {Measure::pearson, Measure::spearman, Measure::codec}) {
        std::string kind = "none";
        try {
            (void)run_measure(constant, m, 1, kDefaultAlpha);
        } catch (const Error& e) {
            kind = std::string(to_string(e.kind()));
        }
        const bool kind_ok = kind == (m == Measure::codec ? "DegenerateResponse" : "DegenerateSeries");

        const std::string path = "/tmp/codeclag_acceptance_constant.csv";
        if (std::FILE* f = std::fopen(path.c_str(), "w")) {
            std::fputs("value\n", f);
            for (int i = 0; i < 60; ++i) std::fputs("4.25\n", f);
            std::fclose(f);
        }
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run({"codeclag", "select", path, "--measure", std::string(to_string(m))}, out, err);
        const bool no_nan = (out.str() + err.str()).find("nan") == std::string::npos;
        const bool ok = kind_ok && code == 3 && no_nan;
        pass = pass && ok;
        detail += std::string(to_string(m)) + ": " + kind + ", exit " + std::to_string(code) + (ok ? "; " : " FAIL; ");
    }
    return {pass, detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"benchmark golden results", benchmark_goldens},
        {"CODEC fast path equals brute-force oracle", oracle_equivalence},
        {"xi identities", xi_identities},
        {"desk-scale RMSE table cells", desk_grid_cells},
        {"Durbin-Levinson on AR(1) autocorrelations", pacf_analytic},
        {"Schwert maximum lag", schwert_values},
        {"xi runtime scaling", xi_scaling},
        {"parallelism-invariant experiment cells", determinism},
        {"constant series handling", degenerate_handling},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first
                  << "  (" << o.detail << ")" << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
