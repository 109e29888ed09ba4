#include "codeclag/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "codeclag/errors.hpp"
#include "codeclag/parallel.hpp"
#include "codeclag/preprocess.hpp"
#include "codeclag/random.hpp"

namespace codeclag {

namespace {

constexpr std::array<Measure, 3> kMeasures = {Measure::pearson, Measure::spearman, Measure::codec};
constexpr std::array<Estimator, 3> kEstimators = {Estimator::p1, Estimator::p2, Estimator::p3};

std::optional<std::size_t> pick(const OrderEstimates& e, Estimator which) {
    switch (which) {
        case Estimator::p1: return e.p1;
        case Estimator::p2: return e.p2;
        case Estimator::p3: return e.p3;
    }
    return std::nullopt;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_list(std::string_view s, char sep = ',') {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        const std::string_view item = trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (!item.empty()) out.push_back(item);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view s, std::string_view what) {
    s = trim(s);
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorKind::InvalidInput, "cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

}  // namespace

std::string_view to_string(Preprocessing p) noexcept {
    switch (p) {
        case Preprocessing::raw: return "raw";
        case Preprocessing::differenced: return "differenced";
        case Preprocessing::decomposed: return "decomposed";
    }
    return "raw";
}

std::string_view to_string(Measure m) noexcept {
    switch (m) {
        case Measure::pearson: return "pearson";
        case Measure::spearman: return "spearman";
        case Measure::codec: return "codec";
    }
    return "codec";
}

std::string_view to_string(Estimator e) noexcept {
    switch (e) {
        case Estimator::p1: return "p1";
        case Estimator::p2: return "p2";
        case Estimator::p3: return "p3";
    }
    return "p1";
}

std::string_view to_string(AbsentPolicy a) noexcept { return a == AbsentPolicy::zero ? "zero" : "skip"; }

Preprocessing parse_preprocessing(std::string_view s) {
    if (s == "raw") return Preprocessing::raw;
    if (s == "differenced" || s == "diff") return Preprocessing::differenced;
    if (s == "decomposed" || s == "decompose") return Preprocessing::decomposed;
    throw Error(ErrorKind::InvalidInput, "unknown preprocessing '" + std::string(s) + "' (raw, diff, decompose)");
}

Measure parse_measure(std::string_view s) {
    if (s == "pearson") return Measure::pearson;
    if (s == "spearman") return Measure::spearman;
    if (s == "codec") return Measure::codec;
    throw Error(ErrorKind::InvalidInput, "unknown measure '" + std::string(s) + "' (codec, pearson, spearman)");
}

AbsentPolicy parse_absent_policy(std::string_view s) {
    if (s == "zero") return AbsentPolicy::zero;
    if (s == "skip") return AbsentPolicy::skip;
    throw Error(ErrorKind::InvalidInput, "unknown absent policy '" + std::string(s) + "' (zero, skip)");
}

void validate(const Scenario& scenario) {
    if (scenario.replications < 1) throw Error(ErrorKind::InvalidInput, "replications must be at least 1");
    if (scenario.sizes.empty()) throw Error(ErrorKind::InvalidInput, "scenario lists no sample sizes");
    if (scenario.measures.empty()) throw Error(ErrorKind::InvalidInput, "scenario lists no measures");
    for (std::size_t n : scenario.sizes) {
        if (n < 20) throw Error(ErrorKind::InvalidInput, "sample sizes must be at least 20");
    }
    if (scenario.preprocessing == Preprocessing::decomposed) {
        if (!scenario.spec.period) {
            throw Error(ErrorKind::InvalidInput, "model " + scenario.spec.name + " has no seasonal period to decompose");
        }
        for (std::size_t n : scenario.sizes) {
            if (n < 2 * *scenario.spec.period) {
                throw Error(ErrorKind::InvalidInput, "size " + std::to_string(n) + " is shorter than two periods of " +
                                                         scenario.spec.name);
            }
        }
    }
    if (!(scenario.alpha > 0.0 && scenario.alpha < 1.0)) throw Error(ErrorKind::InvalidInput, "alpha must lie in (0, 1)");
}

bool RmseReport::any_flagged() const {
    return std::any_of(health.begin(), health.end(), [](const auto& kv) { return kv.second.flagged; });
}

void RmseReport::merge(const RmseReport& other) {
    for (const auto& [k, v] : other.cells) cells[k] = v;
    for (const auto& [k, v] : other.distributions) distributions[k] = v;
    for (const auto& [k, v] : other.health) health[k] = v;
}

double rmse(std::span<const std::size_t> estimates, std::size_t true_p) {
    if (estimates.empty()) throw Error(ErrorKind::InsufficientData, "RMSE of an empty estimate set");
    double sum = 0.0;
    for (std::size_t e : estimates) {
        const double diff = static_cast<double>(e) - static_cast<double>(true_p);
        sum += diff * diff;
    }
    return std::sqrt(sum / static_cast<double>(estimates.size()));
}

OrderEstimates run_measure(const TimeSeries& series, Measure measure, std::uint64_t seed, double alpha) {
    switch (measure) {
        case Measure::pearson: return select_lags_pacf(series, CorrelationMethod::pearson, alpha);
        case Measure::spearman: return select_lags_pacf(series, CorrelationMethod::spearman, alpha);
        case Measure::codec: return estimate_order(select_lags_codec(series, seed));
    }
    return {};
}

TimeSeries apply_preprocessing(const TimeSeries& series, Preprocessing preprocessing) {
    switch (preprocessing) {
        case Preprocessing::raw: return series;
        case Preprocessing::differenced: return difference(series, 1);
        case Preprocessing::decomposed: {
            if (!series.period()) throw Error(ErrorKind::InvalidInput, "series has no period to decompose");
            return deseasonalize(series, *series.period());
        }
    }
    return series;
}

RmseReport run_scenario(const Scenario& scenario, std::size_t parallelism, const ProgressCallback& progress) {
    validate(scenario);
    const std::size_t reps = scenario.replications;
    const std::size_t units = scenario.sizes.size() * reps;

    struct UnitResult {
        bool failed = false;
        bool reseeded = false;
        std::vector<OrderEstimates> estimates;  // aligned with scenario.measures
    };
    std::vector<UnitResult> results(units);
    std::vector<std::atomic<std::size_t>> remaining(scenario.sizes.size());
    for (auto& r : remaining) r = reps;
    std::mutex progress_mutex;

    parallel_for(units, parallelism, [&](std::size_t u) {
        const std::size_t size_idx = u / reps;
        const std::size_t rep = u % reps;
        const std::size_t n = scenario.sizes[size_idx];
        UnitResult& out = results[u];

        std::uint64_t seed = scenario.base_seed + rep;
        std::optional<SimulationRun> run;
        try {
            run = simulate(scenario.spec, n, seed, scenario.simulation);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Diverged) throw;
            out.reseeded = true;
            seed = derive_seed(scenario.base_seed + rep, 1);
            try {
                run = simulate(scenario.spec, n, seed, scenario.simulation);
            } catch (const Error& again) {
                if (again.kind() != ErrorKind::Diverged) throw;
                out.failed = true;
            }
        }
        if (run) {
            const TimeSeries series = apply_preprocessing(run->series, scenario.preprocessing);
            for (Measure m : scenario.measures) {
                try {
                    out.estimates.push_back(run_measure(series, m, seed, scenario.alpha));
                } catch (const Error& e) {
                    if (!e.is_degenerate()) throw;
                    out.estimates.push_back(OrderEstimates{});
                }
            }
        }
        if (--remaining[size_idx] == 0 && progress) {
            const std::lock_guard lock(progress_mutex);
            progress("done " + scenario.spec.name + " " + std::string(to_string(scenario.preprocessing)) +
                     " n=" + std::to_string(n) + " (" + std::to_string(reps) + " replications)");
        }
    });

    RmseReport report;
    const std::string model = scenario.spec.name;
    const std::string prep(to_string(scenario.preprocessing));
    const std::size_t true_p = true_order(scenario.spec);
    for (std::size_t s = 0; s < scenario.sizes.size(); ++s) {
        const std::size_t n = scenario.sizes[s];
        GroupHealth health;
        health.replications = reps;
        for (std::size_t r = 0; r < reps; ++r) {
            const UnitResult& u = results[s * reps + r];
            health.reseeded += u.reseeded ? 1 : 0;
            health.failures += u.failed ? 1 : 0;
        }
        health.flagged = static_cast<double>(health.failures) > kFailureFlagShare * static_cast<double>(reps);
        report.health[GroupKey{model, prep, n}] = health;

        for (std::size_t mi = 0; mi < scenario.measures.size(); ++mi) {
            for (Estimator est : kEstimators) {
                const CellKey key{model, prep, n, std::string(to_string(scenario.measures[mi])),
                                  std::string(to_string(est))};
                std::vector<std::size_t> values;
                RmseCell cell;
                auto& dist = report.distributions[key];
                for (std::size_t r = 0; r < reps; ++r) {
                    const UnitResult& u = results[s * reps + r];
                    if (u.failed) continue;
                    ++cell.n_reps;
                    const std::optional<std::size_t> p = pick(u.estimates[mi], est);
                    if (!p) {
                        ++cell.n_absent;
                        ++dist[0];
                        if (scenario.absent == AbsentPolicy::zero) values.push_back(0);
                        continue;
                    }
                    ++dist[*p];
                    values.push_back(*p);
                }
                cell.rmse = values.empty() ? std::numeric_limits<double>::quiet_NaN() : rmse(values, true_p);
                report.cells[key] = cell;
            }
        }
    }
    return report;
}

std::string emit_report(const RmseReport& report, ReportFormat format) {
    if (format == ReportFormat::csv) {
        std::string out = "model,preprocessing,size,measure,estimator,rmse,n_reps,n_absent\n";
        for (const auto& [k, c] : report.cells) {
            out += k.model + ',' + k.preprocessing + ',' + std::to_string(k.size) + ',' + k.measure + ',' + k.estimator +
                   ',' + format_double(c.rmse) + ',' + std::to_string(c.n_reps) + ',' + std::to_string(c.n_absent) + '\n';
        }
        return out;
    }
    nlohmann::ordered_json doc;
    doc["schema"] = "codeclag-rmse-report/1";
    doc["cells"] = nlohmann::ordered_json::array();
    for (const auto& [k, c] : report.cells) {
        nlohmann::ordered_json cell;
        cell["model"] = k.model;
        cell["preprocessing"] = k.preprocessing;
        cell["size"] = k.size;
        cell["measure"] = k.measure;
        cell["estimator"] = k.estimator;
        cell["rmse"] = std::isfinite(c.rmse) ? nlohmann::ordered_json(c.rmse) : nlohmann::ordered_json(nullptr);
        cell["n_reps"] = c.n_reps;
        cell["n_absent"] = c.n_absent;
        if (const auto it = report.distributions.find(k); it != report.distributions.end()) {
            nlohmann::ordered_json dist = nlohmann::ordered_json::object();
            for (const auto& [value, count] : it->second) dist[std::to_string(value)] = count;
            cell["distribution"] = dist;
        }
        doc["cells"].push_back(cell);
    }
    doc["health"] = nlohmann::ordered_json::array();
    for (const auto& [k, h] : report.health) {
        doc["health"].push_back({{"model", k.model},
                                 {"preprocessing", k.preprocessing},
                                 {"size", k.size},
                                 {"replications", h.replications},
                                 {"reseeded", h.reseeded},
                                 {"failures", h.failures},
                                 {"flagged", h.flagged}});
    }
    return doc.dump(2) + "\n";
}

RmseReport parse_report(std::string_view text, ReportFormat format) {
    RmseReport report;
    if (format == ReportFormat::csv) {
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start < text.size()) {
            std::size_t nl = text.find('\n', start);
            if (nl == std::string_view::npos) nl = text.size();
            const std::string_view line = trim(text.substr(start, nl - start));
            start = nl + 1;
            ++line_no;
            if (line_no == 1 || line.empty()) continue;
            std::vector<std::string_view> f;
            std::size_t s = 0;
            while (true) {
                const std::size_t c = line.find(',', s);
                f.push_back(line.substr(s, c == std::string_view::npos ? c : c - s));
                if (c == std::string_view::npos) break;
                s = c + 1;
            }
            if (f.size() != 8) {
                throw Error(ErrorKind::ParseError, "report line " + std::to_string(line_no) + " needs 8 fields", line_no);
            }
            const CellKey key{std::string(f[0]), std::string(f[1]), parse_number<std::size_t>(f[2], "size"),
                              std::string(f[3]), std::string(f[4])};
            report.cells[key] = RmseCell{parse_number<double>(f[5], "rmse"), parse_number<std::size_t>(f[6], "n_reps"),
                                         parse_number<std::size_t>(f[7], "n_absent")};
        }
        return report;
    }
    const nlohmann::json doc = nlohmann::json::parse(text.begin(), text.end());
    for (const auto& c : doc.at("cells")) {
        const CellKey key{c.at("model").get<std::string>(), c.at("preprocessing").get<std::string>(),
                          c.at("size").get<std::size_t>(), c.at("measure").get<std::string>(),
                          c.at("estimator").get<std::string>()};
        const double value = c.at("rmse").is_null() ? std::numeric_limits<double>::quiet_NaN() : c.at("rmse").get<double>();
        report.cells[key] = RmseCell{value, c.at("n_reps").get<std::size_t>(), c.at("n_absent").get<std::size_t>()};
        if (c.contains("distribution")) {
            auto& dist = report.distributions[key];
            for (const auto& [value_text, count] : c.at("distribution").items()) {
                dist[parse_number<std::size_t>(value_text, "distribution key")] = count.get<std::size_t>();
            }
        }
    }
    if (doc.contains("health")) {
        for (const auto& h : doc.at("health")) {
            report.health[GroupKey{h.at("model").get<std::string>(), h.at("preprocessing").get<std::string>(),
                                   h.at("size").get<std::size_t>()}] =
                GroupHealth{h.at("replications").get<std::size_t>(), h.at("reseeded").get<std::size_t>(),
                            h.at("failures").get<std::size_t>(), h.at("flagged").get<bool>()};
        }
    }
    return report;
}

std::vector<Scenario> study_grid_scenarios(bool full_scale, std::uint64_t base_seed) {
    const std::vector<std::pair<ModelKind, Preprocessing>> columns = {
        {ModelKind::SARIMA_2_1_1x2_0_2_52, Preprocessing::raw},
        {ModelKind::SARIMA_2_1_1x2_0_2_52, Preprocessing::decomposed},
        {ModelKind::ARIMA_3_1_1, Preprocessing::differenced},
        {ModelKind::ARIMA_3_1_1, Preprocessing::raw},
        {ModelKind::ARMA_3_1, Preprocessing::raw},
        {ModelKind::NLARMA_2_2, Preprocessing::raw},
        {ModelKind::SETAR_2_2_2_1, Preprocessing::raw},
        {ModelKind::ARIMA_GARCH_1_1_1_1_1, Preprocessing::raw},
        {ModelKind::NLAR_4, Preprocessing::raw},
        {ModelKind::AR_8, Preprocessing::raw},
        {ModelKind::SARI_5_1_0x3_0_0_12, Preprocessing::raw},
        {ModelKind::SARI_5_1_0x3_0_0_12, Preprocessing::decomposed},
        {ModelKind::ARI_6_1_0, Preprocessing::differenced},
        {ModelKind::ARI_6_1_0, Preprocessing::raw},
    };
    std::vector<Scenario> out;
    for (const auto& [kind, prep] : columns) {
        Scenario s;
        s.spec = model_spec(kind);
        s.preprocessing = prep;
        s.base_seed = base_seed;
        if (full_scale) {
            s.sizes.assign(kStudySizes.begin(), kStudySizes.end());
            s.replications = kFullReplications;
        }
        if (prep == Preprocessing::decomposed) {
            // classical decomposition needs two full periods
            const std::size_t min_n = 2 * *s.spec.period;
            std::erase_if(s.sizes, [min_n](std::size_t n) { return n < min_n; });
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Scenario> parse_scenario_file(std::string_view text) {
    Scenario base;
    std::vector<std::string_view> models;
    std::vector<Preprocessing> preps = {Preprocessing::raw};
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        start = nl + 1;
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::ParseError, "scenario line " + std::to_string(line_no) + " is not key = value",
                        line_no);
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key == "model" || key == "models") {
            models = split_list(value);
        } else if (key == "preprocessing") {
            preps.clear();
            for (auto p : split_list(value)) preps.push_back(parse_preprocessing(p));
        } else if (key == "sizes") {
            base.sizes.clear();
            for (auto s : split_list(value)) base.sizes.push_back(parse_number<std::size_t>(s, "size"));
        } else if (key == "reps" || key == "replications") {
            base.replications = parse_number<std::size_t>(value, "reps");
        } else if (key == "measures") {
            base.measures.clear();
            for (auto m : split_list(value)) base.measures.push_back(parse_measure(m));
        } else if (key == "base_seed" || key == "seed") {
            base.base_seed = parse_number<std::uint64_t>(value, "base_seed");
        } else if (key == "burn_in") {
            base.simulation.burn_in = parse_number<std::size_t>(value, "burn_in");
        } else if (key == "alpha") {
            base.alpha = parse_number<double>(value, "alpha");
        } else if (key == "absent") {
            base.absent = parse_absent_policy(value);
        } else if (key == "garch_omega") {
            base.simulation.garch_omega = parse_number<double>(value, "garch_omega");
        } else if (key == "divergence_limit") {
            base.simulation.divergence_limit = parse_number<double>(value, "divergence_limit");
        } else {
            throw Error(ErrorKind::ParseError,
                        "unknown scenario key '" + std::string(key) + "' on line " + std::to_string(line_no), line_no);
        }
        if (start > text.size()) break;
    }
    if (models.empty()) throw Error(ErrorKind::InvalidInput, "scenario file names no model");
    std::vector<Scenario> out;
    for (auto m : models) {
        for (Preprocessing p : preps) {
            Scenario s = base;
            s.spec = parse_model(m);
            s.preprocessing = p;
            validate(s);
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::string describe_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "model=" << s.spec.name << " preprocessing=" << to_string(s.preprocessing) << " sizes=";
    for (std::size_t i = 0; i < s.sizes.size(); ++i) out << (i ? "," : "") << s.sizes[i];
    out << " reps=" << s.replications << " measures=";
    for (std::size_t i = 0; i < s.measures.size(); ++i) out << (i ? "," : "") << to_string(s.measures[i]);
    out << " base_seed=" << s.base_seed << " burn_in=" << s.simulation.burn_in << " alpha=" << format_double(s.alpha)
        << " absent=" << to_string(s.absent) << " garch_omega=" << format_double(s.simulation.garch_omega)
        << " divergence_limit=" << format_double(s.simulation.divergence_limit);
    return out.str();
}

std::string render_table(const RmseReport& report) {
    std::map<std::pair<std::string, std::string>, std::set<std::size_t>> blocks;
    std::set<std::string> measures_seen;
    for (const auto& [k, c] : report.cells) {
        blocks[{k.model, k.preprocessing}].insert(k.size);
        measures_seen.insert(k.measure);
    }
    std::vector<std::string> measures;
    for (Measure m : kMeasures) {
        if (measures_seen.count(std::string(to_string(m)))) measures.emplace_back(to_string(m));
    }

    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    for (const auto& [block, sizes] : blocks) {
        out << "== " << block.first << " (" << block.second << ")  true p = " << parse_model(block.first).true_p
            << "\n" << std::setw(6) << "size" << std::setw(5) << "est";
        for (const auto& m : measures) out << std::setw(10) << m;
        out << "\n";
        for (std::size_t n : sizes) {
            for (Estimator e : kEstimators) {
                out << std::setw(6) << n << std::setw(5) << to_string(e);
                for (const auto& m : measures) {
                    const auto it = report.cells.find(CellKey{block.first, block.second, n, m, std::string(to_string(e))});
                    if (it == report.cells.end()) {
                        out << std::setw(10) << "-";
                    } else {
                        out << std::setw(10) << it->second.rmse;
                    }
                }
                out << "\n";
            }
            if (const auto h = report.health.find(GroupKey{block.first, block.second, n});
                h != report.health.end() && h->second.failures > 0) {
                out << "      " << h->second.failures << "/" << h->second.replications << " replications diverged"
                    << (h->second.flagged ? " [FLAGGED]" : "") << "\n";
            }
        }
    }
    return out.str();
}

}  // namespace codeclag
