#include "codeclag/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "codeclag/dependence.hpp"
#include "codeclag/errors.hpp"
#include "codeclag/experiment.hpp"
#include "codeclag/ingest.hpp"
#include "codeclag/lagselect.hpp"
#include "codeclag/pacf.hpp"
#include "codeclag/parallel.hpp"
#include "codeclag/preprocess.hpp"
#include "codeclag/random.hpp"
#include "codeclag/simulate.hpp"
#include "codeclag/version.hpp"

namespace codeclag::cli {

namespace {

using Json = nlohmann::ordered_json;

struct InputOptions {
    std::string path;
    std::string benchmark;
    std::string column = "value";
    std::optional<std::size_t> period;
    bool log = false;
    std::string preprocess = "raw";
};

void add_input_options(CLI::App& cmd, InputOptions& in) {
    cmd.add_option("input", in.path, "CSV file with a header row");
    cmd.add_option("--benchmark", in.benchmark, "Bundled dataset: sunspots, lynx or passengers");
    cmd.add_option("--column", in.column, "Value column of the input CSV")->capture_default_str();
    cmd.add_option("--period", in.period, "Seasonal period of the input series");
    cmd.add_flag("--log", in.log, "Apply a natural log before selection");
    cmd.add_option("--preprocess", in.preprocess, "raw, diff or decompose")->capture_default_str();
}

Json input_config(const InputOptions& in) {
    Json j;
    j["input"] = in.path.empty() ? Json(nullptr) : Json(in.path);
    j["benchmark"] = in.benchmark.empty() ? Json(nullptr) : Json(in.benchmark);
    j["column"] = in.column;
    j["period"] = in.period ? Json(*in.period) : Json(nullptr);
    j["log"] = in.log;
    j["preprocess"] = std::string(to_string(parse_preprocessing(in.preprocess)));
    return j;
}

TimeSeries load_input(InputOptions& in) {
    if (in.path.empty() == in.benchmark.empty()) {
        throw Error(ErrorKind::InvalidInput, "give exactly one of an input CSV path or --benchmark");
    }
    TimeSeries series = in.benchmark.empty() ? load_series_csv(in.path, in.column, in.period)
                                             : load_benchmark(in.benchmark);
    if (!in.period) in.period = series.period();
    if (in.log) {
        std::vector<double> v(series.values().begin(), series.values().end());
        for (double& x : v) {
            if (!(x > 0.0)) throw Error(ErrorKind::InvalidInput, "--log needs strictly positive values");
            x = std::log(x);
        }
        series = TimeSeries(std::move(v), series.period(), series.label());
    }
    if (in.period && series.period() != in.period) {
        series = TimeSeries(std::vector<double>(series.values().begin(), series.values().end()), in.period,
                            series.label());
    }
    return apply_preprocessing(series, parse_preprocessing(in.preprocess));
}

Json optional_json(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

Json header(std::string_view command) {
    Json j;
    j["tool"] = "codeclag";
    j["version"] = kVersion;
    j["command"] = command;
    return j;
}

void write_document(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
    f << text;
}

// CSV outputs carry their metadata in a <path>.meta.json sidecar.
void write_sidecar(const Json& meta, const std::string& path) {
    if (path.empty()) return;
    std::ofstream f(path + ".meta.json", std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + ".meta.json'");
    f << meta.dump(2) << "\n";
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(item, &pos);
            if (pos != item.size() || v < 1 || v != std::floor(v)) throw std::invalid_argument(item);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidInput, "cannot parse size '" + item + "'");
        }
    }
    if (out.empty()) throw Error(ErrorKind::InvalidInput, "no sizes given");
    return out;
}

// ---- select ---------------------------------------------------------------

struct SelectOptions {
    InputOptions input;
    std::string measure = "codec";
    std::uint64_t seed = 1;
    bool full_ranking = false;
    double alpha = kDefaultAlpha;
    std::size_t parallelism = 1;
    std::string out;
};

int cmd_select(SelectOptions& o, std::ostream& out) {
    const Measure measure = parse_measure(o.measure);
    const TimeSeries series = load_input(o.input);

    Json doc = header("select");
    Json config = input_config(o.input);
    config["measure"] = std::string(to_string(measure));
    config["seed"] = o.seed;
    config["full_ranking"] = o.full_ranking;
    config["alpha"] = o.alpha;
    config["parallelism"] = o.parallelism;
    doc["config"] = config;
    doc["series"] = {{"label", series.label()}, {"length", series.size()}};

    OrderEstimates order;
    if (measure == Measure::codec) {
        const FociResult r = select_lags_codec(series, o.seed, FociOptions{o.full_ranking, o.parallelism});
        order = estimate_order(r);
        doc["h_max"] = r.h_max;
        doc["ordered_lags"] = r.ordered_lags;
        doc["step_estimates"] = r.step_estimates;
        doc["stop_index"] = r.stop_index;
        doc["selected"] = r.selected();
        if (r.full_ranking) {
            doc["full_ranking"] = *r.full_ranking;
            doc["full_estimates"] = *r.full_estimates;
        }
    } else {
        const auto method = measure == Measure::pearson ? CorrelationMethod::pearson : CorrelationMethod::spearman;
        const PacfSelection sel = select_lags_pacf_detailed(series, method, o.alpha);
        order = sel.order;
        std::vector<double> values;
        for (std::size_t k : sel.significant) values.push_back(sel.pacf.pacf[k - 1]);
        doc["h_max"] = sel.pacf.pacf.size();
        doc["ordered_lags"] = sel.significant;
        doc["step_estimates"] = values;
        doc["stop_index"] = sel.significant.size();
        doc["selected"] = sel.significant;
        doc["pacf"] = sel.pacf.pacf;
        doc["threshold"] = sel.pacf.threshold;
    }
    doc["p1"] = optional_json(order.p1);
    doc["p2"] = optional_json(order.p2);
    doc["p3"] = optional_json(order.p3);
    write_document(doc.dump(2) + "\n", o.out, out);
    return kOk;
}

// ---- pacf -----------------------------------------------------------------

struct PacfOptions {
    InputOptions input;
    std::string method = "pearson";
    std::optional<std::size_t> max_lag;
    double alpha = kDefaultAlpha;
    std::string out;
};

int cmd_pacf(PacfOptions& o, std::ostream& out) {
    const CorrelationMethod method = [&] {
        if (o.method == "pearson") return CorrelationMethod::pearson;
        if (o.method == "spearman") return CorrelationMethod::spearman;
        throw Error(ErrorKind::InvalidInput, "unknown method '" + o.method + "' (pearson, spearman)");
    }();
    const TimeSeries series = load_input(o.input);
    const std::size_t max_lag = o.max_lag.value_or(schwert_max_lag(series.size()));
    const PacfResult r = compute_pacf(series, max_lag, method, o.alpha);

    Json doc = header("pacf");
    Json config = input_config(o.input);
    config["method"] = std::string(to_string(method));
    config["max_lag"] = max_lag;
    config["alpha"] = o.alpha;
    doc["config"] = config;
    const std::vector<double> acf = autocorrelation(series, max_lag, method);
    doc["acf"] = std::vector<double>(acf.begin() + 1, acf.end());
    doc["pacf"] = r.pacf;
    doc["n_effective"] = r.n_effective;
    doc["threshold"] = r.threshold;
    const auto sig = significant_lags(r, o.alpha);
    doc["significant"] = sig;
    const OrderEstimates order = order_from_lags(sig);
    doc["p1"] = optional_json(order.p1);
    doc["p2"] = optional_json(order.p2);
    doc["p3"] = optional_json(order.p3);
    write_document(doc.dump(2) + "\n", o.out, out);
    return kOk;
}

// ---- simulate -------------------------------------------------------------

struct SimulateOptions {
    std::string model;
    std::size_t n = 500;
    std::uint64_t seed = 1;
    std::size_t burn_in = kDefaultBurnIn;
    double garch_omega = 0.0;
    double divergence_limit = kDefaultDivergenceLimit;
    std::string out;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
    const ModelSpec spec = parse_model(o.model);
    SimulationOptions sim;
    sim.burn_in = o.burn_in;
    sim.garch_omega = o.garch_omega;
    sim.divergence_limit = o.divergence_limit;
    const SimulationRun run = simulate(spec, o.n, o.seed, sim);

    Json meta = header("simulate");
    meta["config"] = {{"model", spec.name},
                      {"n", o.n},
                      {"seed", o.seed},
                      {"burn_in", o.burn_in},
                      {"garch_omega", o.garch_omega},
                      {"divergence_limit", o.divergence_limit}};
    meta["model_title"] = spec.title;
    meta["true_p"] = spec.true_p;
    write_document(series_to_csv(run.series), o.out, out);
    write_sidecar(meta, o.out);
    return kOk;
}

// ---- experiment -----------------------------------------------------------

struct ExperimentOptions {
    std::string scenario_file;
    bool grid_desk = false;
    bool grid_full = false;
    std::optional<std::size_t> reps;
    std::string sizes;
    std::string measures;
    std::optional<std::uint64_t> seed;
    std::size_t parallelism = 0;
    std::string out;
    std::string absent;
};

int cmd_experiment(const ExperimentOptions& o, std::ostream& out, std::ostream& err) {
    const int sources = (o.scenario_file.empty() ? 0 : 1) + (o.grid_desk ? 1 : 0) + (o.grid_full ? 1 : 0);
    if (sources != 1) {
        throw Error(ErrorKind::InvalidInput, "give exactly one of --scenario, --grid-desk or --grid-full");
    }
    std::vector<Scenario> scenarios;
    if (!o.scenario_file.empty()) {
        std::ifstream f(o.scenario_file);
        if (!f) throw Error(ErrorKind::InvalidInput, "cannot open scenario file '" + o.scenario_file + "'");
        std::stringstream buf;
        buf << f.rdbuf();
        scenarios = parse_scenario_file(buf.str());
    } else {
        scenarios = study_grid_scenarios(o.grid_full);
    }
    for (Scenario& s : scenarios) {
        if (o.reps) s.replications = *o.reps;
        if (!o.sizes.empty()) s.sizes = parse_sizes(o.sizes);
        if (o.seed) s.base_seed = *o.seed;
        if (!o.absent.empty()) s.absent = parse_absent_policy(o.absent);
        if (!o.measures.empty()) {
            s.measures.clear();
            std::stringstream ss(o.measures);
            std::string m;
            while (std::getline(ss, m, ',')) s.measures.push_back(parse_measure(m));
        }
        validate(s);
    }
    const std::size_t workers = o.parallelism > 0 ? o.parallelism : default_parallelism();

    RmseReport report;
    for (const Scenario& s : scenarios) {
        err << "scenario " << describe_scenario(s) << "\n";
        report.merge(run_scenario(s, workers, [&](const std::string& line) { err << line << "\n"; }));
    }

    Json meta = header("experiment");
    Json config;
    config["source"] = o.scenario_file.empty() ? (o.grid_full ? "grid-full" : "grid-desk") : o.scenario_file;
    config["parallelism"] = workers;
    config["scenarios"] = Json::array();
    for (const Scenario& s : scenarios) config["scenarios"].push_back(describe_scenario(s));
    meta["config"] = config;

    if (!o.out.empty()) {
        write_document(emit_report(report, ReportFormat::csv), o.out + ".csv", out);
        write_sidecar(meta, o.out + ".csv");
        Json doc = meta;
        const Json body = Json::parse(emit_report(report, ReportFormat::json));
        for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
        write_document(doc.dump(2) + "\n", o.out + ".json", out);
    }
    out << render_table(report);
    if (report.any_flagged()) {
        err << "one or more cells exceeded the " << kFailureFlagShare * 100 << "% divergence-failure share\n";
        return kFlaggedCells;
    }
    return kOk;
}

// ---- bench ----------------------------------------------------------------

struct BenchOptions {
    std::string op = "xi";
    std::string sizes = "100000,200000";
    std::size_t trials = 7;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_bench(const BenchOptions& o, std::ostream& out) {
    if (o.op != "xi" && o.op != "codec") throw Error(ErrorKind::InvalidInput, "--op must be xi or codec");
    if (o.trials < 1) throw Error(ErrorKind::InvalidInput, "--trials must be positive");
    const std::vector<std::size_t> sizes = parse_sizes(o.sizes);

    std::string table = "op,n,median_seconds,trials\n";
    for (std::size_t n : sizes) {
        Rng rng = make_rng({o.seed, n});
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> x(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = u(rng);
            y[i] = std::sin(6.0 * x[i]) + 0.1 * u(rng);
        }
        const Eigen::Map<const Eigen::MatrixXd> z(x.data(), static_cast<Eigen::Index>(n), 1);
        std::vector<double> times;
        for (std::size_t t = 0; t < o.trials; ++t) {
            const auto start = std::chrono::steady_clock::now();
            const DependenceEstimate e = o.op == "xi" ? xi_coefficient(x, y, o.seed) : codec_unconditional(y, z, o.seed);
            const auto stop = std::chrono::steady_clock::now();
            if (!std::isfinite(e.value)) throw Error(ErrorKind::InvalidInput, "benchmark produced a non-finite value");
            times.push_back(std::chrono::duration<double>(stop - start).count());
        }
        std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
        std::ostringstream row;
        row.precision(9);
        row << o.op << ',' << n << ',' << times[times.size() / 2] << ',' << o.trials << '\n';
        table += row.str();
    }
    Json meta = header("bench");
    meta["config"] = {{"op", o.op}, {"sizes", sizes}, {"trials", o.trials}, {"seed", o.seed}};
    write_document(table, o.out, out);
    write_sidecar(meta, o.out);
    return kOk;
}

int exit_code_for(const Error& e) {
    if (e.kind() == ErrorKind::Diverged) return kDiverged;
    if (e.is_degenerate()) return kDegenerate;
    return kInputError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Autoregressive lag selection with the CODEC coefficient and FOCI", "codeclag"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SelectOptions select;
    auto* select_cmd = app.add_subcommand("select", "Select lags of one series and report p1/p2/p3");
    add_input_options(*select_cmd, select.input);
    select_cmd->add_option("--measure", select.measure, "codec, pearson or spearman")->capture_default_str();
    select_cmd->add_option("--seed", select.seed, "Tie-breaking seed")->capture_default_str();
    select_cmd->add_flag("--full-ranking", select.full_ranking, "Continue the greedy order past the stop");
    select_cmd->add_option("--alpha", select.alpha, "PACF significance level")->capture_default_str();
    select_cmd->add_option("--parallelism", select.parallelism, "Threads per greedy step")->capture_default_str();
    select_cmd->add_option("--out", select.out, "Write the JSON report here instead of stdout");

    PacfOptions pacf;
    auto* pacf_cmd = app.add_subcommand("pacf", "Pearson or Spearman partial autocorrelations");
    add_input_options(*pacf_cmd, pacf.input);
    pacf_cmd->add_option("--method", pacf.method, "pearson or spearman")->capture_default_str();
    pacf_cmd->add_option("--max-lag", pacf.max_lag, "Largest lag (default: Schwert's rule)");
    pacf_cmd->add_option("--alpha", pacf.alpha, "Significance level")->capture_default_str();
    pacf_cmd->add_option("--out", pacf.out, "Write the JSON report here instead of stdout");

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate one of the ten benchmark processes");
    sim_cmd->add_option("--model", sim.model, "Model name (ar8, setar, nlar4, ...)")->required();
    sim_cmd->add_option("--n", sim.n, "Retained length")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "Innovation seed")->capture_default_str();
    sim_cmd->add_option("--burn-in", sim.burn_in, "Discarded warm-up steps")->capture_default_str();
    sim_cmd->add_option("--garch-omega", sim.garch_omega, "GARCH variance intercept")->capture_default_str();
    sim_cmd->add_option("--divergence-limit", sim.divergence_limit, "Abort when |value| exceeds this")
        ->capture_default_str();
    sim_cmd->add_option("--out", sim.out, "CSV path (metadata goes to <out>.meta.json)");

    ExperimentOptions exp;
    auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo RMSE study");
    exp_cmd->add_option("--scenario", exp.scenario_file, "Scenario file (key = value)");
    exp_cmd->add_flag("--grid-desk", exp.grid_desk, "All fourteen columns, 50 replications, n <= 2000");
    exp_cmd->add_flag("--grid-full", exp.grid_full, "All fourteen columns, 200 replications, n <= 5000");
    exp_cmd->add_option("--reps", exp.reps, "Override replications");
    exp_cmd->add_option("--sizes", exp.sizes, "Override sizes, comma separated");
    exp_cmd->add_option("--measures", exp.measures, "Override measures, comma separated");
    exp_cmd->add_option("--seed", exp.seed, "Override base seed");
    exp_cmd->add_option("--absent", exp.absent, "Absent p-hat policy: zero or skip");
    exp_cmd->add_option("--parallelism", exp.parallelism, "Worker threads (default: CODECLAG_PARALLELISM or all cores)");
    exp_cmd->add_option("--out", exp.out, "Output prefix; writes <out>.csv and <out>.json");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time xi or CODEC over sample sizes");
    bench_cmd->add_option("--op", bench.op, "xi or codec")->capture_default_str();
    bench_cmd->add_option("--sizes", bench.sizes, "Comma-separated sample sizes")->capture_default_str();
    bench_cmd->add_option("--trials", bench.trials, "Trials per size (median reported)")->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "Data seed")->capture_default_str();
    bench_cmd->add_option("--out", bench.out, "CSV path (metadata goes to <out>.meta.json)");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (select_cmd->parsed()) return cmd_select(select, out);
        if (pacf_cmd->parsed()) return cmd_pacf(pacf, out);
        if (sim_cmd->parsed()) return cmd_simulate(sim, out);
        if (exp_cmd->parsed()) return cmd_experiment(exp, out, err);
        if (bench_cmd->parsed()) return cmd_bench(bench, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace codeclag::cli
