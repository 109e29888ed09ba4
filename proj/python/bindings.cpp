#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "codeclag/dependence.hpp"
#include "codeclag/errors.hpp"
#include "codeclag/experiment.hpp"
#include "codeclag/ingest.hpp"
#include "codeclag/lagselect.hpp"
#include "codeclag/pacf.hpp"
#include "codeclag/simulate.hpp"
#include "codeclag/version.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace codeclag;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
    if (a.ndim() != 1) throw Error(ErrorKind::InvalidInput, "expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

Eigen::MatrixXd to_matrix(const Array& a) {
    if (a.ndim() == 1) {
        Eigen::MatrixXd m(a.shape(0), 1);
        for (py::ssize_t i = 0; i < a.shape(0); ++i) m(i, 0) = a.data()[i];
        return m;
    }
    if (a.ndim() != 2) throw Error(ErrorKind::InvalidInput, "expected a one- or two-dimensional array");
    Eigen::MatrixXd m(a.shape(0), a.shape(1));
    auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i)
        for (py::ssize_t k = 0; k < a.shape(1); ++k) m(i, k) = r(i, k);
    return m;
}

py::array_t<double> to_array(std::span<const double> v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::object optional_int(const std::optional<std::size_t>& v) { return v ? py::object(py::int_(*v)) : py::none(); }

TimeSeries make_series(const Array& values, std::optional<std::size_t> period, const std::string& preprocess) {
    return apply_preprocessing(TimeSeries(to_vector(values), period), parse_preprocessing(preprocess));
}

py::dict select_lags(const Array& values, const std::string& measure_name, std::uint64_t seed,
                     std::optional<std::size_t> period, const std::string& preprocess, bool full_ranking, double alpha) {
    const Measure measure = parse_measure(measure_name);
    const TimeSeries series = make_series(values, period, preprocess);
    py::dict out;
    OrderEstimates order;
    if (measure == Measure::codec) {
        const FociResult r = select_lags_codec(series, seed, FociOptions{full_ranking, 1});
        order = estimate_order(r);
        out["h_max"] = r.h_max;
        out["ordered_lags"] = r.ordered_lags;
        out["step_estimates"] = r.step_estimates;
        out["stop_index"] = r.stop_index;
        out["selected"] = r.selected();
        if (r.full_ranking) {
            out["full_ranking"] = *r.full_ranking;
            out["full_estimates"] = *r.full_estimates;
        }
    } else {
        const auto method = measure == Measure::pearson ? CorrelationMethod::pearson : CorrelationMethod::spearman;
        const PacfSelection sel = select_lags_pacf_detailed(series, method, alpha);
        order = sel.order;
        out["h_max"] = sel.pacf.pacf.size();
        out["selected"] = sel.significant;
        out["pacf"] = to_array(sel.pacf.pacf);
        out["threshold"] = sel.pacf.threshold;
    }
    out["p1"] = optional_int(order.p1);
    out["p2"] = optional_int(order.p2);
    out["p3"] = optional_int(order.p3);
    return out;
}

py::list run_experiment(const std::string& model, const std::string& preprocessing, std::vector<std::size_t> sizes,
                        std::size_t reps, const std::vector<std::string>& measures, std::uint64_t base_seed,
                        std::size_t parallelism, const std::string& absent) {
    Scenario s;
    s.spec = parse_model(model);
    s.preprocessing = parse_preprocessing(preprocessing);
    s.sizes = std::move(sizes);
    s.replications = reps;
    s.measures.clear();
    for (const auto& m : measures) s.measures.push_back(parse_measure(m));
    s.base_seed = base_seed;
    s.absent = parse_absent_policy(absent);
    RmseReport report;
    {
        py::gil_scoped_release release;
        report = run_scenario(s, parallelism);
    }
    py::list cells;
    for (const auto& [k, c] : report.cells) {
        const GroupHealth& h = report.health.at(GroupKey{k.model, k.preprocessing, k.size});
        cells.append(py::dict("model"_a = k.model, "preprocessing"_a = k.preprocessing, "size"_a = k.size,
                              "measure"_a = k.measure, "estimator"_a = k.estimator, "rmse"_a = c.rmse,
                              "n_reps"_a = c.n_reps, "n_absent"_a = c.n_absent, "flagged"_a = h.flagged));
    }
    return cells;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Autoregressive lag selection with the CODEC coefficient";
    m.attr("__version__") = kVersion;

    static py::handle error_type = py::exception<Error>(m, "CodeclagError", PyExc_ValueError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const auto cls = py::reinterpret_borrow<py::object>(error_type);
            py::object err = cls(std::string(to_string(e.kind())) + ": " + e.what());
            err.attr("kind") = std::string(to_string(e.kind()));
            err.attr("location") = e.location() ? py::object(py::int_(*e.location())) : py::none();
            PyErr_SetObject(cls.ptr(), err.ptr());
        }
    });

    m.def(
        "xi_coefficient",
        [](const Array& x, const Array& y, std::uint64_t seed) {
            return xi_coefficient(to_vector(x), to_vector(y), seed).value;
        },
        "x"_a, "y"_a, "seed"_a = 1, "Chatterjee's xi of y on x.");

    m.def(
        "codec",
        [](const Array& y, const Array& z, std::optional<Array> x, std::uint64_t seed) {
            const std::vector<double> yv = to_vector(y);
            if (!x) return codec_unconditional(yv, to_matrix(z), seed).value;
            return codec_conditional(yv, to_matrix(z), to_matrix(*x), seed).value;
        },
        "y"_a, "z"_a, "x"_a = py::none(), "seed"_a = 1, "T_n(y, z) or, with x, T_n(y, z | x).");

    m.def("schwert_max_lag", &schwert_max_lag, "n"_a);

    m.def("select_lags", &select_lags, "values"_a, "measure"_a = "codec", "seed"_a = 1, "period"_a = py::none(),
          "preprocess"_a = "raw", "full_ranking"_a = false, "alpha"_a = kDefaultAlpha,
          "Lag selection report for one series.");

    m.def(
        "pacf",
        [](const Array& values, std::optional<std::size_t> max_lag, const std::string& method, double alpha) {
            const TimeSeries s(to_vector(values));
            const CorrelationMethod cm = method == "spearman" ? CorrelationMethod::spearman
                                         : method == "pearson"
                                             ? CorrelationMethod::pearson
                                             : throw Error(ErrorKind::InvalidInput, "unknown method '" + method + "'");
            const PacfResult r = compute_pacf(s, max_lag.value_or(schwert_max_lag(s.size())), cm, alpha);
            return py::dict("pacf"_a = to_array(r.pacf), "threshold"_a = r.threshold,
                            "significant"_a = significant_lags(r, alpha));
        },
        "values"_a, "max_lag"_a = py::none(), "method"_a = "pearson", "alpha"_a = kDefaultAlpha);

    m.def(
        "simulate",
        [](const std::string& model, std::size_t n, std::uint64_t seed, std::size_t burn_in, double garch_omega,
           double divergence_limit) {
            SimulationOptions opts;
            opts.burn_in = burn_in;
            opts.garch_omega = garch_omega;
            opts.divergence_limit = divergence_limit;
            return to_array(simulate(parse_model(model), n, seed, opts).series.values());
        },
        "model"_a, "n"_a, "seed"_a = 1, "burn_in"_a = kDefaultBurnIn, "garch_omega"_a = 0.0,
        "divergence_limit"_a = kDefaultDivergenceLimit);

    m.def(
        "model_names",
        [] {
            std::vector<std::string> out;
            for (ModelKind k : kAllModels) out.push_back(model_spec(k).name);
            return out;
        });

    m.def(
        "load_benchmark",
        [](const std::string& name, std::optional<std::filesystem::path> data_dir) {
            return to_array(load_benchmark(name, data_dir.value_or(default_data_dir())).values());
        },
        "name"_a, "data_dir"_a = py::none());

    m.def("run_experiment", &run_experiment, "model"_a, "preprocessing"_a = "raw",
          "sizes"_a = std::vector<std::size_t>{100, 500, 1000, 2000}, "reps"_a = kDeskReplications,
          "measures"_a = std::vector<std::string>{"pearson", "spearman", "codec"}, "base_seed"_a = 1,
          "parallelism"_a = 1, "absent"_a = "zero", "RMSE cells of one simulated scenario.");
}
