#include "codeclag/preprocess.hpp"

#include <numeric>

#include "codeclag/errors.hpp"

namespace codeclag {

TimeSeries difference(const TimeSeries& series, std::size_t d) {
    if (d == 0) throw Error(ErrorKind::InvalidInput, "differencing order must be positive");
    if (d >= series.size()) {
        throw Error(ErrorKind::InsufficientData, "cannot difference " + std::to_string(d) + " times a series of length " +
                                                     std::to_string(series.size()));
    }
    std::vector<double> v(series.values().begin(), series.values().end());
    for (std::size_t pass = 0; pass < d; ++pass) {
        for (std::size_t t = 0; t + 1 < v.size(); ++t) v[t] = v[t + 1] - v[t];
        v.pop_back();
    }
    if (v.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "differenced series has fewer than 2 observations");
    }
    std::optional<std::size_t> period = series.period();
    if (period && *period >= v.size()) period.reset();
    return TimeSeries(std::move(v), period, series.label());
}

DecompositionResult classical_decompose(const TimeSeries& series, std::size_t period) {
    const std::size_t n = series.size();
    if (period < 2) throw Error(ErrorKind::InvalidInput, "period must be at least 2");
    if (n < 2 * period) {
        throw Error(ErrorKind::InsufficientData, "decomposition needs at least two full periods (" +
                                                     std::to_string(2 * period) + " observations), got " +
                                                     std::to_string(n));
    }
    const auto x = series.values();
    DecompositionResult out;
    out.period = period;
    out.trend.assign(n, std::nullopt);
    out.remainder.assign(n, std::nullopt);

    const std::size_t half = period / 2;
    const bool even = period % 2 == 0;
    const double w = 1.0 / static_cast<double>(period);
    for (std::size_t t = half; t + half < n; ++t) {
        double s = 0.0;
        if (even) {
            s = 0.5 * (x[t - half] + x[t + half]);
            for (std::size_t k = t - half + 1; k < t + half; ++k) s += x[k];
        } else {
            for (std::size_t k = t - half; k <= t + half; ++k) s += x[k];
        }
        out.trend[t] = s * w;
    }

    std::vector<double> sums(period, 0.0);
    std::vector<std::size_t> counts(period, 0);
    for (std::size_t t = 0; t < n; ++t) {
        if (!out.trend[t]) continue;
        sums[t % period] += x[t] - *out.trend[t];
        ++counts[t % period];
    }
    out.indices.resize(period);
    for (std::size_t p = 0; p < period; ++p) out.indices[p] = sums[p] / static_cast<double>(counts[p]);
    const double centre = std::accumulate(out.indices.begin(), out.indices.end(), 0.0) / static_cast<double>(period);
    for (double& s : out.indices) s -= centre;

    out.seasonal.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        out.seasonal[t] = out.indices[t % period];
        if (out.trend[t]) out.remainder[t] = x[t] - *out.trend[t] - out.seasonal[t];
    }
    return out;
}

TimeSeries deseasonalize(const TimeSeries& series, std::size_t period) {
    const DecompositionResult parts = classical_decompose(series, period);
    std::vector<double> v(series.values().begin(), series.values().end());
    for (std::size_t t = 0; t < v.size(); ++t) v[t] -= parts.seasonal[t];
    return TimeSeries(std::move(v), series.period(), series.label());
}

}  // namespace codeclag
