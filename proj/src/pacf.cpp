#include "codeclag/pacf.hpp"

#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "codeclag/errors.hpp"

namespace codeclag {

std::string_view to_string(CorrelationMethod method) noexcept {
    return method == CorrelationMethod::pearson ? "pearson" : "spearman";
}

std::vector<double> autocorrelation(const TimeSeries& series, std::size_t max_lag, CorrelationMethod method) {
    const std::size_t n = series.size();
    if (max_lag + 1 >= n) {
        throw Error(ErrorKind::InsufficientData, "max_lag " + std::to_string(max_lag) +
                                                     " must be below length - 1 = " + std::to_string(n - 1));
    }
    std::vector<double> x(series.values().begin(), series.values().end());
    if (method == CorrelationMethod::spearman) x = rank_vector(x, TiePolicy::average).ranks;

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    for (double& v : x) v -= mean;
    double c0 = 0.0;
    for (double v : x) c0 += v * v;
    if (c0 <= 0.0 || !std::isfinite(c0)) throw Error(ErrorKind::DegenerateSeries, "series is constant (zero variance)");

    std::vector<double> r(max_lag + 1);
    r[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t t = k; t < n; ++t) ck += x[t] * x[t - k];
        r[k] = ck / c0;
    }
    return r;
}

std::vector<double> pacf_durbin_levinson(std::span<const double> acf) {
    const std::size_t h = acf.size();
    if (h == 0) throw Error(ErrorKind::InsufficientData, "need at least one autocorrelation");

    std::vector<double> out(h);
    std::vector<double> phi(h + 1, 0.0);
    std::vector<double> prev(h + 1, 0.0);
    double v = 1.0;  // prediction-error variance relative to r(0)
    for (std::size_t k = 1; k <= h; ++k) {
        double num = acf[k - 1];
        for (std::size_t j = 1; j < k; ++j) num -= prev[j] * acf[k - j - 1];
        const double phikk = num / v;
        phi[k] = phikk;
        for (std::size_t j = 1; j < k; ++j) phi[j] = prev[j] - phikk * prev[k - j];
        v *= 1.0 - phikk * phikk;
        out[k - 1] = phikk;
        if (k < h && std::abs(v) < 1e-12) {
            throw Error(ErrorKind::NumericallySingular,
                        "Durbin-Levinson prediction variance vanished at lag " + std::to_string(k));
        }
        prev = phi;
    }
    return out;
}

double significance_threshold(std::size_t n_effective, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorKind::InvalidInput, "alpha must lie in (0, 1)");
    if (n_effective == 0) throw Error(ErrorKind::InsufficientData, "n_effective must be positive");
    const boost::math::normal_distribution<double> standard;
    return boost::math::quantile(standard, 1.0 - alpha / 2.0) / std::sqrt(static_cast<double>(n_effective));
}

PacfResult compute_pacf(const TimeSeries& series, std::size_t max_lag, CorrelationMethod method, double alpha) {
    if (max_lag == 0) throw Error(ErrorKind::InvalidInput, "max_lag must be positive");
    const std::vector<double> r = autocorrelation(series, max_lag, method);
    PacfResult out;
    out.pacf = pacf_durbin_levinson(std::span<const double>(r).subspan(1));
    out.method = method;
    out.n_effective = series.size();
    out.threshold = significance_threshold(out.n_effective, alpha);
    return out;
}

std::vector<std::size_t> significant_lags(const PacfResult& pacf, double alpha) {
    const double threshold = significance_threshold(pacf.n_effective, alpha);
    std::vector<std::size_t> lags;
    for (std::size_t k = 0; k < pacf.pacf.size(); ++k) {
        if (std::abs(pacf.pacf[k]) > threshold) lags.push_back(k + 1);
    }
    return lags;
}

}  // namespace codeclag
