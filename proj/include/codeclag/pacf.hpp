#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "codeclag/series.hpp"

namespace codeclag {

enum class CorrelationMethod { pearson, spearman };

[[nodiscard]] std::string_view to_string(CorrelationMethod method) noexcept;

inline constexpr double kDefaultAlpha = 0.05;

/// Sample autocorrelation r(0..max_lag) with overall-mean centring and the
/// lag-0 sum of squares as denominator, so r(0) == 1. The spearman variant
/// applies the same computation to the average-tie ranks of the series.
/// Throws DegenerateSeries for a constant series.
[[nodiscard]] std::vector<double> autocorrelation(const TimeSeries& series, std::size_t max_lag,
                                                  CorrelationMethod method);

/// Partial autocorrelations phi_kk, k = 1..h, from r(1..h) via the
/// Durbin-Levinson recursion (r(0) == 1 is implied, not passed).
[[nodiscard]] std::vector<double> pacf_durbin_levinson(std::span<const double> acf);

struct PacfResult {
    std::vector<double> pacf;  ///< pacf[k - 1] is the lag-k value
    CorrelationMethod method = CorrelationMethod::pearson;
    std::size_t n_effective = 0;
    double threshold = 0.0;
};

/// z_{1 - alpha/2} / sqrt(n_effective).
[[nodiscard]] double significance_threshold(std::size_t n_effective, double alpha);

[[nodiscard]] PacfResult compute_pacf(const TimeSeries& series, std::size_t max_lag, CorrelationMethod method,
                                      double alpha = kDefaultAlpha);

/// Lags k (1-based, ascending) with |pacf(k)| above the alpha-level band.
[[nodiscard]] std::vector<std::size_t> significant_lags(const PacfResult& pacf, double alpha = kDefaultAlpha);

}  // namespace codeclag
