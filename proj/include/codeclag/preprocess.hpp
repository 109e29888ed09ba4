#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "codeclag/series.hpp"

namespace codeclag {

/// Applies (1 - B) d times; the result is d observations shorter.
[[nodiscard]] TimeSeries difference(const TimeSeries& series, std::size_t d = 1);

/// Classical additive decomposition series = trend + seasonal + remainder.
struct DecompositionResult {
    std::vector<std::optional<double>> trend;      ///< absent on the edges
    std::vector<double> seasonal;                  ///< full length, periodic
    std::vector<std::optional<double>> remainder;  ///< defined where trend is
    std::vector<double> indices;                   ///< one centred index per phase
    std::size_t period = 0;
};

/// Trend is the centred moving average of width `period` (2 x period with
/// half weights at the ends when the period is even). Seasonal indices are the
/// per-phase means of the detrended values, centred to sum to zero. Phase 0 is
/// the first observation.
[[nodiscard]] DecompositionResult classical_decompose(const TimeSeries& series, std::size_t period);

/// series - seasonal, same length, trend kept.
[[nodiscard]] TimeSeries deseasonalize(const TimeSeries& series, std::size_t period);

}  // namespace codeclag
