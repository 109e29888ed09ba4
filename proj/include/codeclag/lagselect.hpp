#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "codeclag/pacf.hpp"
#include "codeclag/series.hpp"

namespace codeclag {

/// Schwert's rule floor(12 (n/100)^{1/4}), clamped to n - 2.
[[nodiscard]] std::size_t schwert_max_lag(std::size_t n);

/// Greedy CODEC ordering of the lags of one series.
struct FociResult {
    std::vector<std::size_t> ordered_lags;  ///< 1-based lags, selection order
    std::vector<double> step_estimates;     ///< CODEC value that picked each lag
    std::size_t stop_index = 0;             ///< lags selected before the stop rule fired
    std::size_t h_max = 0;
    /// Present when requested: every lag in greedy order, continuing past the
    /// stop without checking the sign. `full_estimates` pairs with it.
    std::optional<std::vector<std::size_t>> full_ranking;
    std::optional<std::vector<double>> full_estimates;

    /// The selected set (the first stop_index entries of ordered_lags).
    [[nodiscard]] std::vector<std::size_t> selected() const;
};

struct FociOptions {
    bool full_ranking = false;
    std::size_t parallelism = 1;  ///< threads for the candidates of one step
};

/// Step 1 picks the lag maximising T_n(target, lag); later steps maximise
/// T_n(target, lag | selected). Stops once the best estimate is <= 0 or every
/// lag is taken. Candidates whose estimates agree to 1e-12 resolve toward the
/// smaller lag. Tie seeds derive from (seed, step, lag) so results do not
/// depend on `parallelism`.
[[nodiscard]] FociResult foci_select(const LagEmbedding& embedding, std::uint64_t seed,
                                     const FociOptions& options = {});

/// Largest, second-largest and third-largest lag of a selected set.
struct OrderEstimates {
    std::optional<std::size_t> p1;
    std::optional<std::size_t> p2;
    std::optional<std::size_t> p3;
};

[[nodiscard]] OrderEstimates order_from_lags(std::vector<std::size_t> lags);
[[nodiscard]] OrderEstimates estimate_order(const FociResult& result);

/// FOCI over lags 1..schwert_max_lag(n) of the series.
[[nodiscard]] FociResult select_lags_codec(const TimeSeries& series, std::uint64_t seed,
                                           const FociOptions& options = {});

struct PacfSelection {
    PacfResult pacf;
    std::vector<std::size_t> significant;
    OrderEstimates order;
};

/// PACF to schwert_max_lag(n), then the three largest significant lags.
[[nodiscard]] PacfSelection select_lags_pacf_detailed(const TimeSeries& series, CorrelationMethod method,
                                                      double alpha = kDefaultAlpha);

[[nodiscard]] OrderEstimates select_lags_pacf(const TimeSeries& series, CorrelationMethod method,
                                              double alpha = kDefaultAlpha);

}  // namespace codeclag
