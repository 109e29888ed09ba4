#include "codeclag/lagselect.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "codeclag/dependence.hpp"
#include "codeclag/errors.hpp"
#include "codeclag/neighbors.hpp"
#include "codeclag/parallel.hpp"
#include "codeclag/random.hpp"

namespace codeclag {

namespace {

constexpr double kArgmaxTolerance = 1e-12;

// tag 0 is the conditioning set of a step, tag j + 1 is candidate lag column j
std::uint64_t step_seed(std::uint64_t seed, std::size_t step, std::size_t tag) {
    return derive_seed(derive_seed(seed, step), tag);
}

Eigen::MatrixXd gather(const LagEmbedding& emb, const std::vector<std::size_t>& columns, std::size_t extra) {
    const auto rows = static_cast<Eigen::Index>(emb.n_rows);
    const bool with_extra = extra < emb.h;
    Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(columns.size() + (with_extra ? 1 : 0)));
    Eigen::Index c = 0;
    auto put = [&](std::size_t j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, c) = emb.lags[j][static_cast<std::size_t>(i)];
        ++c;
    };
    for (std::size_t j : columns) put(j);
    if (with_extra) put(extra);
    return m;
}

}  // namespace

std::size_t schwert_max_lag(std::size_t n) {
    if (n < 4) throw Error(ErrorKind::InsufficientData, "Schwert's rule needs n >= 4, got " + std::to_string(n));
    const double raw = 12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25);
    const auto h = static_cast<std::size_t>(std::floor(raw + 1e-9));
    return std::min(h, n - 2);
}

std::vector<std::size_t> FociResult::selected() const {
    return {ordered_lags.begin(), ordered_lags.begin() + static_cast<std::ptrdiff_t>(stop_index)};
}

FociResult foci_select(const LagEmbedding& embedding, std::uint64_t seed, const FociOptions& options) {
    embedding.validate();
    if (embedding.n_rows < 3) {
        throw Error(ErrorKind::InsufficientData, "FOCI needs at least 3 embedding rows, got " +
                                                     std::to_string(embedding.n_rows));
    }
    const std::size_t h = embedding.h;
    const ResponseRanks ranks(embedding.target);
    const auto n = static_cast<std::int64_t>(embedding.n_rows);
    if (std::all_of(ranks.l().begin(), ranks.l().end(), [n](std::int64_t v) { return v == n; })) {
        throw Error(ErrorKind::DegenerateResponse, "target series is constant");
    }

    FociResult result;
    result.h_max = h;
    std::vector<std::size_t> full_order;
    std::vector<double> full_values;
    std::vector<std::size_t> chosen;  // 0-based columns, greedy order
    std::vector<bool> taken(h, false);
    bool stopped = false;

    for (std::size_t step = 0; step < h; ++step) {
        std::vector<std::size_t> candidates;
        for (std::size_t j = 0; j < h; ++j) {
            if (!taken[j]) candidates.push_back(j);
        }
        std::vector<double> estimates(candidates.size(), 0.0);

        if (step == 0) {
            parallel_for(candidates.size(), options.parallelism, [&](std::size_t c) {
                const std::size_t j = candidates[c];
                const NeighborMap m = nearest_neighbors(gather(embedding, {}, j), step_seed(seed, step, j + 1));
                estimates[c] = codec_unconditional(ranks, m).value;
            });
        } else {
            const NeighborMap cond = nearest_neighbors(gather(embedding, chosen, h), step_seed(seed, step, 0));
            bool degenerate = false;
            try {
                (void)codec_conditional(ranks, cond, cond);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::DegenerateConditioning) throw;
                degenerate = true;
            }
            if (degenerate) {
                // The selected lags already determine the target: nothing can
                // add information, so the remaining lags rank in index order.
                if (!stopped) result.stop_index = chosen.size();
                stopped = true;
                if (options.full_ranking) {
                    for (std::size_t j : candidates) {
                        full_order.push_back(j + 1);
                        full_values.push_back(0.0);
                    }
                }
                break;
            }
            parallel_for(candidates.size(), options.parallelism, [&](std::size_t c) {
                const std::size_t j = candidates[c];
                const NeighborMap joint = nearest_neighbors(gather(embedding, chosen, j), step_seed(seed, step, j + 1));
                estimates[c] = codec_conditional(ranks, cond, joint).value;
            });
        }

        std::size_t best = 0;
        for (std::size_t c = 1; c < candidates.size(); ++c) {
            if (estimates[c] > estimates[best] + kArgmaxTolerance) best = c;
        }
        const std::size_t lag_col = candidates[best];
        const double value = estimates[best];

        if (!stopped) {
            result.ordered_lags.push_back(lag_col + 1);
            result.step_estimates.push_back(value);
            if (value <= 0.0) {
                stopped = true;
                result.stop_index = chosen.size();
            }
        }
        full_order.push_back(lag_col + 1);
        full_values.push_back(value);
        if (stopped && !options.full_ranking) break;

        chosen.push_back(lag_col);
        taken[lag_col] = true;
    }
    if (!stopped) result.stop_index = chosen.size();
    if (options.full_ranking) {
        result.full_ranking = std::move(full_order);
        result.full_estimates = std::move(full_values);
    }
    return result;
}

OrderEstimates order_from_lags(std::vector<std::size_t> lags) {
    std::sort(lags.begin(), lags.end(), std::greater<>());
    lags.erase(std::unique(lags.begin(), lags.end()), lags.end());
    OrderEstimates out;
    if (!lags.empty()) out.p1 = lags[0];
    if (lags.size() > 1) out.p2 = lags[1];
    if (lags.size() > 2) out.p3 = lags[2];
    return out;
}

OrderEstimates estimate_order(const FociResult& result) { return order_from_lags(result.selected()); }

FociResult select_lags_codec(const TimeSeries& series, std::uint64_t seed, const FociOptions& options) {
    const std::size_t h = schwert_max_lag(series.size());
    return foci_select(build_lag_matrix(series, h), seed, options);
}

PacfSelection select_lags_pacf_detailed(const TimeSeries& series, CorrelationMethod method, double alpha) {
    if (series.size() < 10) {
        throw Error(ErrorKind::InsufficientData, "PACF lag selection needs at least 10 observations");
    }
    PacfSelection out;
    out.pacf = compute_pacf(series, schwert_max_lag(series.size()), method, alpha);
    out.significant = significant_lags(out.pacf, alpha);
    out.order = order_from_lags(out.significant);
    return out;
}

OrderEstimates select_lags_pacf(const TimeSeries& series, CorrelationMethod method, double alpha) {
    return select_lags_pacf_detailed(series, method, alpha).order;
}

}  // namespace codeclag
