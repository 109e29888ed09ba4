#include "codeclag/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "codeclag/errors.hpp"
#include "codeclag/random.hpp"

namespace codeclag {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error(ErrorKind::InvalidInput, std::string(what) + " has a non-finite value at index " +
                                                     std::to_string(i + 1));
        }
    }
}

}  // namespace

TimeSeries::TimeSeries(std::vector<double> values, std::optional<std::size_t> period, std::string label)
    : values_(std::move(values)), period_(period), label_(std::move(label)) {
    if (values_.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "a time series needs at least 2 observations, got " +
                                                     std::to_string(values_.size()));
    }
    require_finite(values_, "time series");
    if (period_ && (*period_ < 2 || *period_ >= values_.size())) {
        throw Error(ErrorKind::InvalidInput, "period " + std::to_string(*period_) +
                                                 " must satisfy 2 <= period < length " +
                                                 std::to_string(values_.size()));
    }
}

RankVector rank_vector(std::span<const double> values, TiePolicy tie_policy, std::uint64_t seed) {
    if (values.empty()) throw Error(ErrorKind::InsufficientData, "cannot rank an empty sequence");
    require_finite(values, "rank input");

    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    RankVector out{std::vector<double>(n), tie_policy, seed};

    if (tie_policy == TiePolicy::random_break) {
        // Random secondary key: ties land in a seeded random order.
        std::vector<std::size_t> key(n);
        std::iota(key.begin(), key.end(), std::size_t{0});
        Rng rng = make_rng({seed});
        std::shuffle(key.begin(), key.end(), rng);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (values[a] != values[b]) return values[a] < values[b];
            return key[a] < key[b];
        });
        for (std::size_t r = 0; r < n; ++r) out.ranks[order[r]] = static_cast<double>(r + 1);
        return out;
    }

    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && values[order[end]] == values[order[start]]) ++end;
        const double midrank = 0.5 * static_cast<double>(start + 1 + end);
        for (std::size_t k = start; k < end; ++k) out.ranks[order[k]] = midrank;
        start = end;
    }
    return out;
}

std::vector<std::int64_t> max_ranks(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::int64_t> r(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        r[i] = std::upper_bound(sorted.begin(), sorted.end(), values[i]) - sorted.begin();
    }
    return r;
}

std::vector<std::int64_t> reverse_max_ranks(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<std::int64_t>(values.size());
    std::vector<std::int64_t> l(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        l[i] = n - (std::lower_bound(sorted.begin(), sorted.end(), values[i]) - sorted.begin());
    }
    return l;
}

void LagEmbedding::validate() const {
    if (h == 0) throw Error(ErrorKind::InvalidInput, "lag embedding needs h >= 1");
    if (lags.size() != h) {
        throw Error(ErrorKind::InvalidInput, "lag embedding has " + std::to_string(lags.size()) +
                                                 " columns, expected h = " + std::to_string(h));
    }
    if (target.size() != n_rows) throw Error(ErrorKind::InvalidInput, "target length differs from n_rows");
    for (std::size_t j = 0; j < h; ++j) {
        if (lags[j].size() != n_rows) {
            throw Error(ErrorKind::InvalidInput, "lag column " + std::to_string(j + 1) +
                                                     " length differs from n_rows");
        }
    }
    if (n_rows < 2) throw Error(ErrorKind::InsufficientData, "lag embedding needs at least 2 rows");
}

LagEmbedding build_lag_matrix(const TimeSeries& series, std::size_t h) {
    const std::size_t n = series.size();
    if (h == 0) throw Error(ErrorKind::InvalidInput, "lag count h must be positive");
    if (h + 1 >= n) {
        throw Error(ErrorKind::InsufficientData, "h = " + std::to_string(h) + " leaves fewer than 2 rows for a series of length " +
                                                     std::to_string(n));
    }
    LagEmbedding emb;
    emb.h = h;
    emb.n_rows = n - h;
    auto v = series.values();
    emb.target.assign(v.begin() + static_cast<std::ptrdiff_t>(h), v.end());
    emb.lags.resize(h);
    for (std::size_t j = 1; j <= h; ++j) {
        emb.lags[j - 1].assign(v.begin() + static_cast<std::ptrdiff_t>(h - j),
                               v.begin() + static_cast<std::ptrdiff_t>(n - j));
    }
    return emb;
}

}  // namespace codeclag
