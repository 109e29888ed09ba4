#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace codeclag {

/// Ordered, finite, real-valued observations. Immutable once built.
///
/// Invariants: at least two observations, all finite, and a period (when
/// given) in [2, size()).
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values, std::optional<std::size_t> period = std::nullopt,
                        std::string label = {});

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::optional<std::size_t> period() const noexcept { return period_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }

    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
    std::optional<std::size_t> period_;
    std::string label_;
};

enum class TiePolicy { random_break, average };

/// Ranks in 1..n. Under random_break the ranks form a permutation; under
/// average tied entries share their midrank (so values may be fractional).
struct RankVector {
    std::vector<double> ranks;
    TiePolicy tie_policy = TiePolicy::random_break;
    std::uint64_t seed = 0;
};

[[nodiscard]] RankVector rank_vector(std::span<const double> values,
                                     TiePolicy tie_policy = TiePolicy::random_break,
                                     std::uint64_t seed = 0);

/// R_i = #{j : v_j <= v_i}.
[[nodiscard]] std::vector<std::int64_t> max_ranks(std::span<const double> values);

/// L_i = #{j : v_j >= v_i}.
[[nodiscard]] std::vector<std::int64_t> reverse_max_ranks(std::span<const double> values);

/// Regression design for lag selection: target X_t for t = h+1..n and one
/// column per lag j = 1..h holding X_{t-j}. Row i of lag column j (both
/// 0-based here) is series[h + i - (j + 1)].
struct LagEmbedding {
    std::vector<double> target;
    std::vector<std::vector<double>> lags;  ///< lags[j] is lag j+1
    std::size_t h = 0;
    std::size_t n_rows = 0;

    /// Checks the shape invariants; throws InvalidInput/InsufficientData.
    void validate() const;
};

[[nodiscard]] LagEmbedding build_lag_matrix(const TimeSeries& series, std::size_t h);

}  // namespace codeclag
