#include "codeclag/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "codeclag/errors.hpp"
#include "codeclag/random.hpp"
#include "codeclag/series.hpp"

namespace codeclag {

namespace {

void require_sample(std::span<const double> y, std::size_t rows, std::size_t min_n) {
    if (y.size() != rows) {
        throw Error(ErrorKind::InvalidInput, "response has " + std::to_string(y.size()) + " rows but covariates have " +
                                                 std::to_string(rows));
    }
    if (y.size() < min_n) {
        throw Error(ErrorKind::InsufficientData, "need at least " + std::to_string(min_n) + " observations, got " +
                                                     std::to_string(y.size()));
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "response contains a non-finite value");
    }
}

DependenceEstimate make_estimate(std::int64_t num, std::int64_t den, std::size_t n) {
    return DependenceEstimate{static_cast<double>(num) / static_cast<double>(den), static_cast<double>(num),
                              static_cast<double>(den), n};
}

}  // namespace

DependenceEstimate xi_coefficient(std::span<const double> x, std::span<const double> y, std::uint64_t seed) {
    if (x.size() != y.size()) throw Error(ErrorKind::InvalidInput, "x and y differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw Error(ErrorKind::InsufficientData, "xi needs at least 3 pairs, got " + std::to_string(n));

    const RankVector rx = rank_vector(x, TiePolicy::random_break, derive_seed(seed, 0));
    const RankVector ry = rank_vector(y, TiePolicy::random_break, derive_seed(seed, 1));

    // ry listed in increasing order of x
    std::vector<std::int64_t> r_sorted(n);
    for (std::size_t i = 0; i < n; ++i) {
        r_sorted[static_cast<std::size_t>(rx.ranks[i]) - 1] = static_cast<std::int64_t>(ry.ranks[i]);
    }
    std::int64_t total = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) total += std::llabs(r_sorted[i + 1] - r_sorted[i]);

    const auto nn = static_cast<std::int64_t>(n);
    const std::int64_t den = nn * nn - 1;
    return make_estimate(den - 3 * total, den, n);
}

ResponseRanks::ResponseRanks(std::span<const double> y) : r_(max_ranks(y)), l_(reverse_max_ranks(y)) {}

DependenceEstimate codec_unconditional(const ResponseRanks& y, const NeighborMap& z_neighbors) {
    const std::size_t n = y.size();
    const auto nn = static_cast<std::int64_t>(n);
    const auto& r = y.r();
    const auto& l = y.l();

    std::int64_t den = 0;
    for (std::size_t i = 0; i < n; ++i) den += l[i] * (nn - l[i]);
    if (den == 0) throw Error(ErrorKind::DegenerateResponse, "response is constant");
    if (z_neighbors.index.size() != n) throw Error(ErrorKind::InvalidInput, "neighbour map size mismatch");

    std::int64_t num = 0;
    for (std::size_t i = 0; i < n; ++i) {
        num += nn * std::min(r[i], r[z_neighbors.index[i]]) - l[i] * l[i];
    }
    return make_estimate(num, den, n);
}

DependenceEstimate codec_conditional(const ResponseRanks& y, const NeighborMap& x_neighbors,
                                     const NeighborMap& xz_neighbors) {
    const std::size_t n = y.size();
    if (x_neighbors.index.size() != n || xz_neighbors.index.size() != n) {
        throw Error(ErrorKind::InvalidInput, "neighbour map size mismatch");
    }
    const auto& r = y.r();
    std::int64_t num = 0;
    std::int64_t den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t base = std::min(r[i], r[x_neighbors.index[i]]);
        num += std::min(r[i], r[xz_neighbors.index[i]]) - base;
        den += r[i] - base;
    }
    if (den == 0) {
        throw Error(ErrorKind::DegenerateConditioning,
                    "response is a function of the conditioning variables at the sample level");
    }
    return make_estimate(num, den, n);
}

DependenceEstimate codec_unconditional(std::span<const double> y, const Eigen::Ref<const Eigen::MatrixXd>& z,
                                       std::uint64_t seed) {
    require_sample(y, static_cast<std::size_t>(z.rows()), 3);
    const ResponseRanks ranks(y);
    // check the response before paying for the neighbour search
    if (ranks.r().front() == static_cast<std::int64_t>(y.size()) &&
        std::all_of(ranks.l().begin(), ranks.l().end(),
                    [&](std::int64_t v) { return v == static_cast<std::int64_t>(y.size()); })) {
        throw Error(ErrorKind::DegenerateResponse, "response is constant");
    }
    return codec_unconditional(ranks, nearest_neighbors(z, seed));
}

DependenceEstimate codec_conditional(std::span<const double> y, const Eigen::Ref<const Eigen::MatrixXd>& z,
                                     const Eigen::Ref<const Eigen::MatrixXd>& x_cond, std::uint64_t seed) {
    require_sample(y, static_cast<std::size_t>(z.rows()), 3);
    if (x_cond.rows() != z.rows()) throw Error(ErrorKind::InvalidInput, "z and x_cond differ in row count");
    if (x_cond.cols() < 1) throw Error(ErrorKind::InvalidInput, "conditioning set needs at least one column");

    Eigen::MatrixXd joint(x_cond.rows(), x_cond.cols() + z.cols());
    joint << x_cond, z;
    const ResponseRanks ranks(y);
    return codec_conditional(ranks, nearest_neighbors(x_cond, derive_seed(seed, 0)),
                             nearest_neighbors(joint, derive_seed(seed, 1)));
}

}  // namespace codeclag
