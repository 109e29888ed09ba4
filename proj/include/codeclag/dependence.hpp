#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "codeclag/neighbors.hpp"

namespace codeclag {

/// value == numerator / denominator. Numerator and denominator are exact
/// integer rank sums (held in doubles) for the CODEC estimates.
struct DependenceEstimate {
    double value = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    std::size_t n = 0;
};

/// Chatterjee's rank correlation xi_n(x, y) = 1 - 3 sum |r_{i+1} - r_i| / (n^2 - 1),
/// with pairs ordered by x. Ties in x and in y are broken by seeded random
/// permutations. Not symmetric in its arguments.
[[nodiscard]] DependenceEstimate xi_coefficient(std::span<const double> x, std::span<const double> y,
                                                std::uint64_t seed);

/// Response ranks shared by every CODEC evaluation against the same y:
/// R_i = #{j : y_j <= y_i} and L_i = #{j : y_j >= y_i}.
class ResponseRanks {
public:
    explicit ResponseRanks(std::span<const double> y);

    [[nodiscard]] std::size_t size() const noexcept { return r_.size(); }
    [[nodiscard]] const std::vector<std::int64_t>& r() const noexcept { return r_; }
    [[nodiscard]] const std::vector<std::int64_t>& l() const noexcept { return l_; }

private:
    std::vector<std::int64_t> r_;
    std::vector<std::int64_t> l_;
};

/// T_n(Y, Z) = sum_i (n min(R_i, R_M(i)) - L_i^2) / sum_i L_i (n - L_i), where
/// M is the nearest-neighbour map of Z. Throws DegenerateResponse when y is
/// constant.
[[nodiscard]] DependenceEstimate codec_unconditional(const ResponseRanks& y, const NeighborMap& z_neighbors);

/// T_n(Y, Z | X) = sum_i (min(R_i, R_M(i)) - min(R_i, R_N(i))) / sum_i (R_i - min(R_i, R_N(i))),
/// with N the neighbour map of X and M the map of (X, Z). Throws
/// DegenerateConditioning when the denominator vanishes.
[[nodiscard]] DependenceEstimate codec_conditional(const ResponseRanks& y, const NeighborMap& x_neighbors,
                                                   const NeighborMap& xz_neighbors);

[[nodiscard]] DependenceEstimate codec_unconditional(std::span<const double> y,
                                                     const Eigen::Ref<const Eigen::MatrixXd>& z,
                                                     std::uint64_t seed);

/// Neighbour maps for x_cond and (x_cond, z) are drawn with tie seeds
/// derive_seed(seed, 0) and derive_seed(seed, 1) respectively.
[[nodiscard]] DependenceEstimate codec_conditional(std::span<const double> y,
                                                   const Eigen::Ref<const Eigen::MatrixXd>& z,
                                                   const Eigen::Ref<const Eigen::MatrixXd>& x_cond,
                                                   std::uint64_t seed);

}  // namespace codeclag
