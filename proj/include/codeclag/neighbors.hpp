#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace codeclag {

/// index[i] is the (0-based) nearest neighbour of row i, never i itself.
/// Reported 1-based in user-facing output.
struct NeighborMap {
    std::vector<std::size_t> index;
    std::uint64_t tie_seed = 0;
};

enum class NeighborSearch { automatic, kd_tree, brute_force };

/// Highest dimension at which `automatic` still uses the k-d tree.
inline constexpr std::size_t kKdTreeMaxDim = 16;

/// Euclidean nearest neighbour of every row of `points` (n x d) among the
/// other rows. Exact distance ties (including duplicate rows) are broken
/// uniformly at random: rows are visited in order and one draw from a
/// generator seeded by `tie_seed` picks among the tied candidates sorted by
/// index. Both search paths therefore return identical maps.
[[nodiscard]] NeighborMap nearest_neighbors(const Eigen::Ref<const Eigen::MatrixXd>& points,
                                            std::uint64_t tie_seed,
                                            NeighborSearch method = NeighborSearch::automatic);

}  // namespace codeclag
