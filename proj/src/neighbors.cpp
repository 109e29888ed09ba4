#include "codeclag/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "codeclag/errors.hpp"
#include "codeclag/random.hpp"

namespace codeclag {

namespace {

constexpr std::size_t kLeafSize = 8;

// Row-major copy of the point set; distances are always accumulated over
// coordinates 0..d-1 in order so that both search paths produce the same bits.
class PointTable {
public:
    explicit PointTable(const Eigen::Ref<const Eigen::MatrixXd>& points)
        : n_(static_cast<std::size_t>(points.rows())),
          d_(static_cast<std::size_t>(points.cols())),
          data_(n_ * d_) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = 0; k < d_; ++k) {
                data_[i * d_ + k] = points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            }
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return d_; }
    [[nodiscard]] double at(std::size_t i, std::size_t k) const noexcept { return data_[i * d_ + k]; }

    [[nodiscard]] double sq_dist(std::size_t a, std::size_t b) const noexcept {
        const double* pa = &data_[a * d_];
        const double* pb = &data_[b * d_];
        double s = 0.0;
        for (std::size_t k = 0; k < d_; ++k) {
            const double diff = pa[k] - pb[k];
            s += diff * diff;
        }
        return s;
    }

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<double> data_;
};

// Running set of equidistant nearest candidates.
struct TieSet {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> candidates;

    void offer(std::size_t j, double dist) {
        if (dist < best) {
            best = dist;
            candidates.clear();
            candidates.push_back(j);
        } else if (dist == best) {
            candidates.push_back(j);
        }
    }
};

class KdTree {
public:
    explicit KdTree(const PointTable& table) : table_(table), order_(table.size()) {
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        nodes_.reserve(2 * table.size() / kLeafSize + 2);
        build(0, order_.size());
    }

    void query(std::size_t i, TieSet& ties) const { search(0, i, ties); }

private:
    struct Node {
        std::size_t begin = 0;
        std::size_t end = 0;
        std::size_t split_dim = 0;
        double split_value = 0.0;
        std::size_t left = 0;  // 0 means leaf
        std::size_t right = 0;
    };

    std::size_t build(std::size_t begin, std::size_t end) {
        const std::size_t id = nodes_.size();
        nodes_.push_back(Node{begin, end});
        if (end - begin <= kLeafSize) return id;

        // split on the dimension with the widest spread
        std::size_t best_dim = 0;
        double best_spread = -1.0;
        for (std::size_t k = 0; k < table_.dim(); ++k) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t p = begin; p < end; ++p) {
                const double v = table_.at(order_[p], k);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi - lo > best_spread) {
                best_spread = hi - lo;
                best_dim = k;
            }
        }
        if (best_spread <= 0.0) return id;  // all points identical: keep as leaf

        const std::size_t mid = begin + (end - begin) / 2;
        auto first = order_.begin();
        std::nth_element(first + static_cast<std::ptrdiff_t>(begin), first + static_cast<std::ptrdiff_t>(mid),
                         first + static_cast<std::ptrdiff_t>(end), [&](std::size_t a, std::size_t b) {
                             return table_.at(a, best_dim) < table_.at(b, best_dim);
                         });
        const double split = table_.at(order_[mid], best_dim);
        nodes_[id].split_dim = best_dim;
        nodes_[id].split_value = split;
        const std::size_t left = build(begin, mid);
        const std::size_t right = build(mid, end);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void search(std::size_t node_id, std::size_t query, TieSet& ties) const {
        const Node& node = nodes_[node_id];
        if (node.left == 0) {
            for (std::size_t p = node.begin; p < node.end; ++p) {
                const std::size_t j = order_[p];
                if (j != query) ties.offer(j, table_.sq_dist(query, j));
            }
            return;
        }
        // left holds coordinates <= split, right holds >= split
        const double diff = table_.at(query, node.split_dim) - node.split_value;
        const std::size_t near = diff <= 0.0 ? node.left : node.right;
        const std::size_t far = diff <= 0.0 ? node.right : node.left;
        search(near, query, ties);
        if (diff * diff <= ties.best) search(far, query, ties);
    }

    const PointTable& table_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

std::size_t pick(TieSet& ties, Rng& rng) {
    if (ties.candidates.size() == 1) return ties.candidates.front();
    std::sort(ties.candidates.begin(), ties.candidates.end());
    std::uniform_int_distribution<std::size_t> draw(0, ties.candidates.size() - 1);
    return ties.candidates[draw(rng)];
}

}  // namespace

NeighborMap nearest_neighbors(const Eigen::Ref<const Eigen::MatrixXd>& points, std::uint64_t tie_seed,
                              NeighborSearch method) {
    const auto n = static_cast<std::size_t>(points.rows());
    const auto d = static_cast<std::size_t>(points.cols());
    if (n < 2) throw Error(ErrorKind::InsufficientData, "nearest neighbours need at least 2 points");
    if (d < 1) throw Error(ErrorKind::InvalidInput, "points need at least one coordinate");
    if (!points.allFinite()) throw Error(ErrorKind::InvalidInput, "points contain non-finite entries");

    if (method == NeighborSearch::automatic) {
        method = d <= kKdTreeMaxDim ? NeighborSearch::kd_tree : NeighborSearch::brute_force;
    }

    const PointTable table(points);
    NeighborMap out{std::vector<std::size_t>(n), tie_seed};
    Rng rng = make_rng({tie_seed});
    TieSet ties;

    if (method == NeighborSearch::kd_tree) {
        const KdTree tree(table);
        for (std::size_t i = 0; i < n; ++i) {
            ties.best = std::numeric_limits<double>::infinity();
            ties.candidates.clear();
            tree.query(i, ties);
            out.index[i] = pick(ties, rng);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            ties.best = std::numeric_limits<double>::infinity();
            ties.candidates.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) ties.offer(j, table.sq_dist(i, j));
            }
            out.index[i] = pick(ties, rng);
        }
    }
    return out;
}

}  // namespace codeclag
