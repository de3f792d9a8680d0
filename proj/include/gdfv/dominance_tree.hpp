#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "gdfv/errors.hpp"
#include "gdfv/point_set.hpp"

namespace gdfv {

/// Per-query instrumentation. Fields accumulate, so one record can be carried
/// across several queries. `visits` counts every tree position touched
/// (internal nodes and leaves); `internal_visits` only the splitting nodes.
struct DomQueryStats {
    std::uint64_t visits = 0;
    std::uint64_t internal_visits = 0;
    std::uint64_t output_size = 0;
};

struct DomBuildStats {
    std::uint64_t internal_nodes = 0;
    std::uint64_t build_work = 0;    // recurrence work units: |B_u| per node, 1 per singleton
    std::uint64_t bulk_entries = 0;  // row indices stored in d = 0 leaves
    std::uint64_t memory_bytes = 0;
};

namespace detail {

inline std::uint32_t ceil_log2(std::uint64_t n) {
    return n <= 1 ? 0 : static_cast<std::uint32_t>(std::bit_width(n - 1));
}

inline std::uint64_t pow3(std::uint32_t e) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) r *= 3;
    return r;
}

}  // namespace detail

/// Divide-and-conquer structure answering online dominance-reporting queries:
/// given p, report the row indices of every stored point b with b[k] <= p[k]
/// on all coordinates.
///
/// Each internal node splits its point set on the last active coordinate at
/// the median value gamma (the coordinate of the floor(|B|/2)-th smallest,
/// stable order), into a minus child (coordinates <= gamma), a plus child
/// (>= gamma), and a projection of the minus half with that coordinate
/// dropped. A query descends minus-only when p is strictly below gamma, and
/// otherwise descends plus and the projection, whose points are already known
/// to be dominated on the dropped coordinate.
///
/// Leaves are not materialized as node records: children are tagged refs that
/// either point at an internal node, name a single row (checked against its
/// remaining active coordinates at query time), or name a run of the bulk
/// pool (points with no active coordinates left, emitted wholesale). The
/// stored node count is therefore exactly the internal-node count.
///
/// Immutable after construction; concurrent queries are safe.
template <std::totally_ordered Coord>
class DominanceTree {
  public:
    static constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

    /// Budget unit for this backend is plain bytes.
    static constexpr std::uint64_t budget_from_bytes(std::uint64_t bytes) noexcept {
        return bytes;
    }

    explicit DominanceTree(PointSet<Coord> points,
                           std::uint64_t memory_budget_bytes = kUnbounded)
        : points_(std::move(points)), budget_(memory_budget_bytes) {
        if (points_.empty())
            throw std::invalid_argument("DominanceTree: empty point set");
        if (points_.size() > kMaxPayload)
            throw BudgetError("DominanceTree: point count exceeds index range");

        std::vector<std::uint32_t> idx(points_.size());
        std::iota(idx.begin(), idx.end(), 0u);
        const auto dim = static_cast<std::uint32_t>(points_.dimension());
        if (dim >= 1) sort_by_coord(idx.data(), idx.size(), dim - 1);
        root_ = build(idx.data(), idx.size(), dim);

        stats_.memory_bytes = nodes_.size() * sizeof(Node) +
                              pool_.size() * sizeof(std::uint32_t) + points_.memory_bytes();
        check_size_bounds();
    }

    /// Calls sink(row) for every dominated point. Stats accumulate when given.
    template <class Sink>
    void query(std::span<const Coord> p, Sink&& sink, DomQueryStats* stats = nullptr) const {
        if (p.size() != points_.dimension())
            throw std::invalid_argument("DominanceTree::query: dimension mismatch");

        DomQueryStats local;
        Frame stack[kMaxDepth];
        int top = 0;
        stack[top++] = Frame{root_, static_cast<std::uint32_t>(points_.dimension())};
        while (top > 0) {
            const Frame f = stack[--top];
            ++local.visits;
            const std::uint32_t kind = f.ref.a & kKindMask;
            const std::uint32_t payload = f.ref.a & kPayloadMask;
            if (kind == kBulk) {
                for (std::uint32_t i = payload; i < payload + f.ref.b; ++i) sink(pool_[i]);
                local.output_size += f.ref.b;
            } else if (kind == kSingleton) {
                if (dominated_prefix(points_.point(payload), p, f.dims)) {
                    sink(payload);
                    ++local.output_size;
                }
            } else {
                ++local.internal_visits;
                if (top + 2 > kMaxDepth)
                    throw std::logic_error("DominanceTree::query: traversal stack overflow");
                const Node& nd = nodes_[payload];
                if (p[f.dims - 1] < nd.split) {
                    stack[top++] = Frame{nd.minus, f.dims};
                } else {
                    stack[top++] = Frame{nd.plus, f.dims};
                    stack[top++] = Frame{nd.proj, f.dims - 1};
                }
            }
        }
        if (stats) {
            stats->visits += local.visits;
            stats->internal_visits += local.internal_visits;
            stats->output_size += local.output_size;
        }
    }

    std::vector<std::uint32_t> query(std::span<const Coord> p,
                                     DomQueryStats* stats = nullptr) const {
        std::vector<std::uint32_t> out;
        query(p, [&out](std::uint32_t row) { out.push_back(row); }, stats);
        return out;
    }

    const DomBuildStats& build_stats() const noexcept { return stats_; }
    /// Stored node records (= internal nodes; leaves live inline in child refs).
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::uint64_t memory_bytes() const noexcept { return stats_.memory_bytes; }
    const PointSet<Coord>& points() const noexcept { return points_; }

  private:
    static constexpr std::uint32_t kInternal = 0u;
    static constexpr std::uint32_t kSingleton = 1u << 30;
    static constexpr std::uint32_t kBulk = 2u << 30;
    static constexpr std::uint32_t kKindMask = 3u << 30;
    static constexpr std::uint32_t kPayloadMask = ~kKindMask;
    static constexpr std::uint32_t kMaxPayload = kPayloadMask;
    static constexpr int kMaxDepth = 160;

    struct ChildRef {
        std::uint32_t a = 0;
        std::uint32_t b = 0;
    };
    struct Node {
        Coord split;
        ChildRef minus, plus, proj;
    };
    struct Frame {
        ChildRef ref;
        std::uint32_t dims;
    };

    void sort_by_coord(std::uint32_t* idx, std::size_t count, std::uint32_t k) {
        std::stable_sort(idx, idx + count, [this, k](std::uint32_t a, std::uint32_t b) {
            return points_.at(a, k) < points_.at(b, k);
        });
    }

    void check_budget(std::uint64_t bytes) const {
        if (bytes > budget_)
            throw BudgetError("DominanceTree: memory budget exceeded during build");
    }

    // idx[0..count) is sorted by coordinate dims-1 whenever dims >= 1.
    ChildRef build(std::uint32_t* idx, std::size_t count, std::uint32_t dims) {
        if (dims == 0) {
            const auto offset = static_cast<std::uint32_t>(pool_.size());
            if (pool_.size() + count > kMaxPayload)
                throw BudgetError("DominanceTree: bulk pool exceeds index range");
            pool_.insert(pool_.end(), idx, idx + count);
            stats_.bulk_entries += count;
            stats_.build_work += count;
            check_budget(pool_.size() * sizeof(std::uint32_t) + nodes_.size() * sizeof(Node));
            return ChildRef{kBulk | offset, static_cast<std::uint32_t>(count)};
        }
        if (count == 1) {
            stats_.build_work += 1;
            return ChildRef{kSingleton | idx[0], 0};
        }

        const std::size_t half = count / 2;
        const Coord gamma = points_.at(idx[half - 1], dims - 1);
        stats_.build_work += count;

        const auto node_index = static_cast<std::uint32_t>(nodes_.size());
        if (nodes_.size() + 1 > kMaxPayload)
            throw BudgetError("DominanceTree: node pool exceeds index range");
        nodes_.push_back(Node{gamma, {}, {}, {}});
        ++stats_.internal_nodes;
        check_budget(nodes_.size() * sizeof(Node) + pool_.size() * sizeof(std::uint32_t));

        // minus/plus reuse the parent's ordering in place; idx is never
        // mutated below this frame, so the projection can copy it afterwards.
        const ChildRef minus = build(idx, half, dims);
        const ChildRef plus = build(idx + half, count - half, dims);
        std::vector<std::uint32_t> proj_idx(idx, idx + half);
        if (dims - 1 >= 1) sort_by_coord(proj_idx.data(), proj_idx.size(), dims - 2);
        const ChildRef proj = build(proj_idx.data(), proj_idx.size(), dims - 1);
        nodes_[node_index].minus = minus;
        nodes_[node_index].plus = plus;
        nodes_[node_index].proj = proj;
        return ChildRef{kInternal | node_index, 0};
    }

    // Structural bounds every build must satisfy: node records within
    // 3^ceil(log2 n) and recurrence work within 3 n^(log2 3).
    void check_size_bounds() const {
        const std::uint64_t n = points_.size();
        const std::uint64_t node_bound = detail::pow3(detail::ceil_log2(n));
        if (stats_.internal_nodes > node_bound)
            throw std::logic_error("DominanceTree: node count exceeds 3^ceil(log2 n)");
        const double work_bound = 3.0 * std::pow(static_cast<double>(n), std::log2(3.0));
        if (static_cast<double>(stats_.build_work) > work_bound * (1.0 + 1e-9))
            throw std::logic_error("DominanceTree: build work exceeds 3 n^(log2 3)");
    }

    PointSet<Coord> points_;
    std::uint64_t budget_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> pool_;
    ChildRef root_{};
    DomBuildStats stats_;
};

template <std::totally_ordered Coord>
DominanceTree<Coord> build_tree(PointSet<Coord> points,
                                std::uint64_t memory_budget_bytes =
                                    DominanceTree<Coord>::kUnbounded) {
    return DominanceTree<Coord>(std::move(points), memory_budget_bytes);
}

template <std::totally_ordered Coord>
std::vector<std::uint32_t> query_tree(const DominanceTree<Coord>& tree,
                                      std::span<const Coord> p,
                                      DomQueryStats* stats = nullptr) {
    return tree.query(p, stats);
}

/// All (red, blue) index pairs where the blue point is coordinatewise <= the
/// red one: one tree over blue, one query per red point.
template <std::totally_ordered Coord>
std::vector<std::pair<std::uint32_t, std::uint32_t>> report_all_dominating_pairs(
    const PointSet<Coord>& red, const PointSet<Coord>& blue) {
    if (red.dimension() != blue.dimension())
        throw std::invalid_argument("report_all_dominating_pairs: dimension mismatch");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    if (blue.empty() || red.empty()) return pairs;
    DominanceTree<Coord> tree(blue);
    for (std::uint32_t r = 0; r < red.size(); ++r) {
        tree.query(red.point(r),
                   [&pairs, r](std::uint32_t b) { pairs.emplace_back(r, b); });
    }
    return pairs;
}

}  // namespace gdfv
