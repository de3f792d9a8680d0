#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "gdfv/dominance_tree.hpp"
#include "gdfv/errors.hpp"
#include "gdfv/point_set.hpp"

namespace gdfv {

/// Lookup-table dominance reporting: exponential preprocessing, logarithmic
/// queries. For every coordinate k the points are sorted by their k-th
/// coordinate; the answer for a query depends only on the rank tuple
/// (r_1..r_d), where r_k counts the points whose k-th coordinate is <= p[k].
/// All (|B|+1)^d rank tuples are precomputed, each entry holding the
/// intersection of the d sorted prefixes. A query is d binary searches plus
/// one table lookup.
///
/// The structure is exponential by design and intended for small point sets;
/// exceeding the stored-entry budget refuses the build outright.
template <std::totally_ordered Coord>
class DominanceTable {
  public:
    static constexpr std::uint64_t kDefaultEntryBudget = std::uint64_t{1} << 30;

    /// Budget unit for this backend is stored index entries.
    static constexpr std::uint64_t budget_from_bytes(std::uint64_t bytes) noexcept {
        return bytes / sizeof(std::uint32_t);
    }

    explicit DominanceTable(PointSet<Coord> points,
                            std::uint64_t max_stored_entries = kDefaultEntryBudget)
        : points_(std::move(points)) {
        if (points_.empty())
            throw std::invalid_argument("DominanceTable: empty point set");
        const std::uint64_t n = points_.size();
        const std::uint64_t d = points_.dimension();

        // (n+1)^d table cells, checked against the budget before anything
        // is allocated. Cells are charged against the entry budget as well,
        // since the offset array alone is real memory.
        std::uint64_t cells = 1;
        for (std::uint64_t k = 0; k < d; ++k) {
            if (cells > max_stored_entries / (n + 1))
                throw BudgetError("DominanceTable: (|B|+1)^d exceeds the entry budget");
            cells *= n + 1;
        }
        if (cells > max_stored_entries || cells > (std::uint64_t{1} << 28))
            throw BudgetError("DominanceTable: (|B|+1)^d exceeds the entry budget");

        // Per-coordinate stable orders and 1-based ranks.
        order_.resize(d);
        sorted_coords_.resize(d);
        std::vector<std::uint32_t> rank(n * std::max<std::uint64_t>(d, 1));
        for (std::uint64_t k = 0; k < d; ++k) {
            auto& ord = order_[k];
            ord.resize(n);
            std::iota(ord.begin(), ord.end(), 0u);
            std::stable_sort(ord.begin(), ord.end(),
                             [this, k](std::uint32_t a, std::uint32_t b) {
                                 return points_.at(a, k) < points_.at(b, k);
                             });
            auto& sc = sorted_coords_[k];
            sc.reserve(n);
            for (std::uint64_t pos = 0; pos < n; ++pos) {
                sc.push_back(points_.at(ord[pos], k));
                rank[ord[pos] * d + k] = static_cast<std::uint32_t>(pos + 1);
            }
        }

        // Entry sets grow along the first coordinate: the tuple with r_1
        // decremented differs by at most the point of rank r_1, which joins
        // iff its rank on every other coordinate is within that prefix.
        offsets_.assign(cells + 1, 0);
        std::uint64_t stored = 0;
        std::vector<std::uint32_t> tuple(d, 0);
        if (d == 0) {
            offsets_[1] = n;
            pool_.resize(n);
            std::iota(pool_.begin(), pool_.end(), 0u);
            stored = n;
        } else {
            for (std::uint64_t cell = 0; cell < cells; ++cell) {
                const std::uint32_t r1 = tuple[0];
                if (r1 > 0) {
                    const std::uint64_t pred_begin = offsets_[cell - 1];
                    const std::uint64_t pred_end = offsets_[cell];
                    const std::size_t old_size = pool_.size();
                    pool_.resize(old_size + (pred_end - pred_begin));
                    std::copy(pool_.data() + pred_begin, pool_.data() + pred_end,
                              pool_.data() + old_size);
                    stored += pred_end - pred_begin;
                    const std::uint32_t candidate = order_[0][r1 - 1];
                    bool inside = true;
                    for (std::uint64_t k = 1; k < d; ++k)
                        if (rank[candidate * d + k] > tuple[k]) {
                            inside = false;
                            break;
                        }
                    if (inside) {
                        pool_.push_back(candidate);
                        ++stored;
                    }
                    if (stored + cells > max_stored_entries)
                        throw BudgetError("DominanceTable: stored entries exceed the budget");
                }
                offsets_[cell + 1] = pool_.size();
                for (std::uint64_t k = 0; k < d; ++k) {
                    if (++tuple[k] <= n) break;
                    tuple[k] = 0;
                }
            }
        }
        entry_count_ = cells;
        stored_entries_ = stored;
    }

    template <class Sink>
    void query(std::span<const Coord> p, Sink&& sink, DomQueryStats* stats = nullptr) const {
        if (p.size() != points_.dimension())
            throw std::invalid_argument("DominanceTable::query: dimension mismatch");
        const std::uint64_t n = points_.size();
        const std::uint64_t d = points_.dimension();
        std::uint64_t cell = 0;
        std::uint64_t radix = 1;
        for (std::uint64_t k = 0; k < d; ++k) {
            const auto& sc = sorted_coords_[k];
            const auto rk = static_cast<std::uint64_t>(
                std::upper_bound(sc.begin(), sc.end(), p[k]) - sc.begin());
            cell += rk * radix;
            radix *= n + 1;
        }
        const std::uint64_t begin = offsets_[cell];
        const std::uint64_t end = offsets_[cell + 1];
        for (std::uint64_t i = begin; i < end; ++i) sink(pool_[i]);
        if (stats) {
            stats->visits += d * (detail::ceil_log2(n + 1) + 1);
            stats->output_size += end - begin;
        }
    }

    std::vector<std::uint32_t> query(std::span<const Coord> p,
                                     DomQueryStats* stats = nullptr) const {
        std::vector<std::uint32_t> out;
        query(p, [&out](std::uint32_t row) { out.push_back(row); }, stats);
        return out;
    }

    std::uint64_t entry_count() const noexcept { return entry_count_; }
    std::uint64_t stored_entries() const noexcept { return stored_entries_; }
    std::uint64_t memory_bytes() const noexcept {
        return pool_.size() * sizeof(std::uint32_t) +
               offsets_.size() * sizeof(std::uint64_t) + points_.memory_bytes();
    }
    const PointSet<Coord>& points() const noexcept { return points_; }

  private:
    PointSet<Coord> points_;
    std::vector<std::vector<std::uint32_t>> order_;
    std::vector<std::vector<Coord>> sorted_coords_;
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint32_t> pool_;
    std::uint64_t entry_count_ = 0;
    std::uint64_t stored_entries_ = 0;
};

template <std::totally_ordered Coord>
DominanceTable<Coord> build_table(PointSet<Coord> points,
                                  std::uint64_t max_stored_entries =
                                      DominanceTable<Coord>::kDefaultEntryBudget) {
    return DominanceTable<Coord>(std::move(points), max_stored_entries);
}

template <std::totally_ordered Coord>
std::vector<std::uint32_t> query_table(const DominanceTable<Coord>& table,
                                       std::span<const Coord> p,
                                       DomQueryStats* stats = nullptr) {
    return table.query(p, stats);
}

}  // namespace gdfv
