#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "gdfv/dominance_tree.hpp"
#include "gdfv/maxplus.hpp"
#include "gdfv/point_set.hpp"
#include "gdfv/triple.hpp"

namespace gdfv {

/// Backends usable behind the block multiplier: built from a PointSet of
/// Triples under a budget, queried with a sink. DominanceTree (budget in
/// bytes) and DominanceTable (budget in stored entries) both qualify.
template <class B>
concept DominanceBackend = requires(B b, PointSet<Triple> pts, std::uint64_t budget,
                                    std::span<const Triple> p, DomQueryStats* stats) {
    B(std::move(pts), budget);
    b.query(p, [](std::uint32_t) {}, stats);
    { b.memory_bytes() } -> std::convertible_to<std::uint64_t>;
    { B::budget_from_bytes(budget) } -> std::convertible_to<std::uint64_t>;
};

/// Online (max,+)-multiplier for a narrow m x t block.
///
/// Preprocessing lifts every entry to a triple and builds, for each pivot
/// column j*, a dominance structure over the m difference vectors
/// (A[i,1]-A[i,j*], ..., A[i,t]-A[i,j*]). To multiply with a vector b, each
/// pivot's structure is queried with (b[j*]-b[1], ..., b[j*]-b[t]): the rows
/// it reports are exactly those whose maximum is attained at column j*, so
/// each row is written exactly once across the t queries. Vector lifts carry
/// column tags, which makes the maxima unique even under value ties (won by
/// the larger column) and under -inf entries.
template <DominanceBackend Backend>
class BlockMultiplier {
  public:
    static constexpr std::uint64_t kUnboundedBytes =
        std::numeric_limits<std::uint64_t>::max();

    BlockMultiplier(const MaxPlusMatrix& block, std::uint64_t budget_bytes = kUnboundedBytes)
        : block_(block), memory_bytes_(0) {
        const std::size_t m = block.rows();
        const std::size_t t = block.cols();
        const std::uint64_t backend_budget = Backend::budget_from_bytes(budget_bytes);

        std::vector<Triple> lifted(m * t);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < t; ++j)
                lifted[i * t + j] = lift_matrix_entry(block.at(i, j));

        pivots_.reserve(t);
        for (std::size_t pivot = 0; pivot < t; ++pivot) {
            std::vector<Triple> coords(m * t);
            for (std::size_t i = 0; i < m; ++i) {
                const Triple base = lifted[i * t + pivot];
                for (std::size_t j = 0; j < t; ++j)
                    coords[i * t + j] = lifted[i * t + j] - base;
            }
            pivots_.emplace_back(PointSet<Triple>(t, m, std::move(coords)), backend_budget);
            memory_bytes_ += pivots_.back().memory_bytes();
        }
    }

    std::size_t rows() const noexcept { return block_.rows(); }
    std::size_t width() const noexcept { return block_.cols(); }
    std::uint64_t memory_bytes() const noexcept { return memory_bytes_; }

    /// Computes block * b with 1..t local argmax columns. Verifies the
    /// single-write property: every row must be reported by exactly one
    /// pivot query, anything else signals a broken tie encoding.
    void multiply(std::span<const ExtendedValue> b, MulResult& out,
                  MulStats* stats = nullptr) const {
        const std::size_t m = block_.rows();
        const std::size_t t = block_.cols();
        if (b.size() != t)
            throw std::invalid_argument("BlockMultiplier::multiply: dimension mismatch");

        out.values.assign(m, ExtendedValue::neg_infinity());
        out.argmax_cols.assign(m, 0);

        std::vector<Triple> lifted_b(t);
        for (std::size_t j = 0; j < t; ++j)
            lifted_b[j] = lift_vector_entry(b[j], static_cast<std::int32_t>(j + 1));

        DomQueryStats qstats;
        std::vector<Triple> qpoint(t);
        std::size_t written = 0;
        for (std::size_t pivot = 0; pivot < t; ++pivot) {
            for (std::size_t j = 0; j < t; ++j)
                qpoint[j] = lifted_b[pivot] - lifted_b[j];
            const ExtendedValue pivot_term = b[pivot];
            pivots_[pivot].query(
                std::span<const Triple>(qpoint),
                [&](std::uint32_t row) {
                    if (out.argmax_cols[row] != 0)
                        throw std::logic_error(
                            "BlockMultiplier: row reported by two pivot queries");
                    out.values[row] = block_.at(row, pivot) + pivot_term;
                    out.argmax_cols[row] = static_cast<std::int32_t>(pivot + 1);
                    ++written;
                },
                &qstats);
        }
        if (written != m)
            throw std::logic_error("BlockMultiplier: a row was never reported");

        if (stats) {
            stats->tree_visits += qstats.visits;
            stats->result_writes += written;
        }
    }

  private:
    MaxPlusMatrix block_;
    std::vector<Backend> pivots_;
    std::uint64_t memory_bytes_;
};

}  // namespace gdfv
