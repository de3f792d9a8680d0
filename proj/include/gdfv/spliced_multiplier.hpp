#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gdfv/block_multiplier.hpp"
#include "gdfv/errors.hpp"
#include "gdfv/maxplus.hpp"

namespace gdfv {

/// Online (max,+)-multiplier for a wide m x n matrix, built by splicing the
/// columns into ceil(n/t) blocks of width t (the last block padded with -inf
/// columns) and max-merging the per-block products rowwise.
///
/// Merge ties on value go to the larger global column index, independent of
/// block evaluation order, which keeps the output consistent with
/// multiply_trivial's largest-column tie-break. Padding columns can only
/// surface as an argmax when an entire row evaluates to -inf.
template <DominanceBackend Backend>
class SplicedMultiplier {
  public:
    static constexpr std::uint64_t kDefaultBudgetBytes = std::uint64_t{3} << 30;

    SplicedMultiplier(const MaxPlusMatrix& a, std::size_t block_width,
                      std::uint64_t budget_bytes = kDefaultBudgetBytes)
        : rows_(a.rows()), cols_(a.cols()), width_(block_width) {
        if (block_width == 0)
            throw std::invalid_argument("SplicedMultiplier: block width must be >= 1");
        padded_ = (cols_ + width_ - 1) / width_ * width_;
        const std::size_t nblocks = padded_ / width_;
        blocks_.reserve(nblocks);
        std::uint64_t used = 0;
        for (std::size_t blk = 0; blk < nblocks; ++blk) {
            MaxPlusMatrix slice(rows_, width_);  // fills with -inf
            const std::size_t col0 = blk * width_;
            for (std::size_t j = 0; j < width_ && col0 + j < cols_; ++j)
                for (std::size_t i = 0; i < rows_; ++i)
                    slice.at(i, j) = a.at(i, col0 + j);
            blocks_.emplace_back(slice, budget_bytes);
            used += blocks_.back().memory_bytes();
            if (used > budget_bytes)
                throw BudgetError("SplicedMultiplier: memory budget exceeded");
        }
        memory_bytes_ = used;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t padded_cols() const noexcept { return padded_; }
    std::size_t block_width() const noexcept { return width_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    std::uint64_t memory_bytes() const noexcept { return memory_bytes_; }

    /// Computes A * b with global 1..padded_cols() argmax columns.
    void multiply(std::span<const ExtendedValue> b, MulResult& out,
                  MulStats* stats = nullptr) const {
        if (b.size() != cols_)
            throw std::invalid_argument("SplicedMultiplier::multiply: dimension mismatch");

        out.values.assign(rows_, ExtendedValue::neg_infinity());
        out.argmax_cols.assign(rows_, 0);

        std::vector<ExtendedValue> b_slice(width_);
        MulResult local;
        for (std::size_t blk = 0; blk < blocks_.size(); ++blk) {
            const std::size_t col0 = blk * width_;
            for (std::size_t j = 0; j < width_; ++j)
                b_slice[j] = col0 + j < cols_ ? b[col0 + j] : ExtendedValue::neg_infinity();

            blocks_[blk].multiply(b_slice, local, stats);

            const auto offset = static_cast<std::int32_t>(col0);
            for (std::size_t i = 0; i < rows_; ++i) {
                const ExtendedValue cand = local.values[i];
                const std::int32_t gcol = offset + local.argmax_cols[i];
                if (cand > out.values[i] ||
                    (cand == out.values[i] && gcol > out.argmax_cols[i])) {
                    out.values[i] = cand;
                    out.argmax_cols[i] = gcol;
                }
            }
            if (stats) stats->merge_comparisons += rows_;
        }
    }

  private:
    std::size_t rows_, cols_, width_, padded_ = 0;
    std::vector<BlockMultiplier<Backend>> blocks_;
    std::uint64_t memory_bytes_ = 0;
};

}  // namespace gdfv
