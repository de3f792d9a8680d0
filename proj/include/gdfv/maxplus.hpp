#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gdfv/extended_value.hpp"

namespace gdfv {

/// Dense matrix over R u {-inf}, row-major.
class MaxPlusMatrix {
  public:
    MaxPlusMatrix(std::size_t rows, std::size_t cols,
                  ExtendedValue fill = ExtendedValue::neg_infinity())
        : rows_(rows), cols_(cols), entries_(rows * cols, fill) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("MaxPlusMatrix: dimensions must be positive");
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    ExtendedValue& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const ExtendedValue& at(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }

    std::span<const ExtendedValue> row(std::size_t i) const {
        return std::span<const ExtendedValue>(entries_.data() + i * cols_, cols_);
    }

  private:
    std::size_t rows_, cols_;
    std::vector<ExtendedValue> entries_;
};

/// Result of a (max,+) matrix-vector product: per row the maximum of
/// A[i,j] + b[j] and the 1-based column achieving it. Whenever the value is
/// finite, values[i] == A[i, argmax_cols[i]] + b[argmax_cols[i]]; for rows
/// whose value is -inf the column is valid but arbitrary (it may name a
/// padding column), so check the value before trusting it.
struct MulResult {
    std::vector<ExtendedValue> values;
    std::vector<std::int32_t> argmax_cols;
};

/// Operation counters shared by the multiplication engines. Fields
/// accumulate across calls.
struct MulStats {
    std::uint64_t trivial_comparisons = 0;  // rows * cols per trivial multiply
    std::uint64_t tree_visits = 0;          // dominance-structure positions touched
    std::uint64_t result_writes = 0;        // m[i] <- A[i,j*] + b[j*] executions
    std::uint64_t merge_comparisons = 0;    // cross-block rowwise max merging

    std::uint64_t work_units() const noexcept {
        return tree_visits + result_writes + merge_comparisons;
    }
};

/// Direct evaluation of the product definition. Argmax ties go to the
/// largest column index, matching the triple encoding used by the block
/// engine, so outputs of the two routes are comparable.
inline MulResult multiply_trivial(const MaxPlusMatrix& a, std::span<const ExtendedValue> b,
                                  MulStats* stats = nullptr) {
    if (b.size() != a.cols())
        throw std::invalid_argument("multiply_trivial: dimension mismatch");
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    MulResult out;
    out.values.resize(m);
    out.argmax_cols.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto row = a.row(i);
        ExtendedValue best = row[0] + b[0];
        std::size_t arg = 0;
        for (std::size_t j = 1; j < n; ++j) {
            const ExtendedValue cand = row[j] + b[j];
            if (cand >= best) {
                best = cand;
                arg = j;
            }
        }
        out.values[i] = best;
        out.argmax_cols[i] = static_cast<std::int32_t>(arg + 1);
    }
    if (stats) stats->trivial_comparisons += static_cast<std::uint64_t>(m) * n;
    return out;
}

}  // namespace gdfv
