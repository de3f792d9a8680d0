#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>

#include "gdfv/extended_value.hpp"

namespace gdfv {

/// Lexicographically ordered triple <inf_count, value, tag>.
///
/// Encodes extended reals for the dominance reduction: <k, x, .> reads as
/// "k * inf + x", so a finite matrix entry x lifts to <0, x, 0> and -inf to
/// <-1, 0, 0>. Vector entries carry their (1-based) column index in the tag,
/// which makes every candidate sum distinct and turns argmax ties into exact
/// comparisons won by the larger column.
///
/// inf_count and tag are signed: componentwise subtraction, which the block
/// engine uses to form difference vectors, drives both below zero.
struct Triple {
    std::int32_t inf_count = 0;
    double value = 0.0;
    std::int32_t tag = 0;

    constexpr Triple() = default;
    constexpr Triple(std::int32_t inf, double val, std::int32_t tg)
        : inf_count(inf), value(val), tag(tg) {
        if (val != val) throw std::invalid_argument("Triple: NaN value");
    }

    friend constexpr bool operator==(const Triple& a, const Triple& b) noexcept {
        return a.inf_count == b.inf_count && a.value == b.value && a.tag == b.tag;
    }
    friend constexpr std::strong_ordering operator<=>(const Triple& a, const Triple& b) noexcept {
        if (a.inf_count != b.inf_count)
            return a.inf_count < b.inf_count ? std::strong_ordering::less
                                             : std::strong_ordering::greater;
        if (a.value != b.value)
            return a.value < b.value ? std::strong_ordering::less : std::strong_ordering::greater;
        return a.tag <=> b.tag;
    }

    friend constexpr Triple operator+(const Triple& a, const Triple& b) {
        return Triple(a.inf_count + b.inf_count, a.value + b.value, a.tag + b.tag);
    }
    friend constexpr Triple operator-(const Triple& a, const Triple& b) {
        return Triple(a.inf_count - b.inf_count, a.value - b.value, a.tag - b.tag);
    }
};

inline Triple lift_matrix_entry(ExtendedValue x) {
    return x.is_finite() ? Triple(0, x.value(), 0) : Triple(-1, 0.0, 0);
}

/// Lifts a vector entry; column tags start at 1 (tag 0 marks matrix entries).
inline Triple lift_vector_entry(ExtendedValue x, std::int32_t column) {
    if (column < 1)
        throw std::invalid_argument("lift_vector_entry: column tags start at 1");
    return x.is_finite() ? Triple(0, x.value(), column) : Triple(-1, 0.0, column);
}

struct LoweredTriple {
    ExtendedValue value;
    std::int32_t argmax_column = 0;  // 1-based
};

/// Maps a product triple back to an extended real plus the column that
/// achieved the maximum. Only triples formed as matrix-lift + vector-lift
/// sums qualify; their tag is the vector entry's column index.
inline LoweredTriple lower(const Triple& t) {
    if (t.tag < 1)
        throw std::invalid_argument("lower: tag 0 marks a matrix entry, not a product triple");
    if (t.inf_count == 0) return {ExtendedValue::finite(t.value), t.tag};
    if (t.inf_count < 0) return {ExtendedValue::neg_infinity(), t.tag};
    throw std::invalid_argument("lower: positive inf_count cannot arise from lifted inputs");
}

}  // namespace gdfv
