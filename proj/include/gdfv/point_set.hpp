#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace gdfv {

/// A set of d-dimensional points over a totally ordered coordinate type.
/// Points keep their original (0-based) row index, which is what dominance
/// queries report. Dimension 0 is allowed: every point trivially dominates
/// and is dominated.
template <std::totally_ordered Coord>
class PointSet {
  public:
    PointSet(std::size_t dimension, std::size_t count, std::vector<Coord> row_major)
        : dim_(dimension), count_(count), coords_(std::move(row_major)) {
        if (coords_.size() != dim_ * count_)
            throw std::invalid_argument("PointSet: coordinate buffer size mismatch");
    }

    static PointSet from_points(const std::vector<std::vector<Coord>>& pts) {
        if (pts.empty()) return PointSet(0, 0, {});
        const std::size_t d = pts.front().size();
        std::vector<Coord> flat;
        flat.reserve(pts.size() * d);
        for (const auto& p : pts) {
            if (p.size() != d)
                throw std::invalid_argument("PointSet: points have differing dimensions");
            flat.insert(flat.end(), p.begin(), p.end());
        }
        return PointSet(d, pts.size(), std::move(flat));
    }

    std::size_t dimension() const noexcept { return dim_; }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }

    const Coord& at(std::size_t row, std::size_t k) const { return coords_[row * dim_ + k]; }

    std::span<const Coord> point(std::size_t row) const {
        return std::span<const Coord>(coords_.data() + row * dim_, dim_);
    }

    std::size_t memory_bytes() const noexcept { return coords_.capacity() * sizeof(Coord); }

  private:
    std::size_t dim_;
    std::size_t count_;
    std::vector<Coord> coords_;
};

/// True iff candidate <= p on the first `dims` coordinates.
template <std::totally_ordered Coord>
bool dominated_prefix(std::span<const Coord> candidate, std::span<const Coord> p,
                      std::size_t dims) {
    for (std::size_t k = 0; k < dims; ++k)
        if (p[k] < candidate[k]) return false;
    return true;
}

}  // namespace gdfv
