#pragma once

#include "rebal/matrix.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rebal {

/// Exact Euclidean neighbor search by brute force.
class NeighborIndex {
public:
    /// Throws InvalidArgument on non-finite coordinates.
    explicit NeighborIndex(Matrix points);

    const Matrix& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.rows(); }

    /// The k indices nearest to `query`, ascending by distance, ties by
    /// ascending index. `exclude` removes one index from consideration.
    /// Throws KTooLarge when fewer than k points are eligible.
    std::vector<std::size_t> nearest(std::span<const double> query, std::size_t k,
                                     std::optional<std::size_t> exclude = std::nullopt) const;

    /// Neighbors of stored point i, excluding i itself.
    std::vector<std::size_t> nearest_to_member(std::size_t i, std::size_t k) const {
        return nearest(points_.row(i), k, i);
    }

private:
    Matrix points_;
};

/// Free-function form of NeighborIndex::nearest.
std::vector<std::size_t> nearest_neighbors(const NeighborIndex& index, std::span<const double> query,
                                           std::size_t k, std::optional<std::size_t> exclude = std::nullopt);

} // namespace rebal
