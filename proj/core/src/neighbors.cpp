#include "rebal/neighbors.hpp"

#include "rebal/error.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace rebal {

NeighborIndex::NeighborIndex(Matrix points) : points_(std::move(points)) {
    for (double v : points_.data()) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, "neighbor index requires finite coordinates");
        }
    }
}

std::vector<std::size_t> NeighborIndex::nearest(std::span<const double> query, std::size_t k,
                                                std::optional<std::size_t> exclude) const {
    if (query.size() != points_.cols() && points_.rows() > 0) {
        throw Error(ErrorCode::DimensionMismatch, "query dimension differs from indexed points");
    }
    const bool excluding = exclude && *exclude < points_.rows();
    const std::size_t eligible = points_.rows() - (excluding ? 1 : 0);
    if (k > eligible) {
        throw Error(ErrorCode::KTooLarge, "k=" + std::to_string(k) + " exceeds " + std::to_string(eligible) +
                                              " eligible points");
    }

    std::vector<std::pair<double, std::size_t>> candidates;
    candidates.reserve(eligible);
    for (std::size_t i = 0; i < points_.rows(); ++i) {
        if (excluding && i == *exclude) {
            continue;
        }
        candidates.emplace_back(std::sqrt(squared_distance(query, points_.row(i))), i);
    }
    // pair ordering is (distance, index): exactly the tie rule
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end());

    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        out[i] = candidates[i].second;
    }
    return out;
}

std::vector<std::size_t> nearest_neighbors(const NeighborIndex& index, std::span<const double> query,
                                           std::size_t k, std::optional<std::size_t> exclude) {
    return index.nearest(query, k, exclude);
}

} // namespace rebal
