#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rebal {

/// Seeded generator with platform-independent draws.
///
/// std::mt19937_64 output is fully specified by the standard, but the
/// standard distributions are not, so every derived draw is computed here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). Unbiased (rejection sampling).
    std::size_t uniform_index(std::size_t bound);

    /// Standard normal via Box-Muller.
    double normal();

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = uniform_index(i);
            std::swap(values[i - 1], values[j]);
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        shuffle(std::span<T>(values));
    }

private:
    std::mt19937_64 engine_;
};

/// Mixes a base seed with a stream id into an independent sub-seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

} // namespace rebal
