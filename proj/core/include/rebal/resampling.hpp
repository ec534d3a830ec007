#pragma once

#include "rebal/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rebal {

enum class ResampleStrategy { None, Smote, NearMiss1, NearMiss2, NearMiss3, RandomOver, RandomUnder };

std::string_view to_string(ResampleStrategy s) noexcept;
std::optional<ResampleStrategy> parse_resample_strategy(std::string_view text) noexcept;
/// Comma-separated list of accepted strategy names.
std::string_view resample_strategy_names() noexcept;

/// How a synthetic point moves away from its seed point x toward neighbor n.
enum class SmoteMode {
    Canonical,         ///< s = x + u * (n - x), on the segment between x and n
    AbsoluteDistance,  ///< s_j = x_j + u * |x_j - n_j|, never decreases a coordinate
};

std::string_view to_string(SmoteMode m) noexcept;
/// Accepts "canonical" and "paper_literal".
std::optional<SmoteMode> parse_smote_mode(std::string_view text) noexcept;

struct ResampleConfig {
    ResampleStrategy strategy = ResampleStrategy::None;
    std::size_t k = 5;
    /// SMOTE: per-point multiplier N. NearMiss-1/2 and random_under: kept
    /// majority size. random_over: final minority size. Unset picks the
    /// value that balances the classes.
    std::optional<std::size_t> amount;
    std::uint64_t seed = 0;
    SmoteMode smote_mode = SmoteMode::Canonical;
    unsigned threads = 1;

    friend bool operator==(const ResampleConfig&, const ResampleConfig&) = default;
};

/// Rows of a labelled matrix split into majority (C0) and minority (C1).
struct ClassPartition {
    Matrix majority;
    Matrix minority;
    std::vector<std::size_t> majority_rows; ///< source row of each majority point
    std::vector<std::size_t> minority_rows;
    std::vector<std::string> feature_names;
    int majority_label = 0;
    int minority_label = 1;
};

/// The less frequent label is the minority; on a tie label 1 is.
ClassPartition partition_classes(const FeatureMatrix& features, std::span<const int> labels);

// SMOTE -------------------------------------------------------------------

struct SmoteParams {
    std::size_t k = 5;
    std::size_t multiplier = 1; ///< synthetic points per minority point
    std::uint64_t seed = 0;
    SmoteMode mode = SmoteMode::Canonical;
    /// Replaces every interpolation draw; for reproducing hand examples.
    std::optional<double> fixed_u;
    unsigned threads = 1;
};

/// Generating pair of one synthetic point (indices into the minority set).
struct SyntheticOrigin {
    std::size_t point = 0;
    std::size_t neighbor = 0;
    double u = 0.0;
};

struct SmoteResult {
    Matrix samples;
    std::vector<SyntheticOrigin> origins;
};

/// Exactly multiplier * |minority| synthetic points, grouped by seed point
/// in minority order. Neighbors are drawn without replacement while
/// multiplier <= k and with replacement beyond that.
SmoteResult smote(const Matrix& minority, const SmoteParams& params);

/// One synthetic point from its generating pair.
void smote_interpolate(std::span<const double> point, std::span<const double> neighbor, double u,
                       SmoteMode mode, std::span<double> out);

// NearMiss ----------------------------------------------------------------

/// Indices into partition.majority that survive undersampling.
///
/// Variants 1 and 2 rank majority points by mean distance to their k
/// nearest (1) or k farthest (2) minority points and keep the `target`
/// smallest, returned by ascending score then index. Variant 3 keeps the
/// k nearest majority points of every minority point, deduplicated and
/// returned in ascending index order; `target` is ignored.
std::vector<std::size_t> nearmiss(const ClassPartition& partition, int variant, std::size_t k,
                                  std::size_t target, unsigned threads = 1);

/// Per-majority-point NearMiss-1/2 scores.
std::vector<double> nearmiss_scores(const ClassPartition& partition, int variant, std::size_t k,
                                    unsigned threads = 1);

// Rebalancing -------------------------------------------------------------

struct RowOrigin {
    enum class Kind { Original, Duplicate, Synthetic };
    Kind kind = Kind::Original;
    std::size_t source = 0;                ///< input row (seed point for synthetic rows)
    std::optional<std::size_t> neighbor;   ///< input row of the SMOTE neighbor
    double u = 0.0;

    friend bool operator==(const RowOrigin&, const RowOrigin&) = default;
};

struct RebalanceResult {
    FeatureMatrix features;
    std::vector<int> labels;
    std::vector<RowOrigin> origins;
};

/// Rebalances a training matrix. Kept input rows come first in input
/// order; added rows follow.
RebalanceResult rebalance(const FeatureMatrix& features, std::span<const int> labels,
                          const ResampleConfig& config);

/// Audit CSV: row,kind,source,neighbor,u
void write_provenance_csv(std::ostream& out, const RebalanceResult& result);

} // namespace rebal
